"""Distance distributions of point sets and the collision functionals built on them."""

from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bitvec import Word

# Above this dimension (1 - gamma)**n can underflow; sum in the log domain.
LOG_DOMAIN_DIM = 512


class PointSet:
    """A nonempty set of distinct points of F_2^n, kept sorted."""

    __slots__ = ("points", "n")

    def __init__(self, points: Iterable[int | Word], n: int):
        if n < 1:
            raise ValueError("dimension must be positive")
        ints = set()
        for p in points:
            if isinstance(p, Word):
                if p.n != n:
                    raise ValueError(f"word of dimension {p.n} in a set of dimension {n}")
                p = p.bits
            if p < 0 or p >> n:
                raise ValueError(f"{p:#x} does not fit in {n} bits")
            ints.add(int(p))
        if not ints:
            raise ValueError("a PointSet must be nonempty")
        self.points = tuple(sorted(ints))
        self.n = n

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x) -> bool:
        if isinstance(x, Word):
            x = x.bits
        i = bisect_left(self.points, x)
        return i < len(self.points) and self.points[i] == x

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and self.n == other.n and self.points == other.points

    def __hash__(self) -> int:
        return hash((self.n, self.points))

    def __repr__(self) -> str:
        return f"PointSet(n={self.n}, size={len(self)})"

    def words(self) -> list[Word]:
        return [Word(p, self.n) for p in self.points]

    def embed(self, n: int) -> "PointSet":
        """The same integers viewed in a larger dimension (leading zeros)."""
        if n < self.n:
            raise ValueError("can only embed into a larger dimension")
        return PointSet(self.points, n)

    def to_literal(self) -> str:
        return f"{self.n}:" + ",".join(f"{p:x}" for p in self.points)

    @classmethod
    def from_literal(cls, text: str) -> "PointSet":
        """Parse ``"n:hex,hex,..."``."""
        n, _, body = text.partition(":")
        if not body:
            raise ValueError(f"bad set literal {text!r}; expected n:hex,hex,...")
        return cls((int(h, 16) for h in body.split(",") if h), int(n))


@dataclass(frozen=True)
class DistDist:
    """Coefficients ``A_0..A_n``: ordered pairs of the set at each distance."""

    coeffs: tuple[int, ...]
    n: int
    size: int

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError("need exactly n + 1 coefficients")
        if self.coeffs[0] != self.size or sum(self.coeffs) != self.size**2:
            raise ValueError("coefficients inconsistent with the set size")
        if min(self.coeffs) < 0:
            raise ValueError("negative pair count")

    @property
    def degree(self) -> int:
        return max(i for i, a in enumerate(self.coeffs) if a)

    def trimmed(self) -> tuple[int, ...]:
        return self.coeffs[: self.degree + 1]

    def polynomial(self) -> str:
        """Render as ``16+30x+210x^2``."""
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            if i == 0:
                terms.append(str(a))
            elif i == 1:
                terms.append(f"{a}x")
            else:
                terms.append(f"{a}x^{i}")
        return "+".join(terms)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "size": self.size, "coeffs": list(self.coeffs)})

    @classmethod
    def from_json(cls, text: str) -> "DistDist":
        d = json.loads(text)
        return cls(tuple(d["coeffs"]), d["n"], d["size"])

    def evaluate(self, zeta: Fraction | int) -> Fraction:
        """Exact value of A(S, zeta) at a rational point."""
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * zeta + a
        return acc


def _pair_counts_numpy(points: Sequence[int], n: int) -> list[int]:
    arr = np.array(points, dtype=np.uint64)
    counts = np.zeros(n + 1, dtype=np.int64)
    block = max(1, 2**22 // len(arr))
    for start in range(0, len(arr), block):
        d = np.bitwise_count(arr[start : start + block, None] ^ arr[None, :])
        counts += np.bincount(d.ravel(), minlength=n + 1)[: n + 1]
    return [int(c) for c in counts]


def distance_distribution(S: PointSet) -> DistDist:
    if S.n <= 64:
        coeffs = _pair_counts_numpy(S.points, S.n)
    else:
        coeffs = [0] * (S.n + 1)
        pts = S.points
        for i, x in enumerate(pts):
            coeffs[0] += 1
            for y in pts[i + 1 :]:
                coeffs[(x ^ y).bit_count()] += 2
    return DistDist(tuple(coeffs), S.n, len(S))


def _as_ddf(S: PointSet | DistDist) -> DistDist:
    return S if isinstance(S, DistDist) else distance_distribution(S)


def _check_gamma(gamma: float) -> None:
    if not 0.0 <= gamma < 0.5:
        raise ValueError(f"gamma must lie in [0, 1/2), got {gamma}")


def collision_probability(S: PointSet | DistDist, gamma: float) -> float:
    """P_S(gamma): chance that x + e stays in S for uniform x in S."""
    _check_gamma(gamma)
    ddf = _as_ddf(S)
    n, size = ddf.n, ddf.size
    if gamma == 0.0:
        return ddf.coeffs[0] / size
    if n <= LOG_DOMAIN_DIM:
        zeta = gamma / (1.0 - gamma)
        acc = 0.0
        for a in reversed(ddf.coeffs):
            acc = acc * zeta + a
        return (1.0 - gamma) ** n * acc / size
    lg, l1g = math.log(gamma), math.log1p(-gamma)
    logs = [math.log(a) + i * lg + (n - i) * l1g for i, a in enumerate(ddf.coeffs) if a]
    top = max(logs)
    return math.exp(top + math.log(math.fsum(math.exp(v - top) for v in logs)) - math.log(size))


def error_exponent(P: float, n: int) -> float:
    if not 0.0 < P <= 1.0:
        raise ValueError(f"probability must lie in (0, 1], got {P}")
    return -math.log2(P) / n


def rho_exponent(p1: float, p2: float) -> float:
    """lg(1/p1) / lg(1/p2)."""
    if not 0.0 < p1 <= 1.0 or not 0.0 < p2 < 1.0:
        raise ValueError(f"degenerate probabilities p1={p1}, p2={p2}")
    return math.log2(p1) / math.log2(p2)


def distance_sum(S: PointSet | DistDist) -> int:
    """Half the sum of all ordered-pair distances."""
    ddf = _as_ddf(S)
    total = sum(i * a for i, a in enumerate(ddf.coeffs))
    return total // 2
