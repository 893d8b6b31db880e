"""Points of the binary n-cube and the elementary maps acting on them.

A point is stored as a Python integer.  Coordinate 1 is the most significant
bit, so ``x = sum(2**(n - i) * x_i)``; the integers printed in the generator
tables (e.g. ``2**14`` in dimension 15) therefore decode to the expected
vectors without any reordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Recorded in reports so that experiments can be replayed exactly.
RNG_NAME = "numpy.random.PCG64"

MAX_DIM = 1024


def make_rng(*seed: int) -> np.random.Generator:
    """Seeded generator; extra integers derive independent streams."""
    return np.random.Generator(np.random.PCG64(list(seed)))


@dataclass(frozen=True, order=True)
class Word:
    """A vector in F_2^n packed into an integer."""

    bits: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DIM:
            raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"{self.bits:#x} does not fit in {self.n} bits")

    @classmethod
    def from_coords(cls, coords) -> "Word":
        coords = list(coords)
        bits = 0
        for c in coords:
            if c not in (0, 1):
                raise ValueError("coordinates must be 0 or 1")
            bits = (bits << 1) | c
        return cls(bits, len(coords))

    @classmethod
    def from_str(cls, s: str) -> "Word":
        """Parse either a bit string ``"1011"`` or the ``"n:hex"`` form."""
        if ":" in s:
            n, hexpart = s.split(":", 1)
            return cls(int(hexpart, 16), int(n))
        return cls.from_coords(int(c) for c in s)

    def coords(self) -> tuple[int, ...]:
        return tuple((self.bits >> (self.n - i)) & 1 for i in range(1, self.n + 1))

    def coord(self, i: int) -> int:
        _check_index(i, self.n)
        return (self.bits >> (self.n - i)) & 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __add__(self, other: "Word") -> "Word":
        _check_same_dim(self, other)
        return Word(self.bits ^ other.bits, self.n)

    def to_hex(self) -> str:
        return f"{self.n}:{self.bits:x}"

    def __str__(self) -> str:
        return "".join(map(str, self.coords()))


@dataclass(frozen=True)
class ErrorModel:
    """Independent bit flips with probability ``gamma``."""

    gamma: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.gamma < 0.5:
            raise ValueError(f"gamma must lie in [0, 1/2), got {self.gamma}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _check_same_dim(x: Word, y: Word) -> None:
    if x.n != y.n:
        raise ValueError(f"dimension mismatch: {x.n} != {y.n}")


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"coordinate {i} outside 1..{n}")


def hamming_distance(x: Word, y: Word) -> int:
    _check_same_dim(x, y)
    return (x.bits ^ y.bits).bit_count()


def random_error_bits(rng: np.random.Generator, gamma: float, n: int) -> int:
    """Integer whose bits are independent Bernoulli(gamma) draws."""
    flips = rng.random(n) < gamma
    pad = -n % 8
    packed = np.packbits(np.concatenate([flips, np.zeros(pad, dtype=bool)]))
    return int.from_bytes(packed.tobytes(), "big") >> pad


def random_error_array(rng: np.random.Generator, gamma: float, n: int, size: int) -> np.ndarray:
    """``size`` error vectors of dimension ``n <= 63`` as uint64."""
    if n > 63:
        raise ValueError("vectorised error sampling supports n <= 63")
    flips = rng.random((size, n)) < gamma
    weights = np.uint64(1) << np.arange(n - 1, -1, -1, dtype=np.uint64)
    return (flips.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)


def apply_error(x: Word, model: ErrorModel, rng: np.random.Generator | None = None) -> Word:
    """Return ``x + e`` with ``e`` drawn from ``model``.

    Without an explicit ``rng`` the generator is seeded from ``model.seed``,
    so the result is a pure function of ``(x, gamma, seed)``.
    """
    if model.gamma == 0.0:
        return x
    if rng is None:
        rng = make_rng(model.seed)
    return Word(x.bits ^ random_error_bits(rng, model.gamma, x.n), x.n)


def rho(x: Word, i: int) -> Word:
    """Clear coordinate ``i``."""
    _check_index(i, x.n)
    return Word(x.bits & ~(1 << (x.n - i)), x.n)


def sigma(x: Word, i: int, j: int) -> Word:
    """Swap coordinates ``i < j`` when coordinate ``i`` is set (moves a 1 right)."""
    _check_index(i, x.n)
    _check_index(j, x.n)
    if i >= j:
        raise ValueError(f"sigma needs i < j, got i={i}, j={j}")
    bi, bj = x.n - i, x.n - j
    if not (x.bits >> bi) & 1 or (x.bits >> bj) & 1:
        return x
    return Word(x.bits ^ (1 << bi) ^ (1 << bj), x.n)
