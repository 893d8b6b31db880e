"""Crossover solvers and the random-code exponent bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .codes import BlockCode, ConcatenatedCode, ProjectionCode, zero_set
from .distdist import DistDist, PointSet, distance_distribution
from .polyroots import comparison_poly, gamma_sign_changes, poly_mul, sign_at_gamma, sign_at_ratio, trim


@dataclass(frozen=True)
class CrossoverReport:
    gamma_cross: float
    bracket: tuple[float, float]
    lhs: str
    rhs: str
    # +1 when lhs has the larger collision probability just above the crossover
    lhs_wins_above: int

    def __post_init__(self):
        lo, hi = self.bracket
        if not (0.0 < lo <= hi < 0.5) or hi - lo > 1e-6:
            raise ValueError(f"bad bracket {self.bracket}")

    def row(self) -> tuple[str, str, float, float, float]:
        return (self.lhs, self.rhs, self.gamma_cross, *self.bracket)


@dataclass(frozen=True)
class Curve:
    """``P(gamma) = sum A_i gamma^i (1-gamma)^(n-i) / size`` with a label."""

    coeffs: tuple[int, ...]
    n: int
    size: int
    label: str


def as_curve(obj, label: str | None = None) -> Curve:
    """Collision curve of a DistDist, PointSet or BlockCode.

    Projection codes use the closed form ``(1 - gamma)**k``, which is the
    curve of a single point in dimension k; their zero-sets can be huge.
    A concatenation's zero-set is a product and distances add across the
    two blocks, so its ddf is the product of the two ddf polynomials.
    """
    if isinstance(obj, Curve):
        return obj
    if isinstance(obj, ProjectionCode):
        return Curve((1,) + (0,) * obj.k, obj.k, 1, label or obj.label)
    if isinstance(obj, ConcatenatedCode):
        a, b = as_curve(obj.a), as_curve(obj.b)
        return Curve(tuple(poly_mul(a.coeffs, b.coeffs)), a.n + b.n, a.size * b.size, label or obj.label)
    if isinstance(obj, BlockCode):
        ddf = distance_distribution(zero_set(obj))
        return Curve(ddf.coeffs, ddf.n, ddf.size, label or obj.label)
    if isinstance(obj, PointSet):
        obj = distance_distribution(obj)
    if isinstance(obj, DistDist):
        return Curve(obj.coeffs, obj.n, obj.size, label or obj.polynomial())
    raise TypeError(f"cannot build a collision curve from {type(obj).__name__}")


def _code_k(obj) -> int | None:
    return obj.k if isinstance(obj, BlockCode) else None


def crossover(a, b, label_a: str | None = None, label_b: str | None = None) -> list[CrossoverReport]:
    """Every gamma in (0, 1/2) where ``P_a - P_b`` changes sign.

    Sets must share a dimension; codes must share k (then hashes of equal
    output size are being compared).  An empty list means "none".
    """
    ka, kb = _code_k(a), _code_k(b)
    ca, cb = as_curve(a, label_a), as_curve(b, label_b)
    if ka is not None and kb is not None:
        if ka != kb:
            raise ValueError(f"codes must have equal k, got {ka} and {kb}")
    elif ca.n != cb.n:
        raise ValueError(f"dimension mismatch: {ca.n} != {cb.n}")
    poly = comparison_poly(ca.coeffs, ca.n, ca.size, cb.coeffs, cb.n, cb.size)
    reports = []
    for lo, hi in gamma_sign_changes(poly):
        above = 1 if sign_at_gamma(poly, hi) > 0 else -1
        reports.append(CrossoverReport(0.5 * (lo + hi), (lo, hi), ca.label, cb.label, above))
    return reports


def zeta_to_gamma(zeta: float) -> float:
    return zeta / (1.0 + zeta)


def gamma_to_zeta(gamma: float) -> float:
    return gamma / (1.0 - gamma)


# --------------------------------------------------------------------------
# Hamming codes against projection
# --------------------------------------------------------------------------

def hamming_f_coeffs(m: int) -> list[int]:
    """Coefficients of A(m-cube) - A(1-sphere in dimension 2^m - 1)."""
    s = 1 << m
    cube = [s * comb(m, i) for i in range(m + 1)]
    sphere = [s, 2 * (s - 1), (s - 1) * (s - 2)]
    return trim([(cube[i] if i < len(cube) else 0) - (sphere[i] if i < 3 else 0)
                 for i in range(max(len(cube), 3))])


@dataclass(frozen=True)
class HammingRoot:
    m: int
    alpha: float
    bracket: tuple[float, float]  # in zeta
    bound: tuple[float, float]  # ((m-2)/2^m, m/2^m)

    @property
    def gamma(self) -> float:
        return zeta_to_gamma(self.alpha)

    @property
    def within_bound(self) -> bool:
        return self.bound[0] < self.bracket[0] and self.bracket[1] < self.bound[1]


def hamming_alpha(m: int, tol: float = 1e-12) -> HammingRoot:
    """The root of f_m in (0, 1) other than zeta = 1."""
    if m < 4:
        raise ValueError("the root lies in (0, 1) only for m >= 4")
    f = hamming_f_coeffs(m)
    s = 1 << m

    def sign(z: Fraction) -> int:
        return sign_at_ratio(f, z.numerator, z.denominator)

    # f > 0 just right of 0 and f < 0 just left of 1 (f'(0), f'(1) > 0)
    lo, hi = Fraction(1, 4 * s * s), Fraction(1) - Fraction(1, 4 * s * s)
    if not (sign(lo) > 0 and sign(hi) < 0):
        raise ArithmeticError("root bracket lost")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        mid = Fraction(float(mid))  # keep denominators dyadic and small
        if not lo < mid < hi:
            break
        if sign(mid) > 0:
            lo = mid
        else:
            hi = mid
    return HammingRoot(m, float((lo + hi) / 2), (float(lo), float(hi)), ((m - 2) / s, m / s))


# --------------------------------------------------------------------------
# Random codes (Gilbert-Varshamov regime)
# --------------------------------------------------------------------------

def binary_entropy(delta: float) -> float:
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"entropy argument must lie in [0, 1], got {delta}")
    if delta in (0.0, 1.0):
        return 0.0
    return -delta * math.log2(delta) - (1.0 - delta) * math.log2(1.0 - delta)


@dataclass(frozen=True)
class AsymptoticParams:
    R: float
    delta: float
    gamma: float
    eps: float

    def __post_init__(self):
        if not 0 < self.R < 1:
            raise ValueError("rate must lie in (0, 1)")
        if not 0 < self.delta < 0.5 or not 0 < self.gamma < 0.5 or not 0 < self.eps <= 0.5:
            raise ValueError("delta, gamma in (0, 1/2) and eps in (0, 1/2] required")
        if binary_entropy(self.delta) >= 1 - self.R:
            raise ValueError("H(delta) < 1 - R (Gilbert-Varshamov) violated")
        if self.eps > 2 * self.delta:
            raise ValueError("eps must not exceed 2 delta")


def _check_open_half(name: str, value: float) -> None:
    if not 0.0 < value < 0.5:
        raise ValueError(f"{name} must lie in (0, 1/2), got {value}")


def epsilon_max(gamma: float, delta: float) -> float:
    """Maximiser in eps of the random-code exponent bound.

    Positive root of ``(K^2 - 1) eps^2 + 2 eps - 4 delta (1 - delta) = 0``
    with ``K = (1 - gamma) / gamma``.
    """
    _check_open_half("gamma", gamma)
    _check_open_half("delta", delta)
    a = ((1.0 - gamma) / gamma) ** 2 - 1.0
    c = 4.0 * delta * (1.0 - delta)
    # rationalised root; stays accurate as a -> 0
    return c / (1.0 + math.sqrt(1.0 + a * c))


def random_code_exponent_bound(gamma: float, delta: float, eps: float) -> float:
    """Lower bound on -E of a random code (larger is better for the code)."""
    if eps > 2 * delta or eps > 2 * (1 - delta) or eps < 0:
        raise ValueError(f"eps={eps} outside [0, 2 delta]")
    return (
        eps * math.log2(gamma)
        + (1.0 - eps) * math.log2(1.0 - gamma)
        + delta * binary_entropy(eps / (2 * delta))
        + (1.0 - delta) * binary_entropy(eps / (2 * (1.0 - delta)))
    )


def projection_exponent(gamma: float, rate: float) -> float:
    return -rate * math.log2(1.0 - gamma)


def exponent_gap(gamma: float, delta: float, eps: float) -> float:
    """D(gamma, delta, eps): lower bound on E(projection) - E(random code) at R = 1 - H(delta)."""
    _check_open_half("gamma", gamma)
    _check_open_half("delta", delta)
    return random_code_exponent_bound(gamma, delta, eps) + projection_exponent(
        gamma, 1.0 - binary_entropy(delta)
    )


def critical_gamma(delta: float) -> float:
    """Stationary point of gamma -> D(gamma, delta, eps_max(gamma, delta))."""
    _check_open_half("delta", delta)
    h = binary_entropy(delta)
    g = (4 * delta * (1 - delta) - h * h) / (2 * (h - h * h))
    if not 0.0 < g < 0.5:
        raise ArithmeticError(f"critical gamma {g} left (0, 1/2)")
    return g


def random_code_collision_lower_bound(n: int, delta: float, gamma: float) -> float:
    """``sum_{i<=d} C(d,i) C(n-d,i) gamma^(2i) (1-gamma)^(n-2i)`` with d = floor(delta n)."""
    if not 0.0 <= delta <= 0.5:
        raise ValueError("delta must lie in [0, 1/2]")
    if not 0.0 <= gamma < 0.5:
        raise ValueError("gamma must lie in [0, 1/2)")
    d = math.floor(delta * n)
    if gamma == 0.0:
        return 1.0
    lg, l1g = math.log(gamma), math.log1p(-gamma)

    def log_comb(a: int, b: int) -> float:
        return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)

    terms = [
        log_comb(d, i) + log_comb(n - d, i) + 2 * i * lg + (n - 2 * i) * l1g
        for i in range(min(d, n - d) + 1)
    ]
    top = max(terms)
    return math.exp(top + math.log(math.fsum(math.exp(t - top) for t in terms)))


def asymptotic_grid(gammas, deltas) -> list[tuple[float, float, float, float]]:
    """Rows ``(gamma, delta, eps_max, D)`` for plotting."""
    rows = []
    for d in deltas:
        for g in gammas:
            e = epsilon_max(g, d)
            rows.append((g, d, e, exponent_gap(g, d, e)))
    return rows
