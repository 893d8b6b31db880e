"""Sign changes of integer polynomials in zeta = gamma / (1 - gamma).

Collision probabilities of two sets share the factor ``(1 - gamma)**n``, so
comparing them reduces to the sign of an integer polynomial in ``zeta``.
Signs are always decided exactly: ``gamma`` is a float, hence a dyadic
rational, and ``zeta = a / (2**b - a)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

SCAN_STEP = 1e-3
GAMMA_EPS = 1e-8
BISECT_TOL = 1e-8
MAX_BISECT = 200


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_sub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    size = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(size)]


def trim(c: Sequence[int]) -> list[int]:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def one_plus_zeta_pow(e: int) -> list[int]:
    return [comb(e, i) for i in range(e + 1)]


def comparison_poly(
    coeffs_a: Sequence[int], n_a: int, size_a: int,
    coeffs_b: Sequence[int], n_b: int, size_b: int,
) -> list[int]:
    """Integer polynomial with the sign of ``P_A(gamma) - P_B(gamma)`` on ``(0, 1/2)``.

    ``P = (1 + zeta)**-n * A(zeta) / size``; multiplying through by
    ``(1 + zeta)**max(n) * size_a * size_b`` clears every denominator.
    """
    top = max(n_a, n_b)
    left = poly_mul([size_b * c for c in coeffs_a], one_plus_zeta_pow(top - n_a))
    right = poly_mul([size_a * c for c in coeffs_b], one_plus_zeta_pow(top - n_b))
    return trim(poly_sub(left, right))


def sign_at_gamma(coeffs: Sequence[int], gamma: float | Fraction) -> int:
    """Exact sign of ``sum c_i zeta**i`` at ``zeta = gamma / (1 - gamma)``."""
    g = Fraction(gamma)
    p, q = g.numerator, g.denominator - g.numerator  # zeta = p / q
    return sign_at_ratio(coeffs, p, q)


def sign_at_ratio(coeffs: Sequence[int], p: int, q: int) -> int:
    d = len(coeffs) - 1
    acc = coeffs[d]
    qp = 1
    for i in range(d - 1, -1, -1):
        qp *= q
        acc = acc * p + coeffs[i] * qp
    return (acc > 0) - (acc < 0)


def eval_float(coeffs: Sequence[int], zeta: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * zeta + c
    return acc


def bisect_sign_change(coeffs: Sequence[int], lo: float, hi: float, tol: float = BISECT_TOL) -> tuple[float, float]:
    """Shrink a certified bracket ``[lo, hi]`` (in gamma) to width ``tol``."""
    s_lo = sign_at_gamma(coeffs, lo)
    s_hi = sign_at_gamma(coeffs, hi)
    if s_lo * s_hi >= 0:
        raise ValueError("bracket does not certify a sign change")
    for _ in range(MAX_BISECT):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        s = sign_at_gamma(coeffs, mid)
        if s == 0:
            a, b = mid - tol / 4, mid + tol / 4
            if sign_at_gamma(coeffs, a) * sign_at_gamma(coeffs, b) < 0:
                return a, b
            s = s_lo  # tangential zero; keep searching to the right
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def gamma_sign_changes(
    coeffs: Sequence[int],
    lo: float = GAMMA_EPS,
    hi: float = 0.5 - GAMMA_EPS,
    step: float = SCAN_STEP,
    tol: float = BISECT_TOL,
) -> list[tuple[float, float]]:
    """All brackets in ``(lo, hi)`` where the polynomial changes sign.

    The interval is scanned on a grid of spacing ``step`` and every sign
    change is refined by bisection.  Sign changes closer together than
    ``step`` can be missed.
    """
    coeffs = trim(coeffs)
    if all(c == 0 for c in coeffs):
        return []
    count = max(1, int(round((hi - lo) / step)))
    grid = [lo + (hi - lo) * j / count for j in range(count + 1)]
    signs = [sign_at_gamma(coeffs, g) for g in grid]
    out = []
    prev_g, prev_s = grid[0], signs[0]
    for g, s in zip(grid[1:], signs[1:]):
        if s == 0:
            continue  # exact root on the grid: bracket from its neighbours
        if prev_s and s != prev_s:
            out.append(bisect_sign_change(coeffs, prev_g, g, tol))
        prev_g, prev_s = g, s
    return out
