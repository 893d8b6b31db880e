"""Optimal right-shifted down-sets over the whole error range.

All sets of one size in one dimension share the factor ``(1-gamma)^n / s``
in their collision probability, so ranking them at any gamma only needs
their distance-distribution polynomials in ``zeta = gamma / (1 - gamma)``.

The search runs in three passes.  A coarse float grid over every distinct
polynomial keeps the rows that come close to the upper envelope.  A fine
grid over those rows finds the winner sequence, with exact integer
arithmetic wherever two rows are within float noise of each other.  Each
change of winner is then bisected exactly.  A regime narrower than the fine
grid spacing could be missed; nothing in the tables comes close.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numba import njit

from ..distdist import DistDist, PointSet
from ..polyroots import GAMMA_EPS, bisect_sign_change, sign_at_gamma, trim
from .genideal import KernelEnumerator, words_to_int
from .generators import GeneratorSet, minimal_generators
from .poset import ShiftPoset

COARSE_POINTS = 256
FINE_POINTS = 8192
NEAR_TIE = 1e-9
FLOAT_NOISE = 1e-12


@dataclass(frozen=True)
class OptimalityProfile:
    """A set that is optimal on some part of (0, 1/2), with its tied twins."""

    set: PointSet
    ddf: DistDist
    regimes: tuple[tuple[float, float], ...]
    representatives: tuple[PointSet, ...] = field(default=(), repr=False)

    def __post_init__(self):
        prev = 0.0
        for lo, hi in self.regimes:
            if not (prev <= lo < hi <= 0.5):
                raise ValueError(f"regimes must be disjoint, increasing and inside (0, 1/2): {self.regimes}")
            prev = hi

    @property
    def gamma_cross(self) -> float:
        """Where this set first becomes optimal (0 for the small-gamma winner)."""
        return self.regimes[0][0]

    @property
    def generators(self) -> list[GeneratorSet]:
        reps = self.representatives or (self.set,)
        return [minimal_generators(r) for r in reps]


@dataclass(frozen=True)
class TableRow:
    t: int
    n: int
    gamma_cross: float
    ddf: DistDist
    generators: tuple[GeneratorSet, ...]


# --------------------------------------------------------------------------
# catalog of distinct distance distributions
# --------------------------------------------------------------------------

def _check_tn(t: int, n: int) -> None:
    if not 1 <= t <= 6:
        raise ValueError(f"t must lie in 1..6, got {t}")
    if not t <= n <= (1 << t) - 1:
        raise ValueError(f"n must lie in {t}..{(1 << t) - 1} for t={t}, got {n}")


def _key_weights(D: int) -> np.ndarray:
    rng = np.random.default_rng(0x5EED)
    return rng.integers(1, 2**62, size=D, dtype=np.int64)


class Catalog:
    """Distinct ddfs of all rsds of size ``2**t`` inside ``F_2^n``.

    ``coeffs[i]`` is a ddf (pair counts by distance) and ``mindim[i]`` the
    smallest dimension holding a set with that ddf.
    """

    def __init__(self, t: int, n: int):
        _check_tn(t, n)
        self.t, self.n, self.size = t, n, 1 << t
        self.poset = ShiftPoset.build(n, self.size)
        self.enum = KernelEnumerator(self.poset, self.size)
        self.D = self.enum.D
        parts = []
        for batch in self.enum.batches():
            parts.append(_reduce(np.concatenate([batch.ddfs, batch.dims[:, None]], axis=1)))
            if len(parts) > 16:
                parts = [_reduce(np.concatenate(parts))]
        rows = _reduce(np.concatenate(parts)) if parts else np.zeros((0, self.D + 1), np.int64)
        self.coeffs = rows[:, :-1]
        self.mindim = rows[:, -1]
        self.U = _reduced(self.coeffs, self.size)

    def __len__(self) -> int:
        return len(self.mindim)

    def ddf(self, i: int, n: int | None = None) -> DistDist:
        n = self.n if n is None else n
        c = trim(int(v) for v in self.coeffs[i])
        return DistDist(tuple(c + [0] * (n + 1 - len(c))), n, self.size)

    def sets_with(self, wanted: list[int], max_dim: int | None = None) -> dict[int, list[PointSet]]:
        """Every set whose ddf is one of the rows ``wanted`` (second enumeration pass)."""
        w = _key_weights(self.D)
        keys = {int((self.coeffs[i] * w).sum()): i for i in wanted}
        out: dict[int, list[PointSet]] = {i: [] for i in wanted}
        key_arr = np.array(sorted(keys), dtype=np.int64)
        for batch in self.enum.batches():
            bk = (batch.ddfs * w).sum(axis=1)
            hit = np.nonzero(np.isin(bk, key_arr))[0]
            for j in hit:
                i = keys[int(bk[j])]
                if not np.array_equal(batch.ddfs[j], self.coeffs[i]):
                    continue
                if max_dim is not None and batch.dims[j] > max_dim:
                    continue
                pts = self.poset.members(words_to_int(batch.masks[j]))
                out[i].append(PointSet(pts, self.n))
        for i in out:
            out[i].sort(key=lambda S: minimal_generators(S).gens, reverse=True)
        return out


def _reduce(rows: np.ndarray) -> np.ndarray:
    """Distinct ddfs, each with its smallest dimension."""
    if len(rows) == 0:
        return rows
    order = np.lexsort(rows.T[::-1])
    rows = rows[order]
    ddf = rows[:, :-1]
    first = np.ones(len(rows), dtype=bool)
    first[1:] = np.any(ddf[1:] != ddf[:-1], axis=1)
    return rows[first]


# --------------------------------------------------------------------------
# envelope
# --------------------------------------------------------------------------

def _reduced(coeffs: np.ndarray, size: int) -> np.ndarray:
    """``(A(zeta) - s - (s^2 - s) zeta) / (zeta (1 - zeta))`` row by row.

    Every ddf of size s has A(0) = s and A(1) = s^2, so all the curves meet
    at both ends of the range.  Dividing out the shared part keeps the
    ordering on (0, 1) but separates the curves near the ends, where
    otherwise every row is within rounding of every other.
    """
    p = coeffs[:, 1:].astype(np.int64).copy()
    p[:, 0] -= size * size - size
    q = np.cumsum(p, axis=1)  # division by (1 - zeta); the remainder q[:, -1] is zero
    if np.any(q[:, -1] != 0):
        raise ArithmeticError("pair counts do not sum to size^2")
    return q[:, :-1] if q.shape[1] > 1 else q


def _zeta_powers(gammas: np.ndarray, D: int) -> np.ndarray:
    z = gammas / (1.0 - gammas)
    return z[None, :] ** np.arange(D)[:, None]


def _zeta_derivs(gammas: np.ndarray, D: int) -> tuple[np.ndarray, np.ndarray]:
    """First and second gamma-derivatives of each power ``zeta**i``."""
    z = gammas / (1.0 - gammas)
    dz = 1.0 / (1.0 - gammas) ** 2
    d2z = 2.0 / (1.0 - gammas) ** 3
    i = np.arange(D)[:, None].astype(float)
    zi1 = np.where(i >= 1, z[None, :] ** np.maximum(i - 1, 0), 0.0)
    zi2 = np.where(i >= 2, z[None, :] ** np.maximum(i - 2, 0), 0.0)
    return i * zi1 * dz, i * (i - 1) * zi2 * dz**2 + i * zi1 * d2z


def _exact_value(coeffs, g: Fraction) -> Fraction:
    z = g / (1 - g)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * z + int(c)
    return acc


@njit(cache=True)
def _filter_kernel(C, dimpos, ndims, Z, Z1, Z2, h, noise):
    m, W = C.shape
    G = Z.shape[0]
    # envelope value and winning row per dimension prefix
    best = np.full((ndims, G), -np.inf)
    arg = np.zeros((ndims, G), dtype=np.int64)
    for r in range(m):
        d = dimpos[r]
        for j in range(G):
            v = 0.0
            for i in range(W):
                v += C[r, i] * Z[j, i]
            if v > best[d, j]:
                best[d, j] = v
                arg[d, j] = r
    for d in range(1, ndims):
        for j in range(G):
            if best[d - 1, j] > best[d, j]:
                best[d, j] = best[d - 1, j]
                arg[d, j] = arg[d - 1, j]
    e1 = np.zeros((ndims, G))
    e2 = np.zeros((ndims, G))
    for d in range(ndims):
        for j in range(G):
            w = arg[d, j]
            for i in range(W):
                e1[d, j] += C[w, i] * Z1[j, i]
                e2[d, j] += C[w, i] * Z2[j, i]
    keep = np.zeros(m, dtype=np.bool_)
    for r in range(m):
        d = dimpos[r]
        for j in range(G):
            v = 0.0
            for i in range(W):
                v += C[r, i] * Z[j, i]
            d0 = v - best[d, j]
            tol = -noise * abs(best[d, j])
            if d0 >= tol:
                keep[r] = True
                break
            d1 = -e1[d, j]
            d2 = -e2[d, j]
            for i in range(W):
                d1 += C[r, i] * Z1[j, i]
                d2 += C[r, i] * Z2[j, i]
            hj = h[j]
            if d2 > 0:
                reach = max(d0, d0 + hj * d1 + hj * hj * d2)
            else:
                reach = d0 + hj * max(d1, 0.0)
            if reach >= tol:
                keep[r] = True
                break
    return keep


def _coarse_candidates(cat: Catalog) -> np.ndarray:
    """Rows that might top the envelope of their own dimension somewhere.

    Works on the reduced polynomials.  At each coarse grid point a row is
    kept if a second-order Taylor bound over the gap to the right lets it
    reach the current winner.  The curvature term is doubled, so a convex
    bound peaks at an end of the gap; otherwise it grows at most linearly.
    """
    gam = np.linspace(GAMMA_EPS, 0.5 - GAMMA_EPS, COARSE_POINTS)
    h = np.append(np.diff(gam), 0.0)
    W = cat.U.shape[1]
    Z = _zeta_powers(gam, W)
    Z1, Z2 = _zeta_derivs(gam, W)
    dims = np.unique(cat.mindim)
    dimpos = np.searchsorted(dims, cat.mindim)
    keep = _filter_kernel(cat.U.astype(float), dimpos, len(dims), np.ascontiguousarray(Z.T),
                          np.ascontiguousarray(Z1.T), np.ascontiguousarray(Z2.T), h, FLOAT_NOISE)
    return np.nonzero(keep)[0]


def _winners(cat: Catalog, rows: np.ndarray, V: np.ndarray, gam: np.ndarray) -> list[int]:
    """Best row at each grid point; near-ties are settled in exact arithmetic."""
    top = V.max(axis=0)
    near = V >= top - NEAR_TIE * np.abs(top)
    out = rows[np.argmax(V, axis=0)].tolist()
    for j in np.nonzero(near.sum(axis=0) > 1)[0]:
        G = Fraction(float(gam[j]))
        out[j] = int(max(rows[near[:, j]], key=lambda i: (_exact_value(cat.U[i], G), tuple(cat.coeffs[i]))))
    return out


def _crossing(cat: Catalog, a: int, b: int, lo: float, hi: float) -> float:
    diff = trim((cat.coeffs[b] - cat.coeffs[a]).tolist())
    span = hi - lo
    for widen in range(8):
        l, h = max(GAMMA_EPS, lo - widen * span), min(0.5 - GAMMA_EPS, hi + widen * span)
        if sign_at_gamma(diff, l) * sign_at_gamma(diff, h) < 0:
            bl, bh = bisect_sign_change(diff, l, h)
            return 0.5 * (bl + bh)
    raise ArithmeticError("winner changed without a certified sign change")


def envelope(cat: Catalog, n: int, candidates: np.ndarray | None = None) -> list[tuple[int, float, float]]:
    """``(row, gamma_lo, gamma_hi)`` regimes of the optimal ddf among sets in F_2^n."""
    if candidates is None:
        candidates = _coarse_candidates(cat)
    rows = candidates[cat.mindim[candidates] <= n]
    gam = np.linspace(GAMMA_EPS, 0.5 - GAMMA_EPS, FINE_POINTS)
    V = cat.U[rows].astype(float) @ _zeta_powers(gam, cat.U.shape[1])
    winners = _winners(cat, rows, V, gam)
    out = []
    start = 0.0
    for j in range(1, len(gam)):
        a, b = winners[j - 1], winners[j]
        if a != b:
            x = _crossing(cat, a, b, float(gam[j - 1]), float(gam[j]))
            out.append((a, start, x))
            start = x
    out.append((winners[-1], start, 0.5))
    return out


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def _profiles(cat: Catalog, regimes, n: int) -> list[OptimalityProfile]:
    by_row: dict[int, list[tuple[float, float]]] = {}
    for row, lo, hi in regimes:
        by_row.setdefault(row, []).append((lo, hi))
    sets = cat.sets_with(list(by_row), max_dim=n)
    out = []
    for row, regs in by_row.items():
        reps = tuple(S.embed(n) if S.n != n else S for S in sets[row])
        ddf = cat.ddf(row, n)
        out.append(OptimalityProfile(reps[0], ddf, tuple(regs), reps))
    out.sort(key=lambda p: p.gamma_cross)
    return out


def optimal_sets(t: int, n: int) -> list[OptimalityProfile]:
    """Every rsds of size ``2**t`` in ``F_2^n`` that is optimal somewhere in (0, 1/2)."""
    _check_tn(t, n)
    cat = Catalog(t, n)
    return _profiles(cat, envelope(cat, n), n)


def optimal_table(t: int, dims=None) -> list[TableRow]:
    """Rows of the optimal-set table for size ``2**t``.

    A row is printed at the first dimension where a set joins the optimal
    envelope; its gamma_cross is where that set takes over.  Sets sharing a
    ddf are reported together.
    """
    top = (1 << t) - 1
    _check_tn(t, top)
    cat = Catalog(t, top)
    cand = _coarse_candidates(cat)
    dims = range(t, top + 1) if dims is None else dims
    fresh: list[tuple[int, int, float]] = []
    for n in dims:
        for row, lo, _ in envelope(cat, n, cand):
            if cat.mindim[row] == n and not any(r == row for r, _, _ in fresh):
                fresh.append((row, n, lo))
    sets = cat.sets_with([r for r, _, _ in fresh])
    out = []
    for row, n, lo in fresh:
        gens = tuple(minimal_generators(PointSet(S.points, n)) for S in sets[row]
                     if max(S.points).bit_length() <= n)
        out.append(TableRow(t, n, lo, cat.ddf(row, n), gens))
    return out
