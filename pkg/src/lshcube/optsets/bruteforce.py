"""Exhaustive checks over all subsets of small cubes, and distance-sum optima."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from ..distdist import PointSet
from .genideal import MAX_TARGET, KernelEnumerator
from .poset import ShiftPoset

CHUNK = 1 << 16


def distance_sum_optimal(s: int, n: int) -> PointSet:
    """An rsds of ``s`` points in ``F_2^n`` with the least sum of pairwise distances.

    Among several optima the first one enumerated is returned.
    """
    if not 1 <= s <= MAX_TARGET:
        raise ValueError(f"size must lie in 1..{MAX_TARGET}")
    if not 1 <= n <= 63:
        raise ValueError("dimension must lie in 1..63")
    if s > 1 << n:
        raise ValueError(f"{s} points do not fit in F_2^{n}")
    enum = KernelEnumerator(ShiftPoset.build(n, s), s)
    best, best_words = None, None
    for batch in enum.batches():
        sums = batch.ddfs @ np.arange(batch.ddfs.shape[1])
        j = int(np.argmin(sums))
        if best is None or sums[j] < best:
            best, best_words = int(sums[j]), batch.masks[j].copy()
    return PointSet(enum.mask_to_points(best_words), n)


# --------------------------------------------------------------------------
# all s-subsets of F_2^n
# --------------------------------------------------------------------------

def _subsets_with_zero(n: int, s: int):
    """Chunks of s-subsets of F_2^n that contain 0 (one per translation class)."""
    it = combinations(range(1, 1 << n), s - 1)
    while True:
        block = np.fromiter((v for c in _take(it, CHUNK) for v in c), dtype=np.int64)
        if block.size == 0:
            return
        rows = block.reshape(-1, s - 1)
        yield np.concatenate([np.zeros((len(rows), 1), dtype=np.int64), rows], axis=1)


def _take(it, k):
    for _ in range(k):
        try:
            yield next(it)
        except StopIteration:
            return


def subset_ddfs(n: int, s: int):
    """Pair counts by distance (ordered pairs, diagonal included) for chunks of subsets."""
    iu, ju = np.triu_indices(s, 1)
    for rows in _subsets_with_zero(n, s):
        d = np.bitwise_count((rows[:, iu] ^ rows[:, ju]).astype(np.uint64)).astype(np.int64)
        A = np.zeros((len(rows), n + 1), dtype=np.int64)
        A[:, 0] = s
        for k in range(1, n + 1):
            A[:, k] = 2 * (d == k).sum(axis=1)
        yield rows, A


def _exact(A_row, g: Fraction) -> Fraction:
    z = g / (1 - g)
    acc = Fraction(0)
    for c in reversed(A_row):
        acc = acc * z + int(c)
    return acc


@dataclass(frozen=True)
class ExhaustiveResult:
    n: int
    s: int
    gamma: float
    subsets: int  # subsets containing 0 examined
    best_ddf: tuple[int, ...]
    best_set: tuple[int, ...]


def exhaustive_best(n: int, s: int, gamma: float) -> tuple[ExhaustiveResult, list[tuple[int, ...]]]:
    """Best s-subset of F_2^n at ``gamma``; also every distinct ddf that ties it.

    Collision probability is translation invariant, so only subsets holding
    0 are visited.  Floats pick the near-best ddfs, exact rationals decide.
    """
    g = Fraction(gamma)
    z = gamma / (1 - gamma)
    powers = z ** np.arange(n + 1)
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    top = -np.inf
    count = 0
    for rows, A in subset_ddfs(n, s):
        count += len(rows)
        v = A @ powers
        m = v.max()
        if m < top * (1 - 1e-9):
            continue
        top = max(top, m)
        for j in np.nonzero(v >= top * (1 - 1e-9))[0]:
            key = tuple(int(a) for a in A[j])
            seen.setdefault(key, tuple(int(x) for x in rows[j]))
    best_val = max(_exact(k, g) for k in seen)
    ties = [k for k in seen if _exact(k, g) == best_val]
    key = max(ties)
    return ExhaustiveResult(n, s, gamma, count, key, seen[key]), ties


def subcube_strictly_optimal(n: int, k: int, gamma: float | None = None) -> bool:
    """Every 2^(n-k)-subset doing at least as well as a subcube has the subcube's ddf."""
    t = n - k
    s = 1 << t
    if gamma is None:
        gamma = 0.9 * 2.0 ** (-2 * t)
    cube = tuple(s * comb(t, i) for i in range(t + 1)) + (0,) * (n - t)
    _, ties = exhaustive_best(n, s, gamma)
    return ties == [cube]


def rsds_best_ddfs(n: int, s: int, gamma: float) -> list[tuple[int, ...]]:
    """Distinct optimal ddfs among right-shifted down-sets at ``gamma``."""
    enum = KernelEnumerator(ShiftPoset.build(n, s), s)
    g = Fraction(gamma)
    found = set()
    for batch in enum.batches():
        for row in batch.ddfs:
            c = [int(v) for v in row][: n + 1]
            found.add(tuple(c + [0] * (n + 1 - len(c))))
    best = max(_exact(k, g) for k in found)
    return sorted(k for k in found if _exact(k, g) == best)
