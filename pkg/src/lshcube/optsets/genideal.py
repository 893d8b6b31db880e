"""Enumeration of right-shifted down-sets of a fixed size.

GenIdeal splits on a pivot x: ideals containing x (add the down-set of x)
and ideals avoiding x (drop the up-set of x).  The search stops as soon as
the ideal reaches the target size, and elements whose own down-set exceeds
the target are never in the poset to begin with.

Two implementations share the recursion: :func:`genideal_reference` is
plain Python over integer bitmasks; :class:`KernelEnumerator` is a resumable
numba loop that also accumulates each ideal's distance distribution
incrementally.  The tests check one against the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numba import njit

from ..distdist import PointSet
from .poset import ShiftPoset

MAX_TARGET = 64
PIVOT_MODES = ("middle", "first")


def _select_bit(mask: int, k: int) -> int:
    """Index of the k-th (0-based) set bit of ``mask``."""
    lo, hi = 0, mask.bit_length()
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (mask & ((1 << mid) - 1)).bit_count() > k:
            hi = mid
        else:
            lo = mid
    return lo


def _pivot(Q: int, mode: str) -> int:
    if mode == "first":
        return (Q & -Q).bit_length() - 1
    return _select_bit(Q, Q.bit_count() // 2)


def genideal_reference(poset: ShiftPoset, target: int, pivot: str = "middle") -> Iterator[int]:
    """Yield each ideal of exactly ``target`` elements as an index bitmask."""
    if pivot not in PIVOT_MODES:
        raise ValueError(f"pivot must be one of {PIVOT_MODES}")
    down, up = poset.down, poset.up

    def rec(Q: int, I: int, size: int):
        if size == target:
            yield I
            return
        if size + Q.bit_count() < target:
            return
        x = _pivot(Q, pivot)
        D = down[x] & Q
        nd = D.bit_count()
        if size + nd <= target:
            yield from rec(Q & ~D, I | D, size + nd)
        yield from rec(Q & ~up[x], I, size)

    yield from rec((1 << len(poset)) - 1, 0, 0)


# --------------------------------------------------------------------------
# numba kernel
# --------------------------------------------------------------------------

def _to_words(mask: int, W: int) -> np.ndarray:
    out = np.zeros(W, dtype=np.uint64)
    for w in range(W):
        out[w] = (mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def words_to_int(words) -> int:
    return sum(int(w) << (64 * i) for i, w in enumerate(words))


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, inline="always")
def _ctz(x):
    # index of lowest set bit of a nonzero uint64
    return _popcount((x & (~x + np.uint64(1))) - np.uint64(1))


@njit(cache=True)
def _kernel(down, up, dist, edim, target, pivot_first, count_only,
            stQ, stI, stSize, stDim, stDdf, sp,
            outI, outDdf, outDim, cap):
    W = down.shape[1]
    D = stDdf.shape[1]
    Q = np.zeros(W, dtype=np.uint64)
    I = np.zeros(W, dtype=np.uint64)
    ddf = np.zeros(D, dtype=np.int64)
    nout = 0
    count = 0
    one = np.uint64(1)
    while sp > 0:
        if not count_only and nout == cap:
            break
        sp -= 1
        size = stSize[sp]
        if size == target:
            count += 1
            if not count_only:
                for w in range(W):
                    outI[nout, w] = stI[sp, w]
                for d in range(D):
                    outDdf[nout, d] = stDdf[sp, d]
                outDim[nout] = stDim[sp]
                nout += 1
            continue
        qc = 0
        for w in range(W):
            Q[w] = stQ[sp, w]
            I[w] = stI[sp, w]
            qc += _popcount(Q[w])
        if size + qc < target:
            continue
        dim = stDim[sp]
        for d in range(D):
            ddf[d] = stDdf[sp, d]
        # pivot: first or middle set bit of Q in index order
        k = 0 if pivot_first else qc // 2
        x = -1
        for w in range(W):
            c = _popcount(Q[w])
            if k < c:
                v = Q[w]
                for _ in range(k):
                    v &= v - one
                x = 64 * w + _ctz(v)
                break
            k -= c
        # exclude x: Q minus the up-set of x
        rest = 0
        for w in range(W):
            stQ[sp, w] = Q[w] & ~up[x, w]
            stI[sp, w] = I[w]
            rest += _popcount(stQ[sp, w])
        if size + rest >= target:
            stSize[sp] = size
            stDim[sp] = dim
            for d in range(D):
                stDdf[sp, d] = ddf[d]
            sp += 1
        # include x: add the part of its down-set still in Q
        nd = 0
        for w in range(W):
            nd += _popcount(down[x, w] & Q[w])
        if size + nd <= target:
            for w in range(W):
                newbits = down[x, w] & Q[w]
                stQ[sp, w] = Q[w] & ~newbits
                stI[sp, w] = I[w]
            for d in range(D):
                stDdf[sp, d] = ddf[d]
            if not count_only:
                for w in range(W):
                    newbits = down[x, w] & Q[w]
                    while newbits:
                        e = 64 * w + _ctz(newbits)
                        newbits &= newbits - one
                        stDdf[sp, 0] += 1
                        for w2 in range(W):
                            cur = stI[sp, w2]
                            while cur:
                                f = 64 * w2 + _ctz(cur)
                                cur &= cur - one
                                stDdf[sp, dist[e, f]] += 2
                        stI[sp, w] |= one << np.uint64(e - 64 * w)
            else:
                for w in range(W):
                    stI[sp, w] = I[w] | (down[x, w] & Q[w])
            stSize[sp] = size + nd
            stDim[sp] = max(dim, edim[x])
            sp += 1
    return sp, nout, count


@dataclass
class Batch:
    """Ideals found in one kernel call."""

    masks: np.ndarray  # (m, W) uint64 index bitmasks
    ddfs: np.ndarray  # (m, D) int64 pair counts by distance
    dims: np.ndarray  # (m,) smallest ambient dimension holding the set


class KernelEnumerator:
    """Resumable driver around the numba kernel."""

    def __init__(self, poset: ShiftPoset, target: int, pivot: str = "middle", batch: int = 1 << 16):
        if pivot not in PIVOT_MODES:
            raise ValueError(f"pivot must be one of {PIVOT_MODES}")
        self.poset = poset
        self.target = target
        self.pivot = pivot
        self.batch = batch
        P = len(poset)
        self.W = W = max(1, (P + 63) // 64)
        self.down = np.array([_to_words(m, W) for m in poset.down], dtype=np.uint64)
        self.up = np.array([_to_words(m, W) for m in poset.up], dtype=np.uint64)
        el = np.array(poset.elements, dtype=np.uint64)
        dist = np.bitwise_count(el[:, None] ^ el[None, :]).astype(np.int64)
        self.dist = dist
        self.D = int(dist.max()) + 1 if P else 1
        self.edim = np.array([x.bit_length() for x in poset.elements], dtype=np.int64)

    def _fresh_stack(self):
        P, W, D = len(self.poset), self.W, self.D
        depth = P + 4
        stQ = np.zeros((depth, W), dtype=np.uint64)
        stQ[0] = _to_words((1 << P) - 1, W)
        return (stQ, np.zeros((depth, W), dtype=np.uint64), np.zeros(depth, dtype=np.int64),
                np.zeros(depth, dtype=np.int64), np.zeros((depth, D), dtype=np.int64))

    def count(self) -> int:
        stack = self._fresh_stack()
        dummy_i = np.zeros((1, self.W), dtype=np.uint64)
        dummy_d = np.zeros((1, self.D), dtype=np.int64)
        _, _, total = _kernel(self.down, self.up, self.dist, self.edim, self.target,
                              self.pivot == "first", True, *stack, 1,
                              dummy_i, dummy_d, np.zeros(1, dtype=np.int64), 0)
        return int(total)

    def batches(self) -> Iterator[Batch]:
        stack = self._fresh_stack()
        sp = 1
        outI = np.zeros((self.batch, self.W), dtype=np.uint64)
        outD = np.zeros((self.batch, self.D), dtype=np.int64)
        outM = np.zeros(self.batch, dtype=np.int64)
        while sp > 0:
            sp, nout, _ = _kernel(self.down, self.up, self.dist, self.edim, self.target,
                                  self.pivot == "first", False, *stack, sp,
                                  outI, outD, outM, self.batch)
            if nout:
                yield Batch(outI[:nout].copy(), outD[:nout].copy(), outM[:nout].copy())

    def mask_to_points(self, words) -> list[int]:
        return self.poset.members(words_to_int(words))


# --------------------------------------------------------------------------
# public entry points
# --------------------------------------------------------------------------

FULL_GATE = 32  # sizes above this need an explicit opt-in


class SizeGated(ValueError):
    pass


def _check_target(target: int, n: int, full: bool) -> None:
    if target < 1:
        raise ValueError("target size must be positive")
    if target > MAX_TARGET:
        raise ValueError(f"target {target} exceeds the supported maximum {MAX_TARGET}")
    if target > FULL_GATE and not full:
        raise SizeGated(f"target {target} > {FULL_GATE} is a long run; pass full=True (--full) to allow it")
    if not 1 <= n <= 64:
        raise ValueError("dimension must lie in 1..64")


def enumerate_rsds(n: int, target: int, *, full: bool = False, pivot: str = "middle") -> Iterator[PointSet]:
    """Every right-shifted down-set of exactly ``target`` points in ``F_2^n``, once each."""
    _check_target(target, n, full)
    poset = ShiftPoset.build(n, target)
    enum = KernelEnumerator(poset, target, pivot)
    for batch in enum.batches():
        for words in batch.masks:
            yield PointSet(enum.mask_to_points(words), n)


def count_rsds(n: int, target: int, *, full: bool = False, pivot: str = "middle") -> int:
    _check_target(target, n, full)
    return KernelEnumerator(ShiftPoset.build(n, target), target, pivot).count()


def candidate_count(n: int, budget: int) -> tuple[int, int]:
    """Elements with a principal down-set of at most ``budget`` points.

    Returns ``(nonzero, total)``; the zero vector lies in every ideal, so
    it is not a real choice for the search.
    """
    size = len(ShiftPoset.build(n, budget))
    return size - 1, size
