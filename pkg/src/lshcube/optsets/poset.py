"""The shift/down partial order on F_2^n.

``y <= x`` when y is reachable from x by clearing coordinates (rho) and by
moving a 1 from an earlier coordinate to a later, empty one (sigma).  With
coordinate 1 as the most significant bit both moves only lower the integer
value, and the order is generated by two kinds of covering move: shifting a
set bit one place towards the least significant end, or clearing bit 0.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from ..bitvec import Word, rho, sigma
from ..distdist import PointSet


class BudgetExceeded(ValueError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"down-set exceeds budget {budget} (reached {count} elements)")
        self.count = count
        self.budget = budget


def lower_covers(x: int) -> list[int]:
    out = []
    if x & 1:
        out.append(x ^ 1)
    v = x & ~1
    while v:
        low = v & -v
        if not x & (low >> 1):
            out.append(x ^ low ^ (low >> 1))
        v ^= low
    return out


def upper_covers(x: int, n: int) -> list[int]:
    out = []
    if not x & 1:
        out.append(x | 1)
    v = x
    top = 1 << (n - 1)
    while v:
        low = v & -v
        if low != top and not x & (low << 1):
            out.append(x ^ low ^ (low << 1))
        v ^= low
    return out


def _all_moves(x: int, n: int):
    """Images of x under every rho_i and sigma_ij (Word-level definitions)."""
    w = Word(x, n)
    for i in range(1, n + 1):
        if w.coord(i):
            yield rho(w, i).bits
            for j in range(i + 1, n + 1):
                yield sigma(w, i, j).bits


def principal_downset(x: Word | int, n: int | None = None, budget: int | None = None) -> PointSet:
    """Closure of ``{x}`` under all rho_i and sigma_ij, by breadth-first search."""
    if isinstance(x, Word):
        n = x.n
        x = x.bits
    if n is None:
        raise ValueError("dimension required for integer input")
    seen = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for z in _all_moves(y, n):
            if z not in seen:
                seen.add(z)
                if budget is not None and len(seen) > budget:
                    raise BudgetExceeded(len(seen), budget)
                queue.append(z)
    return PointSet(seen, n)


def downset_by_covers(x: int) -> set[int]:
    seen = {x}
    stack = [x]
    while stack:
        for z in lower_covers(stack.pop()):
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return seen


def is_rsds(S: PointSet) -> bool:
    """Closed under every rho_i and sigma_ij?"""
    members = set(S.points)
    return all(z in members for x in S.points for z in _all_moves(x, S.n))


@dataclass
class ShiftPoset:
    """Elements of F_2^n whose principal down-set has at most ``budget`` points.

    Elements are indexed in a linear extension; ``down[i]`` and ``up[i]`` are
    bitmasks over indices.  Any down-set of size at most ``budget`` lives
    entirely inside this poset.
    """

    n: int
    budget: int
    elements: list[int]
    down: list[int]
    up: list[int] = field(repr=False)

    @classmethod
    def build(cls, n: int, budget: int) -> "ShiftPoset":
        if not 1 <= n <= 64:
            raise ValueError("dimension must lie in 1..64")
        index = {0: 0}
        elements = [0]
        down = [1]
        frontier = [0]
        # rank (sum of 1-based bit positions) rises by one per covering move,
        # so level-by-level discovery is a linear extension
        while frontier:
            nxt: list[int] = []
            seen_next: set[int] = set()
            for x in frontier:
                for y in upper_covers(x, n):
                    if y in seen_next:
                        continue
                    seen_next.add(y)
                    mask = 0
                    for z in lower_covers(y):
                        iz = index.get(z)
                        if iz is None:
                            break
                        mask |= down[iz]
                    else:
                        if mask.bit_count() + 1 <= budget:
                            nxt.append(y)
                            index[y] = len(elements)
                            elements.append(y)
                            down.append(mask | (1 << index[y]))
            frontier = sorted(nxt)
        up = [0] * len(elements)
        for j, mask in enumerate(down):
            v = mask
            while v:
                low = v & -v
                up[low.bit_length() - 1] |= 1 << j
                v ^= low
        return cls(n, budget, elements, down, up)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, x: int) -> int:
        return self.elements.index(x)

    def down_size(self, i: int) -> int:
        return self.down[i].bit_count()

    def members(self, mask: int) -> list[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.elements[low.bit_length() - 1])
            mask ^= low
        return out

    def mask_of(self, points) -> int:
        index = {x: i for i, x in enumerate(self.elements)}
        mask = 0
        for p in points:
            mask |= 1 << index[p]
        return mask

    def relabel(self, order: list[int]) -> "ShiftPoset":
        """Re-index along another linear extension (``order`` lists old indices)."""
        new_of = {old: new for new, old in enumerate(order)}

        def remap(mask: int) -> int:
            out = 0
            while mask:
                low = mask & -mask
                out |= 1 << new_of[low.bit_length() - 1]
                mask ^= low
            return out

        return ShiftPoset(
            self.n,
            self.budget,
            [self.elements[i] for i in order],
            [remap(self.down[i]) for i in order],
            [remap(self.up[i]) for i in order],
        )

    def random_linear_extension(self, rng: random.Random) -> list[int]:
        remaining_below = [m.bit_count() - 1 for m in self.down]
        ready = [i for i, c in enumerate(remaining_below) if c == 0]
        order = []
        while ready:
            i = ready.pop(rng.randrange(len(ready)))
            order.append(i)
            v = self.up[i] & ~(1 << i)
            while v:
                low = v & -v
                j = low.bit_length() - 1
                remaining_below[j] -= 1
                if remaining_below[j] == 0:
                    ready.append(j)
                v ^= low
        return order
