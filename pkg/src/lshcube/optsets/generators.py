"""Minimal generator sets of right-shifted down-sets."""

from __future__ import annotations

from dataclasses import dataclass

from ..distdist import PointSet
from .poset import BudgetExceeded, is_rsds, lower_covers, upper_covers


def _bits_desc(x: int) -> list[int]:
    out = []
    while x:
        b = x.bit_length() - 1
        out.append(b)
        x ^= 1 << b
    return out


def precedes(x: int, y: int) -> bool:
    """``x`` lies in the principal down-set of ``y``.

    Read as strict partitions (parts = set bit positions), the order is
    containment: x has no more parts than y and each part of x, largest
    first, is at most the corresponding part of y.
    """
    bx, by = _bits_desc(x), _bits_desc(y)
    return len(bx) <= len(by) and all(a <= b for a, b in zip(bx, by))


def _downset_union(gens, n: int, budget: int | None) -> set[int]:
    seen = set(gens)
    stack = list(gens)
    while stack:
        for z in lower_covers(stack.pop()):
            if z not in seen:
                seen.add(z)
                if budget is not None and len(seen) > budget:
                    raise BudgetExceeded(len(seen), budget)
                stack.append(z)
    return seen


@dataclass(frozen=True)
class GeneratorSet:
    """An antichain of the shift/down order; its down-closure is the set."""

    gens: tuple[int, ...]
    n: int

    def __post_init__(self):
        gens = tuple(sorted(set(self.gens), reverse=True))
        object.__setattr__(self, "gens", gens)
        for g in gens:
            if g < 0 or g >> self.n:
                raise ValueError(f"generator {g} does not fit in {self.n} bits")
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                if precedes(b, a):
                    raise ValueError(f"not an antichain: {b} lies below {a}")

    def to_literal(self) -> str:
        return f"{self.n}:" + ",".join(format(g, "x") for g in self.gens)

    @classmethod
    def from_literal(cls, text: str) -> "GeneratorSet":
        head, _, body = text.partition(":")
        return cls(tuple(int(h, 16) for h in body.split(",") if h), int(head))

    def paper(self) -> str:
        """Generators as sums of powers of two, e.g. ``<2^11, 2^3+1>``."""
        def term(b: int) -> str:
            return "1" if b == 0 else "2" if b == 1 else f"2^{b}"

        parts = ["+".join(term(b) for b in _bits_desc(g)) or "0" for g in self.gens]
        return "<" + ", ".join(parts) + ">"

    def __str__(self) -> str:
        return self.paper()


def expand_generators(g: GeneratorSet, budget: int | None = None) -> PointSet:
    return PointSet(_downset_union(g.gens, g.n, budget), g.n)


def minimal_generators(S: PointSet) -> GeneratorSet:
    """Maximal elements of a right-shifted down-set."""
    if not is_rsds(S):
        raise ValueError("not a right-shifted down-set")
    members = set(S.points)
    gens = [x for x in S.points if not any(y in members for y in upper_covers(x, S.n))]
    return GeneratorSet(tuple(gens), S.n)
