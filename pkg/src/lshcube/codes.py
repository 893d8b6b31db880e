"""Binary block codes with complete, translation-invariant decoders.

Every code hashes ``v`` to the information vector of the codeword ``v``
decodes to.  Words are integers with coordinate 1 in the most significant
bit (see :mod:`lshcube.bitvec`); generator rows use the same encoding.
"""

from __future__ import annotations

from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .bitvec import Word
from .distdist import PointSet

MAX_REDUNDANCY = 28  # n - k; the syndrome table has 2**(n - k) entries
MAX_TABLE_DIM = 24  # full hash lookup tables (2**n entries) only up to here


# --------------------------------------------------------------------------
# GF(2) linear algebra on integer-packed rows
# --------------------------------------------------------------------------

def gf2_rref(rows: Sequence[int], n: int) -> tuple[list[int], list[int], list[int]]:
    """Row-reduce ``rows``.

    Returns ``(reduced, pivots, transform)`` where ``pivots`` are bit
    positions and ``transform[i]`` records which input rows (MSB = row 0)
    were summed into ``reduced[i]``.  Only independent rows are kept.
    """
    m = len(rows)
    work = [(r, 1 << (m - 1 - i)) for i, r in enumerate(rows)]
    reduced: list[tuple[int, int]] = []
    pivots: list[int] = []
    for bit in range(n - 1, -1, -1):
        idx = next((i for i, (r, _) in enumerate(work) if (r >> bit) & 1), None)
        if idx is None:
            continue
        prow, ptag = work.pop(idx)
        work = [(r ^ prow, t ^ ptag) if (r >> bit) & 1 else (r, t) for r, t in work]
        reduced = [(r ^ prow, t ^ ptag) if (r >> bit) & 1 else (r, t) for r, t in reduced]
        reduced.append((prow, ptag))
        pivots.append(bit)
    return [r for r, _ in reduced], pivots, [t for _, t in reduced]


def gf2_rank(rows: Sequence[int], n: int) -> int:
    return len(gf2_rref(rows, n)[1])


def gf2_null_space(rows: Sequence[int], n: int) -> list[int]:
    """Basis of ``{v : <r, v> = 0 for every row r}``."""
    reduced, pivots, _ = gf2_rref(rows, n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n - 1, -1, -1):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, p in zip(reduced, pivots):
            if (r >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def _parity(x: int) -> int:
    return x.bit_count() & 1


def _same_weight_successor(v: int) -> int:
    """Next larger integer with the same popcount (Gosper's hack)."""
    c = v & -v
    r = v + c
    return (((r ^ v) >> 2) // c) | r


class CodeError(ValueError):
    pass


# --------------------------------------------------------------------------
# Codes
# --------------------------------------------------------------------------

class BlockCode:
    """An [n, k] binary linear code plus a complete decoder.

    Subclasses supply :meth:`decode` and :meth:`zero_points`; everything
    else (hashing, zero-set, lookup tables) is derived here.
    """

    def __init__(self, n: int, k: int, generator: Sequence[int], label: str):
        if not 0 <= k <= n:
            raise CodeError(f"need 0 <= k <= n, got n={n}, k={k}")
        generator = tuple(int(g) for g in generator)
        if len(generator) != k or any(g >> n for g in generator):
            raise CodeError("generator must have k rows of n bits")
        if gf2_rank(generator, n) != k:
            raise CodeError("generator rows are linearly dependent")
        self.n = n
        self.k = k
        self.generator = generator
        self.label = label

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label!r}, n={self.n}, k={self.k})"

    @property
    def rate(self) -> float:
        return self.k / self.n

    def decode(self, v: int) -> int:
        raise NotImplementedError

    def zero_points(self) -> Iterable[int]:
        """The vectors that decode to the zero codeword."""
        raise NotImplementedError

    @cached_property
    def _info_map(self) -> tuple[list[int], list[int]]:
        _, pivots, transform = gf2_rref(self.generator, self.n)
        return pivots, transform

    def info(self, c: int) -> int:
        """Coordinates of codeword ``c`` w.r.t. the generator rows (row 1 = MSB)."""
        pivots, transform = self._info_map
        u = 0
        for p, t in zip(pivots, transform):
            if (c >> p) & 1:
                u ^= t
        return u

    def encode(self, u: int) -> int:
        c = 0
        for i, g in enumerate(self.generator):
            if (u >> (self.k - 1 - i)) & 1:
                c ^= g
        return c

    @cached_property
    def parity_check(self) -> tuple[int, ...]:
        return tuple(gf2_null_space(self.generator, self.n))

    def is_codeword(self, v: int) -> bool:
        return all(not _parity(h & v) for h in self.parity_check)

    def hash(self, v: int) -> int:
        return self.info(self.decode(v))

    # vectorised hashing, used by the Monte Carlo harness
    def _hash_array_direct(self, arr: np.ndarray) -> np.ndarray:
        return np.array([self.hash(int(v)) for v in arr], dtype=np.uint64)

    @cached_property
    def hash_table(self) -> np.ndarray:
        if self.n > MAX_TABLE_DIM:
            raise CodeError(f"lookup table needs n <= {MAX_TABLE_DIM}")
        return self._hash_array_direct(np.arange(1 << self.n, dtype=np.uint64))

    def hash_array(self, arr: np.ndarray) -> np.ndarray:
        """Hash a uint64 array of words."""
        arr = np.asarray(arr, dtype=np.uint64)
        if self.n <= MAX_TABLE_DIM:
            return self.hash_table[arr]
        return self._hash_array_direct(arr)


class ProjectionCode(BlockCode):
    """Keep the first k coordinates, zero the rest."""

    def __init__(self, n: int, k: int):
        if not 1 <= k <= n:
            raise CodeError(f"projection needs 1 <= k <= n, got n={n}, k={k}")
        super().__init__(n, k, [1 << (n - 1 - i) for i in range(k)], f"projection:{n},{k}")
        self._drop = n - k

    def decode(self, v: int) -> int:
        return (v >> self._drop) << self._drop

    def info(self, c: int) -> int:
        return c >> self._drop

    def zero_points(self) -> Iterable[int]:
        return range(1 << self._drop)

    def _hash_array_direct(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(arr, dtype=np.uint64) >> np.uint64(self._drop)


class SyndromeCode(BlockCode):
    """Syndrome decoding: ``decode(v) = v + leader(H v)``.

    Leaders are minimum-weight coset members; among equal weights the one
    with the smallest integer encoding wins.
    """

    def __init__(self, n: int, generator: Sequence[int], label: str):
        k = len(generator)
        if n - k > MAX_REDUNDANCY:
            raise CodeError(
                f"syndrome table would need 2**{n - k} entries; limit is 2**{MAX_REDUNDANCY}"
            )
        super().__init__(n, k, generator, label)
        self.r = n - k
        h = self.parity_check
        # syndrome contribution of each bit position
        self._col = [
            sum(((h[i] >> b) & 1) << (self.r - 1 - i) for i in range(self.r)) for b in range(n)
        ]
        self.leaders = self._build_leaders()

    def syndrome(self, v: int) -> int:
        s = 0
        col = self._col
        while v:
            low = v & -v
            s ^= col[low.bit_length() - 1]
            v ^= low
        return s

    def _build_leaders(self) -> list[int]:
        size = 1 << self.r
        leaders = [-1] * size
        leaders[0] = 0
        found = 1
        w = 1
        while found < size:
            if w > self.n:
                raise CodeError("parity-check matrix does not have full rank")
            v = (1 << w) - 1
            top = 1 << self.n
            while v < top:
                s = self.syndrome(v)
                if leaders[s] < 0:
                    leaders[s] = v
                    found += 1
                    if found == size:
                        break
                v = _same_weight_successor(v)
            w += 1
        return leaders

    def decode(self, v: int) -> int:
        return v ^ self.leaders[self.syndrome(v)]

    def zero_points(self) -> Iterable[int]:
        return self.leaders

    def _hash_array_direct(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.uint64)
        one = np.uint64(1)
        syn = np.zeros(arr.shape, dtype=np.uint64)
        for b, c in enumerate(self._col):
            if c:
                syn ^= ((arr >> np.uint64(b)) & one) * np.uint64(c)
        cw = arr ^ np.array(self.leaders, dtype=np.uint64)[syn]
        pivots, transform = self._info_map
        out = np.zeros(arr.shape, dtype=np.uint64)
        for p, t in zip(pivots, transform):
            out ^= ((cw >> np.uint64(p)) & one) * np.uint64(t)
        return out


class HammingCode(SyndromeCode):
    """Hamming code whose parity-check column j is the binary form of j."""

    def __init__(self, m: int):
        if not 2 <= m <= 7:
            raise CodeError(f"Hamming parameter m must be in 2..7, got {m}")
        n = (1 << m) - 1
        # row i of H holds bit (m-1-i) of each column index j = 1..n
        h = []
        for i in range(m):
            row = 0
            for j in range(1, n + 1):
                if (j >> (m - 1 - i)) & 1:
                    row |= 1 << (n - j)
            h.append(row)
        generator = gf2_null_space(h, n)
        self.m = m
        self.__dict__["parity_check"] = tuple(h)
        super().__init__(n, generator, f"hamming:{m}")

    def syndrome(self, v: int) -> int:
        # XOR of the (1-based) coordinates that are set
        s = 0
        while v:
            low = v & -v
            s ^= self.n - (low.bit_length() - 1)
            v ^= low
        return s

    def _build_leaders(self) -> list[int]:
        return [0] + [1 << (self.n - j) for j in range(1, self.n + 1)]


class ConcatenatedCode(BlockCode):
    """Code ``a`` on the leading coordinates and ``b`` on the trailing ones."""

    def __init__(self, a: BlockCode, b: BlockCode):
        gen = [g << b.n for g in a.generator] + list(b.generator)
        super().__init__(a.n + b.n, a.k + b.k, gen, f"concat:{a.label}+{b.label}")
        self.a, self.b = a, b
        self._mask = (1 << b.n) - 1

    def decode(self, v: int) -> int:
        return (self.a.decode(v >> self.b.n) << self.b.n) | self.b.decode(v & self._mask)

    def info(self, c: int) -> int:
        return (self.a.info(c >> self.b.n) << self.b.k) | self.b.info(c & self._mask)

    def zero_points(self) -> Iterable[int]:
        right = list(self.b.zero_points())
        return [(x << self.b.n) | y for x in self.a.zero_points() for y in right]

    def _hash_array_direct(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.uint64)
        hi = self.a.hash_array(arr >> np.uint64(self.b.n))
        lo = self.b.hash_array(arr & np.uint64(self._mask))
        return (hi << np.uint64(self.b.k)) | lo


# --------------------------------------------------------------------------
# Constructors and free-function API
# --------------------------------------------------------------------------

def projection_code(n: int, k: int) -> ProjectionCode:
    return ProjectionCode(n, k)


def hamming_code(m: int) -> HammingCode:
    return HammingCode(m)


def linear_code(generator: Sequence[int], n: int, label: str = "linear") -> SyndromeCode:
    """Syndrome-decoded code spanned by ``generator`` (rows as n-bit integers)."""
    return SyndromeCode(n, generator, label)


def load_generator(path: str | Path) -> tuple[int, list[int]]:
    """Read ``"n k"`` then k lines of n characters in {0,1}."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    try:
        n, k = map(int, lines[0].split())
    except (IndexError, ValueError):
        raise CodeError(f"{path}: first line must be 'n k'") from None
    rows = lines[1:]
    if len(rows) != k or any(len(r) != n or set(r) - {"0", "1"} for r in rows):
        raise CodeError(f"{path}: expected {k} rows of {n} binary digits")
    return n, [int(r, 2) for r in rows]


def save_generator(code: BlockCode, path: str | Path) -> None:
    body = [f"{code.n} {code.k}"] + [format(g, f"0{code.n}b") for g in code.generator]
    Path(path).write_text("\n".join(body) + "\n")


def code_from_file(path: str | Path, label: str | None = None) -> SyndromeCode:
    n, rows = load_generator(path)
    return linear_code(rows, n, label or f"file:{path}")


_golay_cache: list[SyndromeCode] = []


def golay_code() -> SyndromeCode:
    """The [23, 12, 7] binary Golay code with a syndrome-table decoder."""
    if not _golay_cache:
        with resources.as_file(resources.files("lshcube") / "data" / "golay23.txt") as p:
            n, rows = load_generator(p)
        _golay_cache.append(linear_code(rows, n, "golay"))
    return _golay_cache[0]


def concatenate(a: BlockCode, b: BlockCode) -> ConcatenatedCode:
    return ConcatenatedCode(a, b)


def hash(code: BlockCode, v: Word | int) -> int:  # noqa: A001 - mirrors the domain term
    if isinstance(v, Word):
        if v.n != code.n:
            raise ValueError(f"word has dimension {v.n}, code has length {code.n}")
        v = v.bits
    elif v < 0 or v >> code.n:
        raise ValueError(f"{v:#x} does not fit in {code.n} bits")
    return code.hash(v)


def zero_set(code: BlockCode) -> PointSet:
    if code.n - code.k > MAX_REDUNDANCY:
        raise CodeError(f"zero-set would have 2**{code.n - code.k} points")
    return PointSet(code.zero_points(), code.n)


def _split_top_level(text: str) -> list[str]:
    return [part for part in text.split("+") if part]


def parse_code(spec: str) -> BlockCode:
    """Build a code from ``projection:n,k``, ``hamming:m``, ``golay``,
    ``file:PATH`` or ``concat:SPEC+SPEC[+...]``."""
    spec = spec.strip()
    kind, _, arg = spec.partition(":")
    try:
        if kind == "golay" and not arg:
            return golay_code()
        if kind == "projection":
            n, k = (int(t) for t in arg.split(","))
            return projection_code(n, k)
        if kind == "hamming":
            return hamming_code(int(arg))
        if kind == "file":
            return code_from_file(arg)
        if kind == "concat":
            parts = [parse_code(p) for p in _split_top_level(arg)]
            if len(parts) < 2:
                raise CodeError("concat needs at least two codes")
            code = parts[0]
            for p in parts[1:]:
                code = concatenate(code, p)
            return code
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CodeError):
            raise
        raise CodeError(f"bad code spec {spec!r}: {exc}") from None
    raise CodeError(f"unknown code spec {spec!r}")
