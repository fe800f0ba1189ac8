"""Bit-packed linear algebra over F_2 and matrix-level decompositions.

A :class:`BitMatrix` stores one Python int per row; bit ``c`` of row ``r`` is
entry ``(r, c)``. Transvections ``[ij] = I + E_ij`` are the generators used by
every decomposition in the package. A :class:`TransvectionSeq` lists factors in
written product order: ``(t1, t2, ..., tk)`` denotes ``t1 @ t2 @ ... @ tk``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

MAX_DIM = 64

CycleType = tuple[int, ...]


class SingularMatrixError(ValueError):
    """Raised when an operation needs an invertible matrix."""


def _check_dim(n: int) -> None:
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"dimension must be in 1..{MAX_DIM}, got {n}")


class Transvection(NamedTuple):
    """The elementary matrix ``I + E_ij``; as a gate, target ``i`` and control ``j``."""

    i: int
    j: int

    def check(self, n: int) -> None:
        if self.i == self.j:
            raise ValueError(f"transvection [{self.i}{self.j}] has i == j")
        if not (0 <= self.i < n and 0 <= self.j < n):
            raise ValueError(f"transvection [{self.i},{self.j}] out of range for n={n}")

    def __str__(self) -> str:
        if self.i < 10 and self.j < 10:
            return f"[{self.i}{self.j}]"
        return f"[{self.i},{self.j}]"


@dataclass(frozen=True)
class BitMatrix:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_dim(self.n)
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for r in self.rows:
            if r < 0 or r & ~full:
                raise ValueError("row has bits beyond column n-1")

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        _check_dim(n)
        return cls(n, tuple(1 << r for r in range(n)))

    @classmethod
    def zeros(cls, n: int) -> BitMatrix:
        return cls(n, (0,) * n)

    @classmethod
    def ones(cls, n: int) -> BitMatrix:
        """The all-ones matrix."""
        _check_dim(n)
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def from_rows(cls, rows: Sequence[str | Sequence[int]]) -> BitMatrix:
        """Build from rows written left to right, e.g. ``["011", "110", "001"]``."""
        n = len(rows)
        packed = []
        for row in rows:
            bits = [int(ch) for ch in row] if isinstance(row, str) else [int(b) for b in row]
            if len(bits) != n:
                raise ValueError("matrix must be square")
            packed.append(sum((b & 1) << c for c, b in enumerate(bits)))
        return cls(n, tuple(packed))

    @classmethod
    def from_array(cls, arr) -> BitMatrix:
        return cls.from_rows([[int(x) & 1 for x in row] for row in arr])

    def to_list(self) -> list[list[int]]:
        return [[(r >> c) & 1 for c in range(self.n)] for r in self.rows]

    def to_strings(self) -> list[str]:
        return ["".join(str(b) for b in row) for row in self.to_list()]

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return (self.rows[r] >> c) & 1

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mat_mul(self, other)

    def __xor__(self, other: BitMatrix) -> BitMatrix:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return BitMatrix(self.n, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def transpose(self) -> BitMatrix:
        n = self.n
        return BitMatrix(n, tuple(
            sum(((self.rows[r] >> c) & 1) << r for r in range(n)) for c in range(n)))

    def is_identity(self) -> bool:
        return self.rows == tuple(1 << r for r in range(self.n))

    def is_upper_unitriangular(self) -> bool:
        # row r may only use columns r..n-1 and must hold the diagonal
        return all((row >> r) & 1 and not row & ((1 << r) - 1) for r, row in enumerate(self.rows))

    def is_lower_unitriangular(self) -> bool:
        return all((row >> r) & 1 and not row >> (r + 1) for r, row in enumerate(self.rows))

    def rank(self) -> int:
        rows = list(self.rows)
        rank = 0
        for c in range(self.n):
            piv = next((r for r in range(rank, self.n) if (rows[r] >> c) & 1), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            for r in range(self.n):
                if r != rank and (rows[r] >> c) & 1:
                    rows[r] ^= rows[rank]
            rank += 1
        return rank

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def inverse(self) -> BitMatrix:
        n = self.n
        rows = list(self.rows)
        inv = [1 << r for r in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if (rows[r] >> c) & 1), None)
            if piv is None:
                raise SingularMatrixError("matrix is singular over F_2")
            rows[c], rows[piv] = rows[piv], rows[c]
            inv[c], inv[piv] = inv[piv], inv[c]
            for r in range(n):
                if r != c and (rows[r] >> c) & 1:
                    rows[r] ^= rows[c]
                    inv[r] ^= inv[c]
        return BitMatrix(n, tuple(inv))

    def weight(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def add_row(self, target: int, source: int) -> BitMatrix:
        """Left-multiply by ``[target source]``."""
        rows = list(self.rows)
        rows[target] ^= rows[source]
        return BitMatrix(self.n, tuple(rows))

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


@dataclass(frozen=True)
class TransvectionSeq:
    n: int
    items: tuple[Transvection, ...] = ()

    def __post_init__(self) -> None:
        _check_dim(self.n)
        items = tuple(Transvection(*t) for t in self.items)
        for t in items:
            t.check(self.n)
        object.__setattr__(self, "items", items)

    @classmethod
    def parse(cls, n: int, text: str) -> TransvectionSeq:
        """Parse the bracket notation ``"[03][30][20]"`` (single-digit indices)."""
        items = []
        for chunk in text.replace(" ", "").strip("[]").split("]["):
            if chunk:
                if "," in chunk:
                    a, b = chunk.split(",")
                else:
                    a, b = chunk[0], chunk[1:]
                items.append(Transvection(int(a), int(b)))
        return cls(n, tuple(items))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __add__(self, other: TransvectionSeq) -> TransvectionSeq:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return TransvectionSeq(self.n, self.items + other.items)

    def product(self) -> BitMatrix:
        # apply factors right to left onto the identity
        rows = [1 << r for r in range(self.n)]
        for i, j in reversed(self.items):
            rows[i] ^= rows[j]
        return BitMatrix(self.n, tuple(rows))

    def inverse(self) -> TransvectionSeq:
        return TransvectionSeq(self.n, tuple(reversed(self.items)))

    def conjugated(self, sigma: Permutation) -> TransvectionSeq:
        """Relabel every factor ``[ij]`` as ``[sigma(i) sigma(j)]``."""
        m = sigma.map
        return TransvectionSeq(self.n, tuple(Transvection(m[i], m[j]) for i, j in self.items))

    def __str__(self) -> str:
        return "".join(str(t) for t in self.items) or "I"


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}`` with ``sigma(i) = map[i]``."""

    map: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))
        if sorted(self.map) != list(range(len(self.map))):
            raise ValueError(f"not a permutation: {self.map}")

    @property
    def n(self) -> int:
        return len(self.map)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        """``(a b c)`` sends a to b, b to c and c to a."""
        m = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            if seen & set(cyc) or len(set(cyc)) != len(cyc):
                raise ValueError("cycles must be disjoint")
            seen |= set(cyc)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                m[a] = b
        return cls(tuple(m))

    def __call__(self, i: int) -> int:
        return self.map[i]

    def __mul__(self, other: Permutation) -> Permutation:
        """Composition, rightmost applied first: ``(s * g)(x) = s(g(x))``."""
        return Permutation(tuple(self.map[other.map[x]] for x in range(self.n)))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, s in enumerate(self.map):
            inv[s] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.map == tuple(range(self.n))

    def cycles(self, include_fixed: bool = True) -> list[tuple[int, ...]]:
        """Cycles in order of smallest unvisited element, each starting at that element."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.map[x]
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles(include_fixed=False)
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def transvection_matrix(n: int, t: Transvection | tuple[int, int]) -> BitMatrix:
    _check_dim(n)
    t = Transvection(*t)
    t.check(n)
    rows = [1 << r for r in range(n)]
    rows[t.i] |= 1 << t.j
    return BitMatrix(n, tuple(rows))


def mat_mul(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")
    out = []
    for a in A.rows:
        acc = 0
        c = 0
        while a:
            if a & 1:
                acc ^= B.rows[c]
            a >>= 1
            c += 1
        out.append(acc)
    return BitMatrix(A.n, tuple(out))


def mat_apply(M: BitMatrix, u: Sequence[int]) -> list[int]:
    if len(u) != M.n:
        raise ValueError(f"vector length {len(u)} does not match dimension {M.n}")
    packed = sum((int(b) & 1) << c for c, b in enumerate(u))
    return [bin(row & packed).count("1") & 1 for row in M.rows]


def permutation_matrix(sigma: Permutation) -> BitMatrix:
    rows = [0] * sigma.n
    for j, i in enumerate(sigma.map):
        rows[i] |= 1 << j
    return BitMatrix(sigma.n, tuple(rows))


def permutation_of_matrix(M: BitMatrix) -> Permutation | None:
    m = [0] * M.n
    for i, row in enumerate(M.rows):
        if row == 0 or row & (row - 1):
            return None
        m[row.bit_length() - 1] = i
    if sorted(m) != list(range(M.n)):
        return None
    return Permutation(tuple(m))


def conjugate(M: BitMatrix, sigma: Permutation) -> BitMatrix:
    """``P_sigma M P_sigma^-1``; entry (s(i), s(j)) of the result is entry (i, j) of M."""
    if sigma.n != M.n:
        raise ValueError("dimension mismatch")
    n = M.n
    s = sigma.map
    rows = [0] * n
    for i, row in enumerate(M.rows):
        acc = 0
        for j in range(n):
            if (row >> j) & 1:
                acc |= 1 << s[j]
        rows[s[i]] = acc
    return BitMatrix(n, tuple(rows))


def ibar(n: int) -> BitMatrix:
    """The identity with every bit flipped."""
    return BitMatrix.identity(n) ^ BitMatrix.ones(n)


def gauss_jordan(M: BitMatrix) -> tuple[TransvectionSeq, BitMatrix]:
    """Reduce ``M`` to unit upper triangular ``U`` by row additions; returns ``(K, U)`` with ``M = K U``.

    A zero pivot at ``(k, k)`` is repaired by adding the highest-index row below
    that has a 1 in column ``k``; entries below the pivot are then cleared from
    the bottom row upward. Since every transvection is an involution, ``K`` is
    just the list of applied row operations in application order.
    """
    n = M.n
    rows = list(M.rows)
    ops: list[Transvection] = []
    for k in range(n):
        bit = 1 << k
        if not rows[k] & bit:
            cand = [l for l in range(k + 1, n) if rows[l] & bit]
            if not cand:
                raise SingularMatrixError("matrix is singular over F_2")
            l = cand[-1]
            rows[k] ^= rows[l]
            ops.append(Transvection(k, l))
        for r in range(n - 1, k, -1):
            if rows[r] & bit:
                rows[r] ^= rows[k]
                ops.append(Transvection(r, k))
    return TransvectionSeq(n, tuple(ops)), BitMatrix(n, tuple(rows))


def lu_decompose(M: BitMatrix) -> tuple[BitMatrix, BitMatrix] | None:
    """``M = L U`` with unit triangular factors, or ``None`` when a leading minor vanishes."""
    n = M.n
    rows = list(M.rows)
    lower = [1 << r for r in range(n)]
    for k in range(n):
        bit = 1 << k
        if not rows[k] & bit:
            return None
        for r in range(k + 1, n):
            if rows[r] & bit:
                rows[r] ^= rows[k]
                lower[r] |= bit
    return BitMatrix(n, tuple(lower)), BitMatrix(n, tuple(rows))


def canonical_triangular(T: BitMatrix) -> TransvectionSeq:
    """One factor per off-diagonal 1 of a unit triangular matrix.

    Upper: columns from last to first, rows ascending inside a column.
    Lower: columns from first to last, rows ascending inside a column.
    Factors sharing a column commute, so the inner order only fixes the output.
    """
    n = T.n
    items: list[Transvection] = []
    if T.is_upper_unitriangular():
        for j in range(n - 1, 0, -1):
            items += [Transvection(i, j) for i in range(j) if T[i, j]]
    elif T.is_lower_unitriangular():
        for j in range(n - 1):
            items += [Transvection(i, j) for i in range(j + 1, n) if T[i, j]]
    else:
        raise ValueError("matrix is not unit triangular")
    return TransvectionSeq(n, tuple(items))


def utd(U: BitMatrix) -> TransvectionSeq:
    """Greedy row-XOR decomposition of a unit upper triangular matrix.

    Each sweep visits rows ``i = 0..n-2``; a row of weight above one is XORed
    with the row ``k > i`` that lowers its weight the most (smallest ``k`` on
    ties). Sweeps repeat until the identity is reached.
    """
    if not U.is_upper_unitriangular():
        raise ValueError("matrix is not unit upper triangular")
    n = U.n
    rows = list(U.rows)
    ident = [1 << r for r in range(n)]
    items: list[Transvection] = []
    while rows != ident:
        for i in range(n - 1):
            w = bin(rows[i]).count("1")
            if w <= 1:
                continue
            best = None
            for k in range(i + 1, n):
                wk = bin(rows[i] ^ rows[k]).count("1")
                if wk < w and (best is None or wk < best[0]):
                    best = (wk, k)
            if best is not None:
                rows[i] ^= rows[best[1]]
                items.append(Transvection(i, best[1]))
    return TransvectionSeq(n, tuple(items))


def _reverse_perm(n: int) -> Permutation:
    return Permutation(tuple(range(n - 1, -1, -1)))


def ltd(L: BitMatrix) -> TransvectionSeq:
    """Mirror image of :func:`utd` for unit lower triangular matrices.

    Reversing the index order turns ``L`` into an upper triangular matrix, so
    rows are swept from the last upward and ties go to the largest ``k < i``.
    """
    if not L.is_lower_unitriangular():
        raise ValueError("matrix is not unit lower triangular")
    rev = _reverse_perm(L.n)
    return utd(conjugate(L, rev)).conjugated(rev)


def group_order(n: int) -> int:
    """Order of GL_n(F_2)."""
    if n < 1:
        raise ValueError("n must be positive")
    return 2 ** (n * (n - 1) // 2) * math.prod(2**i - 1 for i in range(1, n + 1))


def cycle_type(sigma: Permutation) -> CycleType:
    return tuple(sorted((len(c) for c in sigma.cycles()), reverse=True))
