"""Exhaustive optimal CNOT synthesis by breadth-first search over GL_n(F_2), n <= 5.

The table is direct-addressed: a matrix is keyed by its n*n bits packed row
major (bit ``r*n + c`` holds entry ``(r, c)``), so the table for n = 5 is two
byte arrays of 2**25 cells. The search grows words on the right: a cell at
distance d is reached from distance d-1 by right-multiplying with a
transvection, and generators are tried in lexicographic order so each cell
records the smallest generator that can end one of its optimal words.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .gf2core import (
    BitMatrix,
    Permutation,
    SingularMatrixError,
    Transvection,
    TransvectionSeq,
    cycle_type,
    group_order,
    permutation_of_matrix,
)

MIN_N, MAX_N = 2, 5
UNSEEN = 255
CACHE_MAGIC = b"CNOTOPT\x00"
CACHE_VERSION = 1


def matrix_key(M: BitMatrix) -> int:
    return sum(row << (r * M.n) for r, row in enumerate(M.rows))


def key_matrix(n: int, key: int) -> BitMatrix:
    full = (1 << n) - 1
    return BitMatrix(n, tuple((int(key) >> (r * n)) & full for r in range(n)))


def generators(n: int) -> list[Transvection]:
    return [Transvection(i, j) for i in range(n) for j in range(n) if i != j]


def _column_mask(n: int, c: int) -> int:
    return sum(1 << (r * n + c) for r in range(n))


def _right_multiply(keys, n: int, t: Transvection):
    """``M @ [ij]``: XOR column i into column j. Works on ints and int64 arrays."""
    return keys ^ (((keys & _column_mask(n, t.i)) >> t.i) << t.j)


@dataclass
class OptTable:
    n: int
    dist: np.ndarray
    gen: np.ndarray

    @property
    def generators(self) -> list[Transvection]:
        return generators(self.n)

    def __len__(self) -> int:
        return int(np.count_nonzero(self.dist != UNSEEN))

    def length(self, M: BitMatrix) -> int:
        d = int(self.dist[self._key(M)])
        if d == UNSEEN:
            raise SingularMatrixError("matrix is not invertible")
        return d

    def _key(self, M: BitMatrix) -> int:
        if M.n != self.n:
            raise ValueError(f"table is for n={self.n}, matrix has n={M.n}")
        return matrix_key(M)

    def keys(self) -> np.ndarray:
        """Packed keys of every group element, ascending."""
        return np.flatnonzero(self.dist != UNSEEN)


def _bfs(n: int) -> OptTable:
    size = 1 << (n * n)
    dist = np.full(size, UNSEEN, dtype=np.uint8)
    gen = np.full(size, UNSEEN, dtype=np.uint8)
    ident = matrix_key(BitMatrix.identity(n))
    dist[ident] = 0
    frontier = np.array([ident], dtype=np.int64)
    gens = generators(n)
    d = 0
    while frontier.size:
        d += 1
        found = []
        for g_idx, t in enumerate(gens):
            nb = _right_multiply(frontier, n, t)
            nb = nb[dist[nb] == UNSEEN]
            # right-multiplication by a fixed t is injective, so nb has no repeats
            dist[nb] = d
            gen[nb] = g_idx
            found.append(nb)
        frontier = np.concatenate(found)
    return OptTable(n, dist, gen)


@lru_cache(maxsize=None)
def build_table(n: int) -> OptTable:
    """Breadth-first search from the identity; cached per process."""
    if not MIN_N <= n <= MAX_N:
        raise ValueError(f"exact tables are supported for {MIN_N} <= n <= {MAX_N}, got {n}")
    return _bfs(n)


def optimal_decompose(table: OptTable, M: BitMatrix) -> TransvectionSeq:
    key = table._key(M)
    if table.dist[key] == UNSEEN:
        raise SingularMatrixError("matrix is not invertible")
    gens = table.generators
    tail: list[Transvection] = []
    while table.dist[key]:
        t = gens[table.gen[key]]
        tail.append(t)
        key = _right_multiply(key, table.n, t)
    return TransvectionSeq(table.n, tuple(reversed(tail)))


def length_histogram(table: OptTable) -> dict[int, int]:
    counts = np.bincount(table.dist[table.dist != UNSEEN])
    return {length: int(c) for length, c in enumerate(counts)}


@dataclass(frozen=True)
class ConjectureReport:
    n: int
    max_length: int
    maximizers: int
    all_full_cycles: bool

    @property
    def expected_max(self) -> int:
        return 3 * (self.n - 1)

    @property
    def expected_maximizers(self) -> int:
        return math.factorial(self.n - 1)

    @property
    def holds(self) -> bool:
        return (self.max_length == self.expected_max
                and self.maximizers == self.expected_maximizers
                and self.all_full_cycles)


def maximizers(table: OptTable) -> list[BitMatrix]:
    top = table.dist[table.dist != UNSEEN].max()
    return [key_matrix(table.n, k) for k in np.flatnonzero(table.dist == top)]


def check_conjecture(table: OptTable) -> ConjectureReport:
    """Check that the longest optimal words have length 3(n-1) and are exactly the n-cycles."""
    top = maximizers(table)
    perms: list[Permutation | None] = [permutation_of_matrix(M) for M in top]
    full = all(p is not None and cycle_type(p) == (table.n,) for p in perms)
    return ConjectureReport(table.n, table.length(top[0]), len(top), full)


def save_table(table: OptTable, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC + struct.pack("<HB", CACHE_VERSION, table.n))
        fh.write(table.dist.tobytes())
        fh.write(table.gen.tobytes())


def load_table(path: str | Path) -> OptTable:
    raw = Path(path).read_bytes()
    head = len(CACHE_MAGIC) + 3
    if raw[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise ValueError("not an optimal-length table file")
    version, n = struct.unpack("<HB", raw[len(CACHE_MAGIC): head])
    if version != CACHE_VERSION:
        raise ValueError(f"unsupported table version {version}")
    if not MIN_N <= n <= MAX_N:
        raise ValueError(f"bad dimension {n} in table header")
    size = 1 << (n * n)
    if len(raw) != head + 2 * size:
        raise ValueError("table file is truncated")
    dist = np.frombuffer(raw, dtype=np.uint8, count=size, offset=head).copy()
    gen = np.frombuffer(raw, dtype=np.uint8, count=size, offset=head + size).copy()
    table = OptTable(n, dist, gen)
    if len(table) != group_order(n):
        raise ValueError(f"table holds {len(table)} entries, expected {group_order(n)}")
    return table
