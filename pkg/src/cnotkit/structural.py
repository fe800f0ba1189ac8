"""Decompositions for structured matrices and the optimization dispatcher.

Covers permutation matrices, conjugates of block diagonal matrices (found via
the weak components of the matrix's support graph), bit-reversed permutation
matrices ``sigma_bar = P_sigma + J`` where ``J`` is the all-ones matrix, and a
pipeline that tries each of these before falling back to heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import networkx as nx

from . import exact
from .circuit import circuit_of, peephole_reduce
from .gf2core import (
    BitMatrix,
    Permutation,
    SingularMatrixError,
    Transvection,
    TransvectionSeq,
    conjugate,
    gauss_jordan,
    canonical_triangular,
    ibar,
    lu_decompose,
    ltd,
    permutation_matrix,
    permutation_of_matrix,
    utd,
)

Solver = Callable[[BitMatrix], TransvectionSeq]


class SelfCheckError(AssertionError):
    """A decomposition did not multiply back to its input."""


def _checked(seq: TransvectionSeq, M: BitMatrix, what: str) -> TransvectionSeq:
    if seq.product() != M:
        raise SelfCheckError(f"{what}: product of output differs from input matrix")
    return seq


def _seq(n: int, pairs: Iterable[tuple[int, int]]) -> TransvectionSeq:
    return TransvectionSeq(n, tuple(Transvection(i, j) for i, j in pairs))


def transposition_seq(n: int, i: int, j: int) -> TransvectionSeq:
    """``P_(ij) = [ij][ji][ij]``."""
    return _seq(n, [(i, j), (j, i), (i, j)])


def permutation_decompose(sigma: Permutation) -> TransvectionSeq:
    """Three transvections per transposition; ``3(n - p)`` for ``p`` cycles."""
    n = sigma.n
    out = TransvectionSeq(n)
    for cyc in sigma.cycles(include_fixed=False):
        # (c0 c1 ... c_{m-1}) = (c0 c_{m-1}) ... (c0 c2)(c0 c1)
        for c in reversed(cyc[1:]):
            out = out + transposition_seq(n, cyc[0], c)
    return _checked(out, permutation_matrix(sigma), "permutation_decompose")


@dataclass(frozen=True)
class CircuitGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def circuit_graph(M: BitMatrix) -> CircuitGraph:
    return CircuitGraph(M.n, frozenset((i, j) for i in range(M.n) for j in range(M.n) if M[i, j]))


def components(g: CircuitGraph) -> list[list[int]]:
    comps = [sorted(c) for c in nx.weakly_connected_components(g.to_networkx())]
    return sorted(comps, key=lambda c: c[0])


def block_permutation(comps: Sequence[Sequence[int]], n: int) -> Permutation:
    """Send the listed vertices, in order, to positions 0, 1, 2, ..."""
    m = [0] * n
    for pos, v in enumerate(v for comp in comps for v in comp):
        m[v] = pos
    return Permutation(tuple(m))


def _block(M: BitMatrix, start: int, size: int) -> BitMatrix:
    mask = (1 << size) - 1
    return BitMatrix(size, tuple((M.rows[r] >> start) & mask for r in range(start, start + size)))


def _default_block_solver(A: BitMatrix) -> TransvectionSeq:
    if A.n == 1:
        return TransvectionSeq(1)
    if A.n <= exact.MAX_N:
        return exact.optimal_decompose(exact.build_table(A.n), A)
    return dispatch_optimize(A)


def block_optimize(M: BitMatrix, solver: Solver | None = None,
                   sigma: Permutation | None = None) -> TransvectionSeq:
    """Decompose each diagonal block of ``M^sigma`` and carry the pieces back by ``sigma^-1``.

    By default ``sigma`` lists components by smallest vertex, vertices ascending.
    A caller may supply any ``sigma`` that sends every component onto a run of
    consecutive indices; it must make ``M^sigma`` block diagonal.
    """
    if not M.is_invertible():
        raise SingularMatrixError("matrix is singular over F_2")
    solver = solver or _default_block_solver
    comps = components(circuit_graph(M))
    if sigma is None:
        sigma = block_permutation(comps, M.n)
    blocks = sorted((sorted(sigma(v) for v in comp) for comp in comps), key=lambda b: b[0])
    for b in blocks:
        if b != list(range(b[0], b[0] + len(b))):
            raise ValueError("sigma does not map components onto consecutive blocks")
    Ms = conjugate(M, sigma)
    back = sigma.inverse().map
    out: list[Transvection] = []
    for b in blocks:
        start, size = b[0], len(b)
        part = solver(_block(Ms, start, size))
        out += [Transvection(back[start + i], back[start + j]) for i, j in part]
    return _checked(TransvectionSeq(M.n, tuple(out)), M, "block_optimize")


def detect_bit_reversed(M: BitMatrix) -> Permutation | None:
    if M.n % 2:
        return None
    return permutation_of_matrix(M ^ BitMatrix.ones(M.n))


def bit_reversed_matrix(sigma: Permutation) -> BitMatrix:
    return permutation_matrix(sigma) ^ BitMatrix.ones(sigma.n)


# A triple (x, y, z, e) stands for [xy][zx][yz] when e = +1 and for its inverse
# [yz][zx][xy] when e = -1.
Triple = tuple[int, int, int, int]


def triple_pairs(tr: Triple) -> list[tuple[int, int]]:
    x, y, z, e = tr
    fwd = [(x, y), (z, x), (y, z)]
    return fwd if e > 0 else fwd[::-1]


def _expand(n: int, triples: Iterable[Triple]) -> TransvectionSeq:
    return _seq(n, [p for tr in triples for p in triple_pairs(tr)])


def _relabel(triples: Iterable[Triple], f: Callable[[int], int]) -> list[Triple]:
    return [(f(x), f(y), f(z), e) for x, y, z, e in triples]


def ibar_decompose(n: int) -> TransvectionSeq:
    """The flipped identity in ``3(n-1) - 1`` transvections (3 when ``n = 2``)."""
    if n % 2 or n < 2:
        raise ValueError("the flipped identity decomposition needs even n >= 2")
    if n == 2:
        out = _seq(2, [(0, 1), (1, 0), (0, 1)])
    else:
        q = n // 2
        core = _seq(n, [(2, 3), (3, 1), (1, 0), (0, 1), (0, 2), (1, 0), (3, 1), (2, 3)])
        conj = _expand(n, [(2 * i + 1, 2 * i + 2, 2 * i + 3, 1) for i in range(1, q - 1)])
        out = conj.inverse() + core + conj
    return _checked(out, ibar(n), "ibar_decompose")


def canonical_cycle_permutation(parts: Sequence[int]) -> Permutation:
    """Consecutive cycles ``(0 1 .. l1-1)(l1 .. l1+l2-1)...`` in the given order."""
    n = sum(parts)
    cycles, start = [], 0
    for length in parts:
        cycles.append(tuple(range(start, start + length)))
        start += length
    return Permutation.from_cycles(n, cycles)


def _flipped_identity_word(parts: tuple[int, ...]) -> tuple[list[Triple], list[Triple]]:
    """Triples ``P, Q`` with ``J + I = P alpha Q`` for the canonical cycle permutation alpha.

    ``parts`` is a nonincreasing partition of an even m with at least one part
    above one. Each step peels the last two indices a, b, c = m-3, m-2, m-1.
    """
    m = sum(parts)
    if m == 2:
        return [], []
    a, b, c = m - 3, m - 2, m - 1
    *head, last = parts
    if last == 1 and head[-1] == 1:
        P, Q = _flipped_identity_word(tuple(head[:-1]))
        return [(a, b, c, -1)] + P, Q + [(a, b, c, 1)]
    if last == 1:
        P, Q = _flipped_identity_word(tuple(head[:-1]) + (head[-1] - 1,))
        swap_ab = {a: b, b: a}
        return [(a, b, c, -1)] + P, _relabel(Q, lambda x: swap_ab.get(x, x)) + [(c, a, b, -1)]
    if last == 2:
        P, Q = _flipped_identity_word(tuple(head))
        swap_bc = {b: c, c: b}
        return [(a, b, c, -1)] + P, _relabel(Q, lambda x: swap_bc.get(x, x)) + [(c, b, a, -1)]
    P, Q = _flipped_identity_word(tuple(head) + (last - 2,))
    # tau = (ab)(ca), rightmost applied first
    def tau(x: int) -> int:
        x = {c: a, a: c}.get(x, x)
        return {a: b, b: a}.get(x, x)
    return [(b, c, a, 1)] + P, _relabel(Q, tau) + [(b, a, c, -1)]


def sigmabar_decompose(sigma: Permutation,
                       cycles: Sequence[Sequence[int]] | None = None) -> TransvectionSeq:
    """``sigma_bar = P_sigma (I + J)`` in ``3(n-2)`` transvections.

    The flipped identity is first written around the canonical permutation of
    the same cycle type, then carried to ``sigma``. ``cycles`` can give the
    cycles of ``sigma`` as written by hand; they fix the matching of cycles,
    hence the exact output word. Fixed points may be omitted.
    """
    n = sigma.n
    if n % 2:
        raise ValueError("bit-reversed permutations need even n")
    if sigma.is_identity():
        raise ValueError("identity: use ibar_decompose")
    inv = sigma.inverse()
    if cycles is None:
        inv_cycles = inv.cycles()
    else:
        if Permutation.from_cycles(n, cycles) != sigma:
            raise ValueError("cycles do not describe sigma")
        listed = {v for cyc in cycles for v in cyc}
        inv_cycles = [tuple(reversed(cyc)) for cyc in cycles]
        inv_cycles += [(v,) for v in range(n) if v not in listed]
    inv_cycles = sorted(inv_cycles, key=len, reverse=True)
    parts = tuple(len(cyc) for cyc in inv_cycles)
    gamma = Permutation(tuple(v for cyc in inv_cycles for v in cyc))
    P, Q = _flipped_identity_word(parts)
    left = _relabel(P, lambda x: sigma(gamma(x)))
    right = _relabel(Q, gamma)
    out = _expand(n, left + right)
    return _checked(out, bit_reversed_matrix(sigma), "sigmabar_decompose")


def lu_triangular_decompose(M: BitMatrix) -> TransvectionSeq | None:
    """``M = L U`` with ``L`` by :func:`ltd` and ``U`` by :func:`utd`, when an LU split exists."""
    lu = lu_decompose(M)
    if lu is None:
        return None
    L, U = lu
    return _checked(ltd(L) + utd(U), M, "lu_triangular_decompose")


def gauss_canonical(M: BitMatrix) -> TransvectionSeq:
    K, U = gauss_jordan(M)
    return _checked(K + canonical_triangular(U), M, "gauss_canonical")


def gauss_utd(M: BitMatrix) -> TransvectionSeq:
    K, U = gauss_jordan(M)
    return _checked(K + utd(U), M, "gauss_utd")


def _peephole(seq: TransvectionSeq) -> TransvectionSeq:
    return peephole_reduce(circuit_of(seq)).transvections()


@dataclass
class DispatchOptions:
    max_exact: int = exact.MAX_N
    use_peephole: bool = True
    table_for: Callable[[int], exact.OptTable] = field(default=exact.build_table)


def heuristic_candidates(M: BitMatrix, peephole: bool = True) -> dict[str, TransvectionSeq]:
    found = {"gauss": gauss_canonical(M), "utd": gauss_utd(M)}
    lu = lu_triangular_decompose(M)
    if lu is not None:
        found["lu"] = lu
    if peephole:
        for name, seq in list(found.items()):
            found[name + "+peephole"] = _checked(_peephole(seq), M, "peephole")
    return found


def dispatch_with_method(M: BitMatrix, opts: DispatchOptions | None = None) -> tuple[TransvectionSeq, str]:
    """Best decomposition found and the name of the method that produced it."""
    opts = opts or DispatchOptions()
    if not M.is_invertible():
        raise SingularMatrixError("matrix is singular over F_2")
    n = M.n
    if M.is_identity():
        return TransvectionSeq(n), "trivial"
    if exact.MIN_N <= n <= min(opts.max_exact, exact.MAX_N):
        seq = exact.optimal_decompose(opts.table_for(n), M)
        return _checked(seq, M, "exact"), "exact"
    found: dict[str, TransvectionSeq] = {}
    perm = permutation_of_matrix(M)
    if perm is not None:
        found["permutation"] = permutation_decompose(perm)
    rev = detect_bit_reversed(M)
    if rev is not None:
        found["bit-reversed"] = ibar_decompose(n) if rev.is_identity() else sigmabar_decompose(rev)
    if len(components(circuit_graph(M))) > 1:
        found["block"] = block_optimize(M, lambda A: _block_solver(A, opts))
    found.update(heuristic_candidates(M, opts.use_peephole))
    # ties go to the first method tried, which is the most structured one
    name = min(found, key=lambda k: len(found[k]))
    return found[name], name


def _block_solver(A: BitMatrix, opts: DispatchOptions) -> TransvectionSeq:
    if A.n == 1:
        return TransvectionSeq(1)
    return dispatch_with_method(A, opts)[0]


def dispatch_optimize(M: BitMatrix, opts: DispatchOptions | None = None) -> TransvectionSeq:
    return dispatch_with_method(M, opts)[0]
