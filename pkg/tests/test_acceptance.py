"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line in ``RESULTS``; ``conftest.py`` prints
them in the terminal summary, after the normal pytest output.
"""

from __future__ import annotations

import itertools
import math
import random
import time

import networkx as nx

from cnotkit.circuit import Circuit, cnot, matrix_of
from cnotkit.data import load_fixture
from cnotkit.entangle.covariants import cov3, hyperdet4
from cnotkit.entangle.reachability import sampled_reachability_check
from cnotkit.entangle.scalars import OmegaScalar
from cnotkit.entangle.states import named_state, run_circuit, w3_circuit
from cnotkit.entangle.tower import w4_report, w4_test
from cnotkit.exact import build_table, check_conjecture, length_histogram, optimal_decompose
from cnotkit.gf2core import (
    BitMatrix,
    Permutation,
    TransvectionSeq,
    gauss_jordan,
    group_order,
    ibar,
    lu_decompose,
    ltd,
    mat_mul,
    permutation_matrix,
    transvection_matrix,
    utd,
)
from cnotkit.router import CouplingGraph, bundled_graph, collapse_h_wraps, route_circuit, shortest_path
from cnotkit.structural import (
    bit_reversed_matrix,
    block_optimize,
    gauss_canonical,
    ibar_decompose,
    lu_triangular_decompose,
    permutation_decompose,
    sigmabar_decompose,
)

from conftest import random_invertible
from test_entangle import PRINTED_C, REPRESENTATIVES, _c_terms

RESULTS: dict[int, str] = {}


def verdict(number: int, title: str, failures: list[str], detail: str = "") -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {number:2d}: {title}"
    if detail:
        line += f" ({detail})"
    if failures:
        line += " -- " + "; ".join(failures[:5])
    RESULTS[number] = line
    print(line)
    assert not failures, line


def _fresh_table(n: int):
    build_table.cache_clear()
    start = time.perf_counter()
    table = build_table(n)
    return table, time.perf_counter() - start


LENGTH_COUNTS = {
    2: [1, 2, 2, 1],
    3: [1, 6, 24, 51, 60, 24, 2],
    4: [1, 12, 96, 542, 2058, 5316, 7530, 4058, 541, 6],
    5: [1, 20, 260, 2570, 19680, 117860, 540470, 1769710, 3571175, 3225310, 736540, 15740, 24],
}
ORDERS = {2: 6, 3: 168, 4: 20160, 5: 9999360}


def test_criterion_01_group_orders():
    failures = []
    times = {}
    for n, order in ORDERS.items():
        table, times[n] = _fresh_table(n)
        if group_order(n) != order:
            failures.append(f"group_order({n}) = {group_order(n)}")
        if len(table) != order:
            failures.append(f"search found {len(table)} elements at n={n}")
    if times[4] >= 1.0:
        failures.append(f"n=4 search took {times[4]:.2f} s")
    if times[5] >= 300.0:
        failures.append(f"n=5 search took {times[5]:.1f} s")
    verdict(1, "group orders and search counts for n = 2..5", failures,
            f"n=4 {times[4]:.2f} s, n=5 {times[5]:.1f} s")


def test_criterion_02_length_histograms():
    failures = []
    start = time.perf_counter()
    for n, counts in LENGTH_COUNTS.items():
        got = list(length_histogram(build_table(n)).values())
        if got != counts:
            failures.append(f"n={n}: {got}")
    seconds = time.perf_counter() - start
    if seconds >= 600.0:
        failures.append(f"took {seconds:.1f} s")
    verdict(2, "optimal length histograms for n = 2..5", failures)


def test_criterion_03_longest_elements():
    failures = []
    for n in ORDERS:
        rep = check_conjecture(build_table(n))
        if rep.max_length != 3 * (n - 1):
            failures.append(f"n={n}: max length {rep.max_length}")
        if rep.maximizers != math.factorial(n - 1):
            failures.append(f"n={n}: {rep.maximizers} maximizers")
        if not rep.all_full_cycles:
            failures.append(f"n={n}: a maximizer is not an n-cycle permutation matrix")
    verdict(3, "max length 3(n-1) with (n-1)! full-cycle maximizers for n <= 5", failures)


def test_criterion_04_gauss_jordan_bound():
    rng = random.Random(2024)
    failures = []
    start = time.perf_counter()
    for n in (4, 8, 12, 16):
        for _ in range(1000):
            M = random_invertible(rng, n)
            K, U = gauss_jordan(M)
            if mat_mul(K.product(), U) != M or not U.is_upper_unitriangular():
                failures.append(f"n={n}: bad factorization of {M.to_strings()}")
            seq = gauss_canonical(M)
            if seq.product() != M or len(seq) > n * n - 1:
                failures.append(f"n={n}: length {len(seq)}")
    seconds = time.perf_counter() - start
    if seconds >= 10.0:
        failures.append(f"took {seconds:.2f} s")
    verdict(4, "Gauss-Jordan exact and within n^2 - 1 on 4000 matrices", failures, f"{seconds:.2f} s")


GJ_EXAMPLE = BitMatrix.from_rows(["0111", "0110", "1010", "1111"])
BLOCK_M = BitMatrix.from_rows(["1001011", "0110100", "0000100", "0000011", "0100100", "1000011", "1001001"])
BLOCK_SIGMA = Permutation((3, 5, 4, 1, 6, 0, 2))
BLOCK_WORDS = {
    BitMatrix.from_rows(["1011", "1010", "0111", "1111"]): TransvectionSeq.parse(4, "[13][01][30][21][13][02][01]"),
    BitMatrix.from_rows(["001", "111", "011"]): TransvectionSeq.parse(3, "[01][12][10][21][01]"),
}


def test_criterion_05_worked_examples():
    failures = []
    M = matrix_of(load_fixture("reduction_input"))
    seq = optimal_decompose(build_table(3), M)
    if len(seq) != 2 or seq.product() != M:
        failures.append(f"reduction example: length {len(seq)}")

    K, U = gauss_jordan(GJ_EXAMPLE)
    if str(K) != "[03][30][20][31]" or U != transvection_matrix(4, (1, 2)):
        failures.append(f"elimination example: K={K}")

    c = load_fixture("lu_input")
    M = matrix_of(c)
    L, U = lu_decompose(M)
    lu = lu_triangular_decompose(M)
    if len(c) != 13 or len(lu) != 8 or lu.product() != M:
        failures.append(f"LU example: {len(c)} -> {len(lu)}")
    if str(utd(U)) != "[01][23][34][12]" or str(ltd(L)) != "[42][32][21][20]":
        failures.append(f"LU example: utd {utd(U)}, ltd {ltd(L)}")

    seq = block_optimize(BLOCK_M, solver=BLOCK_WORDS.__getitem__, sigma=BLOCK_SIGMA)
    if str(seq) != "[30][53][05][63][30][56][53][21][14][12][41][21]" or seq.product() != BLOCK_M:
        failures.append(f"block example: {seq}")

    sigma = Permutation.from_cycles(6, [(5, 0, 3), (1, 4, 2)])
    seq = sigmabar_decompose(sigma, cycles=[(5, 0, 3), (1, 4, 2)])
    if str(seq) != "[24][12][41][01][13][30][05][51][10][21][14][42]":
        failures.append(f"bit-reversed example: {seq}")
    verdict(5, "worked examples reproduce their printed words", failures)


def test_criterion_06_structural_lengths():
    failures = []
    for n in (2, 3, 4, 5):
        table = build_table(n)
        for perm in itertools.permutations(range(n)):
            sigma = Permutation(perm)
            seq = permutation_decompose(sigma)
            want = 3 * (n - len(sigma.cycles()))
            if len(seq) != want or table.length(permutation_matrix(sigma)) != want:
                failures.append(f"permutation {perm}: {len(seq)}")
    t4 = build_table(4)
    if len(ibar_decompose(4)) != 8 or t4.length(ibar(4)) != 8:
        failures.append("flipped identity at n=4")
    for perm in itertools.permutations(range(4)):
        sigma = Permutation(perm)
        if sigma.is_identity():
            continue
        seq = sigmabar_decompose(sigma)
        if len(seq) != 6 or t4.length(bit_reversed_matrix(sigma)) != 6:
            failures.append(f"bit-reversed {perm}: {len(seq)}")
    verdict(6, "structural decompositions hit the exact optimum", failures)


def test_criterion_07_routing():
    failures = []
    g = bundled_graph("melbourne")
    x47 = Circuit(g.n, (cnot(4, 7),))
    routed, rep = route_circuit(g, x47)
    if shortest_path(g, 4, 7) != [4, 10, 9, 8, 7] or rep.paths != [[4, 10, 9, 8, 7]]:
        failures.append(f"melbourne path {rep.paths}")
    if rep.cnot_count != 12:
        failures.append(f"melbourne count {rep.cnot_count}")
    if matrix_of(collapse_h_wraps(routed)) != matrix_of(x47):
        failures.append("melbourne product check")

    rng = random.Random(77)
    trees = 0
    while trees < 200:
        n = rng.randint(3, 14)
        tree = nx.from_prufer_sequence([rng.randrange(n) for _ in range(n - 2)])
        s, d = rng.sample(range(n), 2)
        p = len(nx.shortest_path(tree, s, d))
        if p < 3:
            continue
        trees += 1
        arcs = {}
        for a, b in tree.edges:
            arcs[(a, b)] = arcs[(b, a)] = 0.0
        routed, rep = route_circuit(CouplingGraph(n, arcs), Circuit(n, (cnot(s, d),)))
        if rep.cnot_count != 4 * p - 8 or matrix_of(routed) != transvection_matrix(n, (s, d)):
            failures.append(f"tree path of {p} vertices: {rep.cnot_count} gates")
    verdict(7, "routing counts on melbourne and random trees", failures)


def test_criterion_08_hyperdeterminant_values():
    failures = []
    ghz3 = cov3(named_state("GHZ:3")).delta
    if ghz3 != OmegaScalar(1, k=2):
        failures.append(f"GHZ3 {ghz3}")
    if not hyperdet4(named_state("GHZ:4")).is_zero():
        failures.append("GHZ4 nonzero")
    bl = hyperdet4(named_state("BL"))
    if bl != -OmegaScalar(1, k=24):
        failures.append(f"BL {bl}")
    target = 1 / (2 ** 8 * 3 ** 9)
    l_value = abs(hyperdet4(named_state("L")))
    if abs(l_value - target) > 1e-12 * target:
        failures.append(f"L {l_value!r}")
    verdict(8, "exact and floating discriminant values", failures)


def test_criterion_09_three_qubit_classes():
    failures = []
    for orbit, (state, v) in REPRESENTATIVES.items():
        rep = cov3(state)
        if rep.v != v or rep.orbit != orbit:
            failures.append(f"{orbit}: {rep.v}")
    for triple in ("021", "120", "201", "210"):
        rep = cov3(run_circuit(w3_circuit(triple)))
        if not rep.delta.is_zero() or rep.c.is_zero():
            failures.append(f"[{triple}] not in the W class")
    rep = cov3(run_circuit(w3_circuit("021")))
    if dict(rep.c.terms) != _c_terms(PRINTED_C["021"]):
        failures.append("[021] C coefficients")
    verdict(9, "three-qubit orbit vectors and W-class circuits", failures)


def test_criterion_10_w4_null_cone():
    failures = []
    w4 = named_state("W:4")
    if not w4_test(w4) or w4_report(w4).v1 != (0, 0, 0, 0):
        failures.append("W4 rejected")
    if w4_test(named_state("GHZ:4")):
        failures.append("GHZ4 accepted")
    start = time.perf_counter()
    hits = 0
    for seed in range(10):
        rep = sampled_reachability_check(trials=1, seed=seed)
        if rep.circuits != 20160:
            failures.append(f"seed {seed}: {rep.circuits} circuits")
        hits += len(rep.hits)
    seconds = time.perf_counter() - start
    if hits:
        failures.append(f"{hits} W4-orbit images")
    if seconds >= 300.0:
        failures.append(f"took {seconds:.1f} s")
    verdict(10, "W4 test and 10 sampled product states under all circuits", failures, f"{seconds:.1f} s")


def _t(i: int, j: int, n: int = 4) -> BitMatrix:
    return transvection_matrix(n, (i, j))


def _swap(i: int, j: int, n: int = 4) -> BitMatrix:
    m = list(range(n))
    m[i], m[j] = j, i
    return permutation_matrix(Permutation(tuple(m)))


def _prod(*ms: BitMatrix) -> BitMatrix:
    out = ms[0]
    for m in ms[1:]:
        out = mat_mul(out, m)
    return out


def test_criterion_11_identity_suite():
    n = 4
    I = BitMatrix.identity(n)
    failures = []
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for i, j in pairs:
        if _prod(_t(i, j), _t(i, j)) != I:
            failures.append(f"involution [{i}{j}]")
        braid = _prod(_t(i, j), _t(j, i), _t(i, j))
        if braid != _prod(_t(j, i), _t(i, j), _t(j, i)) or braid != _swap(i, j):
            failures.append(f"braid [{i}{j}]")
    for (i, j), (k, l) in itertools.product(pairs, repeat=2):
        if i != l and j != k and _prod(*[_t(i, j), _t(k, l)] * 2) != I:
            failures.append(f"commutation [{i}{j}][{k}{l}]")
    T = _t
    for i, j, k in itertools.permutations(range(n), 3):
        checks = {
            "non-commutation": (_prod(*[T(i, j), T(j, k)] * 2), T(i, k)),
            "conjugacy a": (_prod(T(i, j), T(j, k), T(i, j)), _prod(T(j, k), T(i, k))),
            "conjugacy b": (_prod(T(i, j), T(k, i), T(i, j)), _prod(T(k, i), T(k, j))),
        }
        word = _prod(T(i, j), T(k, i), T(j, k))
        checks.update({
            "R1": (_prod(word, _swap(j, k)), _prod(T(k, i), T(i, j), T(j, k))),
            "L1": (_prod(_swap(i, j), word), _prod(T(i, j), T(j, k), T(k, i))),
            "R2": (_prod(word, _swap(k, i)), _prod(T(j, k), T(i, j), T(k, i), T(j, k))),
            "L2": (_prod(_swap(k, i), word), _prod(T(i, j), T(k, i), T(j, k), T(i, j))),
            "R3": (_prod(word, _swap(i, j)), _prod(T(j, i), T(i, k), T(k, j))),
            "L3": (_prod(_swap(j, k), word), _prod(T(j, i), T(i, k), T(k, j))),
        })
        failures += [f"{name} ({i},{j},{k})" for name, (a, b) in checks.items() if a != b]
    Ibar = ibar(n)
    if _prod(Ibar, Ibar) != I:
        failures.append("flipped identity squared")
    perms = [Permutation(p) for p in itertools.permutations(range(n))]
    for sigma in perms:
        P = permutation_matrix(sigma)
        if _prod(P, Ibar, permutation_matrix(sigma.inverse())) != Ibar:
            failures.append(f"flipped identity conjugation {sigma.map}")
        for gamma in perms:
            if mat_mul(bit_reversed_matrix(sigma), bit_reversed_matrix(gamma)) != permutation_matrix(sigma * gamma):
                failures.append(f"bit-reversed product {sigma.map} {gamma.map}")
    verdict(11, "generator relations exhaustive at n = 4", failures)


def _brute_force_lengths(n: int, max_len: int) -> dict[BitMatrix, int]:
    gens = [_t(i, j, n) for i in range(n) for j in range(n) if i != j]
    best: dict[BitMatrix, int] = {}
    for length in range(max_len + 1):
        for word in itertools.product(gens, repeat=length):
            M = _prod(BitMatrix.identity(n), *word)
            best.setdefault(M, length)
    return best


def test_criterion_12_brute_force_oracle():
    failures = []
    table = build_table(3)
    best = _brute_force_lengths(3, 6)
    if len(best) != 168:
        failures.append(f"enumeration reached {len(best)} elements")
    for M, length in best.items():
        seq = optimal_decompose(table, M)
        if table.length(M) != length or len(seq) != length or seq.product() != M:
            failures.append(f"{M.to_strings()}: table {table.length(M)}, words {length}")
    verdict(12, "n = 3 lengths agree with word enumeration up to length 6", failures)
