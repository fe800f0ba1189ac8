from __future__ import annotations

import cmath
import math
import random

import numpy as np
import pytest

from cnotkit.circuit import Circuit, cnot, h, s, t
from cnotkit.data import load_fixture
from cnotkit.entangle import covariants
from cnotkit.entangle.covariants import (
    HyperdeterminantMismatchError,
    cov3,
    cov4,
    delta3,
    hyperdet4,
    hyperdet_candidates,
    hyperdet_from_invariants,
    inv4,
    quadratic_discriminant,
    w3_verdict,
)
from cnotkit.entangle.scalars import OmegaScalar, render
from cnotkit.entangle.states import (
    StateVector,
    apply_gate,
    basis_state,
    bl_circuit,
    factorized_state,
    ghz_circuit,
    named_state,
    q_power_state,
    run_circuit,
    w3_circuit,
    w_state,
)

W = OmegaScalar.omega_power(1)
R2 = OmegaScalar.inv_sqrt2()
Q = cmath.exp(1j * math.pi / 4)


def rand_scalar(rng: random.Random, bound: int = 3) -> OmegaScalar:
    return OmegaScalar(*(rng.randint(-bound, bound) for _ in range(4)), k=rng.randint(0, 2))


def rand_exact_state(rng: random.Random, n: int) -> StateVector:
    while True:
        amps = tuple(rand_scalar(rng) for _ in range(1 << n))
        if any(not a.is_zero() for a in amps):
            return StateVector(n, amps)


# ---------------------------------------------------------------- scalars


def test_omega_ring_laws(rng):
    one = OmegaScalar(1)
    assert W ** 8 == one
    assert W ** 4 == -one
    assert R2 * R2 == one.half()
    assert OmegaScalar.sqrt2() * R2 == one
    for _ in range(200):
        a, b, c = rand_scalar(rng), rand_scalar(rng), rand_scalar(rng)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        for x, y in ((a + b, complex(a) + complex(b)), (a * b, complex(a) * complex(b))):
            assert abs(complex(x) - y) <= 1e-12
        assert (a - a).is_zero()
        assert a.is_zero() == (abs(complex(a)) < 1e-12)


def test_omega_canonical_form():
    x = OmegaScalar(2, 4, 0, 6, k=1)
    assert x.a == (1, 2, 0, 3) and x.k == 0
    assert OmegaScalar(0, 0, 0, 0, k=5).k == 0
    assert render(OmegaScalar(1, 0, 0, 0, k=2)) == "(1,0,0,0)/2^2"
    assert render(0.5 + 0j) == [0.5, 0.0]


def test_div_int():
    assert OmegaScalar(6, 3, 0, 0).div_int(3) == OmegaScalar(2, 1, 0, 0)
    with pytest.raises(ArithmeticError):
        OmegaScalar(1).div_int(3)


# ---------------------------------------------------------------- states


def test_hadamard_on_two_qubits():
    st = apply_gate(basis_state("00"), h(0))
    assert st["00"] == R2 and st["10"] == R2
    assert st["01"].is_zero() and st["11"].is_zero()


def test_phase_preparation_is_q_power_state():
    prep = Circuit(3, (h(0), h(1), h(2), t(0), t(1), s(2)))
    assert run_circuit(prep) == q_power_state((0, 2, 1, 3, 1, 3, 2, 4))


def test_ghz_circuit():
    st = run_circuit(ghz_circuit(3))
    assert st["000"] == R2 and st["111"] == R2
    assert sum(not a.is_zero() for a in st.amps) == 2
    assert run_circuit(load_fixture("ghz4")) == run_circuit(ghz_circuit(4))


def test_named_states():
    w4 = named_state("W:4")
    assert all(w4[b] == OmegaScalar(1).half() for b in ("0001", "0010", "0100", "1000"))
    assert named_state("BL") == run_circuit(bl_circuit())
    for name in ("L", "HD", "M2222"):
        assert abs(named_state(name).norm() - 1) < 1e-12
    with pytest.raises(ValueError):
        named_state("XYZ")


def test_factorized_state():
    u = [OmegaScalar(1), OmegaScalar(2), OmegaScalar(0), OmegaScalar(1)]
    st = factorized_state(u)
    assert st["01"] == OmegaScalar(1) and st["11"] == OmegaScalar(2)
    assert st["00"].is_zero() and st["10"].is_zero()


def test_state_validation():
    with pytest.raises(ValueError):
        StateVector(2, (OmegaScalar(0),) * 4)
    with pytest.raises(ValueError):
        StateVector(2, (OmegaScalar(1),) * 3)
    with pytest.raises(ValueError):
        apply_gate(basis_state("00"), h(3))


def test_exact_and_float_simulation_agree(rng):
    for _ in range(10):
        gates = []
        for _ in range(15):
            k = rng.random()
            if k < 0.4:
                gates.append(cnot(*rng.sample(range(3), 2)))
            else:
                gates.append(rng.choice([h, s, t])(rng.randrange(3)))
        c = Circuit(3, tuple(gates))
        ex = run_circuit(c)
        fl = run_circuit(c, basis_state("000", exact=False))
        assert ex.to_float().close_to(fl, 1e-12)


# ---------------------------------------------------------------- 3 qubits

REPRESENTATIVES = {
    "O_VI": (run_circuit(ghz_circuit(3)), (1, 1, 1, 1, 1)),
    "O_V": (w_state(3), (1, 1, 1, 1, 0)),
    "O_IV": (run_circuit(Circuit(3, (h(0), cnot(1, 0)))), (0, 0, 1, 0, 0)),
    "O_III": (run_circuit(Circuit(3, (h(0), cnot(2, 0)))), (0, 1, 0, 0, 0)),
    "O_II": (run_circuit(Circuit(3, (h(1), cnot(2, 1)))), (1, 0, 0, 0, 0)),
    "O_I": (basis_state("000"), (0, 0, 0, 0, 0)),
}


@pytest.mark.parametrize("orbit", list(REPRESENTATIVES))
def test_orbit_representatives(orbit):
    state, v = REPRESENTATIVES[orbit]
    rep = cov3(state)
    assert rep.v == v and rep.orbit == orbit


def test_ghz3_discriminant():
    assert cov3(run_circuit(ghz_circuit(3))).delta == OmegaScalar(1).half().half()


def test_representative_circuits_match_kets():
    r = REPRESENTATIVES
    assert r["O_II"][0]["000"] == R2 and r["O_II"][0]["011"] == R2
    assert r["O_III"][0]["101"] == R2 and r["O_IV"][0]["110"] == R2


def test_discriminants_agree_on_random_states(rng):
    for _ in range(20):
        st = rand_exact_state(rng, 3)
        rep = cov3(st)  # raises if any slot discriminant disagrees
        for slot, q in enumerate((rep.bx, rep.by, rep.bz)):
            assert quadratic_discriminant(q, slot) == delta3(st.amps)


def _c_terms(pairs: dict[str, tuple[int, int]]) -> dict:
    # monomial like "x0y0z1" -> exponent tuple; value (re, im) over 8
    out = {}
    for mono, (re, im) in pairs.items():
        e = []
        for slot in range(3):
            bit = int(mono[2 * slot + 1])
            e += [1 - bit, bit]
        out[tuple(e)] = OmegaScalar(re, 0, im, 0, k=3)
    return out


PRINTED_C = {
    "021": {"x0y0z0": (1, 1), "x0y0z1": (1, 1), "x1y0z0": (1, -1), "x1y0z1": (1, -1)},
    "120": {"x0y0z0": (1, 1), "x0y0z1": (1, 1), "x0y1z0": (1, -1), "x0y1z1": (1, -1)},
    "201": {"x0y0z0": (1, 1), "x0y0z1": (1, -1), "x0y1z0": (1, 1), "x0y1z1": (1, -1)},
    "210": {"x0y0z0": (1, 1), "x0y0z1": (1, -1), "x1y0z0": (1, 1), "x1y0z1": (1, -1)},
}
PRINTED_STATES = {
    "021": (0, 2, 3, 3, 4, 2, 1, 1),
    "201": (0, 4, 2, 2, 3, 1, 3, 1),
    "210": (0, 4, 3, 1, 2, 2, 3, 1),
}


@pytest.mark.parametrize("triple", list(PRINTED_C))
def test_w3_rows(triple):
    st = run_circuit(w3_circuit(triple))
    rep = cov3(st)
    assert rep.delta.is_zero()
    assert dict(rep.c.terms) == _c_terms(PRINTED_C[triple])
    assert w3_verdict(rep) == "W" and rep.orbit == "O_V"
    if triple in PRINTED_STATES:
        assert st == q_power_state(PRINTED_STATES[triple])


def test_w3_row_120_state():
    # the printed ket for this row repeats the input state; the circuit gives this one
    assert run_circuit(w3_circuit("120")) == q_power_state((0, 2, 4, 2, 3, 3, 1, 1))


@pytest.mark.parametrize("triple", ["012", "102"])
def test_w3_excluded_triples_are_generic(triple):
    rep = cov3(run_circuit(w3_circuit(triple)))
    assert not rep.delta.is_zero() and w3_verdict(rep) == "GHZ"


def test_w3_fixture_matches_circuit():
    assert load_fixture("w3_021") == w3_circuit("021")


def test_w3_bad_triple():
    with pytest.raises(ValueError):
        w3_circuit("011")


def test_slocc_witness():
    psi = np.array([Q ** k for k in PRINTED_STATES["021"]]) / math.sqrt(8)
    r = 2 ** 0.25
    A = np.array([[3j, 1], [0.5, -0.5j]])
    B = r * np.array([[-1j * math.sqrt(2), 2], [0, 0.5j]])
    C = np.array([[1j, 1j], [0.5j, -0.5j]])
    k = r * math.sqrt(3) / math.sqrt(2) * Q
    w3 = np.zeros(8, complex)
    w3[[1, 2, 4]] = 1 / math.sqrt(3)
    for m in (A, B, C):
        assert abs(np.linalg.det(m) - 1) < 1e-9
    assert np.abs(np.kron(np.kron(A, B), C) @ psi - k * w3).max() < 1e-9


def test_cov3_wrong_size():
    with pytest.raises(ValueError):
        cov3(basis_state("0000"))


# ---------------------------------------------------------------- 4 qubits


def test_inv4_values():
    b, l_inv, m_inv, d = inv4(run_circuit(ghz_circuit(4)))
    assert b == OmegaScalar(1).half() and l_inv.is_zero() and m_inv.is_zero()
    assert all(x.is_zero() for x in inv4(w_state(4)))
    assert all(x.is_zero() for x in inv4(basis_state("0000")))
    with pytest.raises(ValueError):
        inv4(basis_state("000"))


def test_hyperdeterminant_values():
    assert hyperdet4(run_circuit(ghz_circuit(4))).is_zero()
    assert hyperdet4(named_state("BL")) == -OmegaScalar(1, k=24)
    target = 1 / (2 ** 8 * 3 ** 9)
    for name in ("L", "HD"):
        assert abs(abs(hyperdet4(named_state(name))) - target) <= 1e-12 * target


def test_quartics_agree_on_random_states(rng):
    for _ in range(5):
        hyperdet4(rand_exact_state(rng, 4))


def test_quartics_agree_for_free_invariants(rng):
    # the two discriminants coincide as polynomials in (B, L, M, D_xy)
    for _ in range(10):
        q1, q2 = hyperdet_candidates(*(rand_scalar(rng) for _ in range(4)))
        assert q1 == q2


def test_quartic_mismatch_detected(monkeypatch):
    monkeypatch.setattr(covariants, "hyperdet_candidates", lambda *a: (OmegaScalar(1), OmegaScalar(2)))
    with pytest.raises(HyperdeterminantMismatchError):
        hyperdet_from_invariants(*inv4(named_state("BL")))


def test_generic_circuit_fixture():
    assert load_fixture("generic4") == bl_circuit()
    rep = cov4(run_circuit(load_fixture("generic4")))
    assert rep.delta == -OmegaScalar(1, k=24)
    assert rep.to_dict()["generic"]


def test_float_and_exact_invariants_agree(rng):
    for _ in range(5):
        st = rand_exact_state(rng, 4)
        fl = st.to_float()
        for x, y in zip(inv4(st), inv4(fl)):
            assert abs(complex(x) - y) <= 1e-10 * max(1.0, abs(y))
        st3 = rand_exact_state(rng, 3)
        assert abs(complex(cov3(st3).delta) - cov3(st3.to_float()).delta) <= 1e-10 * max(
            1.0, abs(complex(cov3(st3).delta)))


@pytest.mark.parametrize("gate", [h(0), s(1), t(2), h(3)])
def test_vanishing_patterns_stable_under_local_gates(gate, rng):
    states4 = [named_state("BL"), run_circuit(ghz_circuit(4)), w_state(4), rand_exact_state(rng, 4)]
    for st in states4:
        assert cov4(apply_gate(st, gate)).v1 == cov4(st).v1
    if max(gate.qubits()) < 3:
        states3 = [v[0] for v in REPRESENTATIVES.values()] + [rand_exact_state(rng, 3)]
        for st in states3:
            assert cov3(apply_gate(st, gate)).v == cov3(st).v


def test_report_rendering():
    d = cov4(run_circuit(ghz_circuit(4))).to_dict()
    assert d["B"] == "(1,0,0,0)/2^1" and d["V1"] == [1, 0, 0, 0]
    assert cov3(w_state(3)).to_dict()["orbit"] == "O_V"
