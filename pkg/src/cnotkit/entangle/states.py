"""State vectors over the exact or floating scalar backend.

Amplitude index ``b0 b1 ... b(n-1)`` is read big-endian, so qubit ``q`` is bit
``n - 1 - q`` of the integer index, matching ket labels such as ``|0011>``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..circuit import Circuit, Gate, cnot, h, s, t
from .scalars import OmegaScalar, is_exact, is_zero

INV_SQRT2 = OmegaScalar.inv_sqrt2()
I_EXACT = OmegaScalar.omega_power(2)
W_EXACT = OmegaScalar.omega_power(1)


@dataclass(frozen=True)
class StateVector:
    n: int
    amps: tuple

    def __post_init__(self) -> None:
        if len(self.amps) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} amplitudes, got {len(self.amps)}")
        object.__setattr__(self, "amps", tuple(self.amps))
        if all(is_zero(a, 0.0) for a in self.amps):
            raise ValueError("state vector is zero")

    @property
    def exact(self) -> bool:
        return all(is_exact(a) for a in self.amps)

    def __getitem__(self, label: str | int):
        if isinstance(label, str):
            label = int(label, 2)
        return self.amps[label]

    def norm(self) -> float:
        return math.sqrt(sum(abs(complex(a)) ** 2 for a in self.amps))

    def to_complex(self) -> list[complex]:
        return [complex(a) for a in self.amps]

    def to_float(self) -> StateVector:
        return StateVector(self.n, tuple(complex(a) for a in self.amps))

    def normalized(self) -> StateVector:
        nrm = self.norm()
        return StateVector(self.n, tuple(complex(a) / nrm for a in self.amps))

    def close_to(self, other: StateVector, tol: float = 1e-12) -> bool:
        return self.n == other.n and all(
            abs(complex(a) - complex(b)) <= tol for a, b in zip(self.amps, other.amps))


def _bit(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


def basis_state(label: str, exact: bool = True) -> StateVector:
    n = len(label)
    one = OmegaScalar(1) if exact else 1 + 0j
    zero = OmegaScalar(0) if exact else 0j
    idx = int(label, 2)
    return StateVector(n, tuple(one if i == idx else zero for i in range(1 << n)))


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    n = state.n
    if any(q >= n for q in gate.qubits()):
        raise ValueError(f"gate {gate} out of range for {n} qubits")
    amps = list(state.amps)
    exact = state.exact
    tb = _bit(n, gate.target)
    if gate.is_cnot:
        cb = _bit(n, gate.control)
        out = amps[:]
        for idx in range(len(amps)):
            if idx & cb:
                out[idx ^ tb] = amps[idx]
        return StateVector(n, tuple(out))
    if gate.kind == "H":
        r = INV_SQRT2 if exact else 1 / math.sqrt(2)
        out = amps[:]
        for idx in range(len(amps)):
            if not idx & tb:
                a0, a1 = amps[idx], amps[idx | tb]
                out[idx] = (a0 + a1) * r
                out[idx | tb] = (a0 - a1) * r
        return StateVector(n, tuple(out))
    phase = {"S": I_EXACT if exact else 1j, "T": W_EXACT if exact else cmath.exp(1j * math.pi / 4)}[gate.kind]
    return StateVector(n, tuple(a * phase if idx & tb else a for idx, a in enumerate(amps)))


def run_circuit(c: Circuit, state: StateVector | None = None) -> StateVector:
    """Apply the gates of ``c`` in temporal order, starting from ``|0...0>`` by default."""
    state = state or basis_state("0" * c.n)
    if state.n != c.n:
        raise ValueError("circuit and state widths differ")
    for g in c.gates:
        state = apply_gate(state, g)
    return state


def q_power_state(powers: Sequence[int]) -> StateVector:
    """``(1/sqrt(2^n)) sum_b w^{k_b} |b>`` for ``w = exp(i pi / 4)``."""
    n = int(math.log2(len(powers)))
    scale = INV_SQRT2 ** n
    return StateVector(n, tuple(OmegaScalar.omega_power(k) * scale for k in powers))


def ghz_circuit(n: int) -> Circuit:
    """``H_0`` then the ladder ``X_10, X_21, ...`` (temporal order)."""
    return Circuit(n, (h(0),) + tuple(cnot(q, q - 1) for q in range(1, n)))


def w3_circuit(triple: str | Sequence[int]) -> Circuit:
    """``X_[ijk] (T x T x S) H^3 |000>`` with ``X_[ijk] = X_ij X_ki X_jk`` as an operator."""
    i, j, k = (int(c) for c in triple)
    if sorted((i, j, k)) != [0, 1, 2]:
        raise ValueError("triple must be a permutation of 0, 1, 2")
    prep = (h(0), h(1), h(2), t(0), t(1), s(2))
    return Circuit(3, prep + (cnot(j, k), cnot(k, i), cnot(i, j)))


def bl_circuit() -> Circuit:
    """``X_01 X_20 X_03 X_10 (T x S x S x S) H^4 |0000>``."""
    prep = (h(0), h(1), h(2), h(3), t(0), s(1), s(2), s(3))
    return Circuit(4, prep + (cnot(1, 0), cnot(0, 3), cnot(2, 0), cnot(0, 1)))


def _float_state(n: int, terms: Iterable[tuple[str, complex]]) -> StateVector:
    amps = [0j] * (1 << n)
    for label, c in terms:
        amps[int(label, 2)] += c
    return StateVector(n, tuple(amps))


def _inv_sqrt(m: int, exact: bool):
    """``1/sqrt(m)`` exactly when ``m`` is a power of two, else ``None``."""
    if exact and m & (m - 1) == 0:
        return INV_SQRT2 ** int(math.log2(m))
    return None


def l_state() -> StateVector:
    w = cmath.exp(2j * math.pi / 3)
    u0 = [("0000", 0.5), ("0011", 0.5), ("1100", 0.5), ("1111", 0.5)]
    u1 = [("0000", 0.5), ("0011", -0.5), ("1100", -0.5), ("1111", 0.5)]
    u2 = [("0101", 0.5), ("0110", 0.5), ("1001", 0.5), ("1010", 0.5)]
    r = 1 / math.sqrt(3)
    terms = [(b, r * c) for b, c in u0] + [(b, r * w * c) for b, c in u1] + [(b, r * w * w * c) for b, c in u2]
    return _float_state(4, terms)


def hd_state() -> StateVector:
    r = 1 / math.sqrt(6)
    return _float_state(4, [("0001", r), ("0010", r), ("0100", r), ("1000", r), ("1111", r * math.sqrt(2))])


def m2222_state() -> StateVector:
    """Built from the three vectors v1, v2, v3 and rescaled to unit norm."""
    r6, r2 = 1 / math.sqrt(6), 1 / math.sqrt(2)
    v1 = [(b, r6 * sg) for b, sg in [("0000", 1), ("0101", 1), ("0110", -1), ("1001", -1), ("1010", 1), ("1111", 1)]]
    v2 = [("0011", r2), ("1100", r2)]
    v3 = [(b, r2 * sg) for b, sg in [("0001", -1), ("0010", 1), ("0100", -1), ("0111", 1),
                                     ("1000", 1), ("1011", -1), ("1101", 1), ("1110", -1)]]
    terms = ([(b, r6 * c) for b, c in v1] + [(b, math.sqrt(6) / 4 * c) for b, c in v2]
             + [(b, r2 * c) for b, c in v3])
    return _float_state(4, terms).normalized()


def w_state(n: int, exact: bool = True) -> StateVector:
    """Equal superposition of the weight-one basis states.

    Exact when ``1/sqrt(n)`` is in the ring; otherwise exact but unnormalized
    (every amplitude 1), or floating and normalized when ``exact`` is false.
    """
    labels = [("0" * q + "1" + "0" * (n - q - 1)) for q in range(n)]
    if exact:
        r = _inv_sqrt(n, True) or OmegaScalar(1)
        amps = [OmegaScalar(0)] * (1 << n)
        for b in labels:
            amps[int(b, 2)] = r
        return StateVector(n, tuple(amps))
    return _float_state(n, [(b, 1 / math.sqrt(n)) for b in labels])


def factorized_state(u: Sequence) -> StateVector:
    """``(u0|0> + u1|1>) x (u2|0> + u3|1>) x ...`` for ``len(u) = 2n``."""
    if len(u) % 2 or not u:
        raise ValueError("need an even, nonzero number of coefficients")
    n = len(u) // 2
    amps = []
    for idx in range(1 << n):
        acc = None
        for q in range(n):
            c = u[2 * q + ((idx >> (n - 1 - q)) & 1)]
            acc = c if acc is None else acc * c
        amps.append(acc)
    return StateVector(n, tuple(amps))


def named_state(name: str) -> StateVector:
    """``GHZ:n``, ``W:n``, ``BL``, ``L``, ``HD`` or ``M2222``."""
    key, _, arg = name.partition(":")
    key = key.upper()
    if key == "GHZ":
        return run_circuit(ghz_circuit(int(arg or 3)))
    if key == "W":
        return w_state(int(arg or 3))
    if key == "BL":
        return run_circuit(bl_circuit())
    if key == "L":
        return l_state()
    if key == "HD":
        return hd_state()
    if key == "M2222":
        return m2222_state()
    raise ValueError(f"unknown state {name!r}")
