"""Covariants and invariants of 3- and 4-qubit states.

Every polynomial here is written against plain ``+``, ``-`` and ``*`` so the
same code runs on exact scalars, Python complex numbers and the modular
arrays used for bulk screening.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .forms import MultiForm
from .scalars import FLOAT_ZERO_TOL, divide_int, half, is_exact, is_zero, render
from .states import StateVector

ORBITS_3Q: dict[tuple[int, ...], str] = {
    (1, 1, 1, 1, 1): "O_VI",
    (1, 1, 1, 1, 0): "O_V",
    (0, 0, 1, 0, 0): "O_IV",
    (0, 1, 0, 0, 0): "O_III",
    (1, 0, 0, 0, 0): "O_II",
    (0, 0, 0, 0, 0): "O_I",
}

ORBIT_REPRESENTATIVES_3Q = {
    "O_VI": "GHZ",
    "O_V": "W",
    "O_IV": "(|000>+|110>)/sqrt2",
    "O_III": "(|000>+|101>)/sqrt2",
    "O_II": "(|000>+|011>)/sqrt2",
    "O_I": "|000>",
}


class HyperdeterminantMismatchError(ArithmeticError):
    """The two quartic discriminants disagree, which signals an implementation fault."""


def _amps(state: StateVector | Sequence, n: int) -> list:
    if isinstance(state, StateVector):
        if state.n != n:
            raise ValueError(f"expected a {n}-qubit state, got {state.n} qubits")
        return list(state.amps)
    amps = list(state)
    if len(amps) != 1 << n:
        raise ValueError(f"expected {1 << n} amplitudes, got {len(amps)}")
    return amps


def _flag(x, tol: float) -> int:
    if isinstance(x, MultiForm):
        return 0 if x.is_zero(None if all(is_exact(c) for c in x.terms.values()) else tol) else 1
    return 0 if is_zero(x, tol) else 1


def vanishing_vector(values: Sequence, tol: float = FLOAT_ZERO_TOL) -> tuple[int, ...]:
    """1 for each nonzero value or form, 0 for each vanishing one."""
    return tuple(_flag(v, tol) for v in values)


# ---------------------------------------------------------------- 3 qubits


def delta3(a: Sequence):
    """Cayley hyperdeterminant of a 2x2x2 array indexed big-endian."""
    t = a[0] * a[7] - a[1] * a[6] - a[2] * a[5] + a[3] * a[4]
    return t * t - (a[0] * a[3] - a[1] * a[2]) * (a[4] * a[7] - a[5] * a[6]) * 4


def quadratic_discriminant(q: MultiForm, slot: int):
    """``b1^2 - 4 b0 b2`` for ``q = b0 u0^2 + b1 u0 u1 + b2 u1^2`` in the given slot."""
    b = [0, 0, 0]
    for e, c in q.terms.items():
        if any(e[k] for k in range(len(e)) if k // 2 != slot):
            raise ValueError("form depends on other slots")
        b[e[2 * slot + 1]] = c
    return b[1] * b[1] - b[0] * b[2] * 4


def _hessian(a: MultiForm, s1: int, s2: int) -> MultiForm:
    d = [[a.derivative(s1, i).derivative(s2, j) for j in range(2)] for i in range(2)]
    return d[0][0] * d[1][1] - d[0][1] * d[1][0]


@dataclass
class ThreeQubitReport:
    bx: MultiForm
    by: MultiForm
    bz: MultiForm
    c: MultiForm
    delta: object
    v: tuple[int, ...]
    orbit: str
    norm: float

    def to_dict(self) -> dict:
        return {
            "qubits": 3,
            "delta": render(self.delta),
            "V": list(self.v),
            "orbit": self.orbit,
            "norm": self.norm,
            "C_terms": len(self.c),
        }


def cov3(state: StateVector, tol: float = FLOAT_ZERO_TOL) -> ThreeQubitReport:
    """Quadratic covariants, catalecticant, discriminant and orbit of a 3-qubit state."""
    amps = _amps(state, 3)
    a = MultiForm.ground_form(amps, 3)
    bx, by, bz = _hessian(a, 1, 2), _hessian(a, 0, 2), _hessian(a, 0, 1)
    c = a.derivative(0, 0) * bx.derivative(0, 1) - a.derivative(0, 1) * bx.derivative(0, 0)
    delta = delta3(amps)
    exact = all(is_exact(x) for x in amps)
    for slot, q in enumerate((bx, by, bz)):
        d = quadratic_discriminant(q, slot)
        if exact and d != delta or not exact and abs(complex(d) - complex(delta)) > 1e-9:
            raise ArithmeticError(f"discriminant of slot {slot} differs from the explicit formula")
    v = vanishing_vector([bx, by, bz, c, delta], tol)
    nrm = state.norm() if isinstance(state, StateVector) else StateVector(3, tuple(amps)).norm()
    return ThreeQubitReport(bx, by, bz, c, delta, v, ORBITS_3Q.get(v, "unclassified"), nrm)


def w3_verdict(report: ThreeQubitReport) -> str:
    """``"W"`` when the discriminant vanishes and the catalecticant does not."""
    if report.v[4]:
        return "GHZ"
    if report.v[3]:
        return "W"
    return "degenerate"


# ---------------------------------------------------------------- 4 qubits


def _det(m: list[list]):
    if len(m) == 1:
        return m[0][0]
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for col in range(len(m)):
        minor = [row[:col] + row[col + 1:] for row in m[1:]]
        term = m[0][col] * _det(minor)
        if total is None:
            total = term
        elif col % 2:
            total = total - term
        else:
            total = total + term
    return total


def _idx(*bits: int) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


def invariants4_generic(a: Sequence) -> tuple:
    """``(B, L, M, D_xy)`` from 16 amplitudes indexed big-endian."""
    al = lambda s: a[int(s, 2)]  # noqa: E731
    b = None
    for i1, i2, i3 in itertools.product((0, 1), repeat=3):
        term = a[_idx(0, i1, i2, i3)] * a[_idx(1, 1 - i1, 1 - i2, 1 - i3)]
        if b is None:
            b = term
        elif (i1 + i2 + i3) % 2:
            b = b - term
        else:
            b = b + term
    lmat = [[al(x) for x in row] for row in (
        ("0000", "0010", "0001", "0011"),
        ("1000", "1010", "1001", "1011"),
        ("0100", "0110", "0101", "0111"),
        ("1100", "1110", "1101", "1111"))]
    mmat = [[al(x) for x in row] for row in (
        ("0000", "0001", "0100", "0101"),
        ("1000", "1001", "1100", "1101"),
        ("0010", "0011", "0110", "0111"),
        ("1010", "1011", "1110", "1111"))]
    l_inv, m_inv = _det(lmat), _det(mmat)
    # det of the z,t Hessian as a biform in x, y; rows index x-monomials, columns y-monomials
    bxy: list[list] = [[None] * 3 for _ in range(3)]
    for x1, y1, x2, y2 in itertools.product((0, 1), repeat=4):
        term = a[_idx(x1, y1, 0, 0)] * a[_idx(x2, y2, 1, 1)] - a[_idx(x1, y1, 0, 1)] * a[_idx(x2, y2, 1, 0)]
        r, c = x1 + x2, y1 + y2
        bxy[r][c] = term if bxy[r][c] is None else bxy[r][c] + term
    d_xy = -_det(bxy)
    return b, l_inv, m_inv, d_xy


def _quartic_discriminant_1728(alpha, beta, gamma6, delta, omega):
    """``1728 * (I2^3 - 27 I3^2)`` for ``alpha u^4 - 4 beta u^3 v + gamma6 u^2 v^2 - 4 delta u v^3 + omega v^4``.

    ``gamma6`` is six times the usual middle coefficient, which keeps every
    step free of divisions by three.
    """
    i2_12 = alpha * omega * 12 - beta * delta * 48 + gamma6 * gamma6
    i3_216 = (alpha * gamma6 * omega * 36 - alpha * delta * delta * 216 - omega * beta * beta * 216
              - gamma6 * gamma6 * gamma6 + beta * gamma6 * delta * 72)
    return i2_12 * i2_12 * i2_12 - i3_216 * i3_216


def hyperdet_candidates(b, l_inv, m_inv, d_xy) -> tuple:
    """``1728 * Delta`` computed from each of the two quartics."""
    one = b * 0 + 1
    beta = half(b)
    q1 = _quartic_discriminant_1728(
        one, beta, b * b + l_inv * 2 + m_inv * 4, -(d_xy - b * m_inv - half(b * l_inv)), l_inv * l_inv)
    q2 = _quartic_discriminant_1728(
        one, beta, b * b - l_inv * 4 - m_inv * 2, -(d_xy - half(m_inv * b)), m_inv * m_inv)
    return q1, q2


def hyperdet_from_invariants(b, l_inv, m_inv, d_xy):
    q1, q2 = hyperdet_candidates(b, l_inv, m_inv, d_xy)
    if is_exact(q1) and is_exact(q2):
        if q1 != q2:
            raise HyperdeterminantMismatchError(f"quartic discriminants differ: {q1} vs {q2}")
    else:
        z1, z2 = complex(q1), complex(q2)
        if abs(z1 - z2) > 1e-9 * max(1.0, abs(z1), abs(z2)):
            raise HyperdeterminantMismatchError(f"quartic discriminants differ: {z1} vs {z2}")
    return divide_int(q1, 1728)


def inv4(state: StateVector) -> tuple:
    """``(B, L, M, D_xy)`` of a 4-qubit state."""
    return invariants4_generic(_amps(state, 4))


def hyperdet4(state: StateVector):
    """Degree-24 hyperdeterminant, cross-checked between two quartics."""
    return hyperdet_from_invariants(*inv4(state))


@dataclass
class FourQubitReport:
    b: object
    l: object  # noqa: E741
    m: object
    d_xy: object
    delta: object
    v1: tuple[int, ...]
    norm: float
    v2: tuple[int, ...] | None = None
    w4: bool | None = None
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "qubits": 4,
            "B": render(self.b),
            "L": render(self.l),
            "M": render(self.m),
            "D_xy": render(self.d_xy),
            "delta": render(self.delta),
            "V1": list(self.v1),
            "generic": bool(_flag(self.delta, FLOAT_ZERO_TOL)),
            "norm": self.norm,
        }
        if self.v2 is not None:
            out["V2"] = list(self.v2)
            out["w4_orbit"] = self.w4
            out["flags"] = list(self.flags)
        return out


def cov4(state: StateVector, tower: bool = False, tol: float = FLOAT_ZERO_TOL) -> FourQubitReport:
    """Invariants of a 4-qubit state, with the null-cone tower when ``tower`` is set."""
    b, l_inv, m_inv, d_xy = inv4(state)
    delta = hyperdet_from_invariants(b, l_inv, m_inv, d_xy)
    rep = FourQubitReport(b, l_inv, m_inv, d_xy, delta, vanishing_vector([b, l_inv, m_inv, d_xy], tol),
                          state.norm())
    if tower:
        from .tower import w4_report

        wr = w4_report(state, tol=tol)
        rep.v2, rep.w4, rep.flags = wr.v2, wr.member, wr.flags
    return rep

