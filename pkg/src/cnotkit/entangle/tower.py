"""Transvectant tower of 4-qubit covariants and the null-cone W-orbit test.

Each covariant is a signed sum of transvectants ``(A, X)^{orders}`` of the
ground form ``A`` with an earlier covariant ``X``, optionally scaled. The
table below is transcribed as published, including two entries whose
operands look misprinted; :data:`CORRECTIONS` holds the degree-consistent
alternatives, applied only on request. Forms are evaluated lazily and cached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .covariants import inv4, vanishing_vector
from .forms import MultiForm, form_product, form_sum, transvect
from .scalars import FLOAT_ZERO_TOL, NotDivisibleError, is_exact
from .states import StateVector

Term = tuple[int, str, str]  # sign, operand, per-slot orders


@dataclass(frozen=True)
class Rule:
    terms: tuple[Term, ...]
    scale: Fraction = Fraction(1)
    nonstandard: bool = False


def _r(*terms: Term, scale: Fraction = Fraction(1), nonstandard: bool = False) -> Rule:
    return Rule(tuple(terms), scale, nonstandard)


def _single(table: dict, prefix: str, rows: str) -> None:
    for line in rows.split():
        name, operand, orders = line.split(":")
        table[prefix + name] = _r((1, operand, orders))


HALF, THIRD = Fraction(1, 2), Fraction(1, 3)

TABLE: dict[str, Rule] = {
    "B2200": _r((1, "A", "0011"), scale=HALF),
    "B2020": _r((1, "A", "0101"), scale=HALF),
    "B2002": _r((1, "A", "0110"), scale=HALF),
    "B0220": _r((1, "A", "1001"), scale=HALF),
    "B0202": _r((1, "A", "1010"), scale=HALF),
    "B0022": _r((1, "A", "1100"), scale=HALF),
    "C1_1111": _r((1, "B2200", "1100"), (1, "B0022", "0011")),
    "C3111": _r((1, "B2200", "0100"), (1, "B2020", "0010"), (1, "B2002", "0001"), scale=THIRD),
    "C1311": _r((1, "B2200", "1000"), (1, "B0220", "0010"), (1, "B0202", "0001"), scale=THIRD),
    "C1131": _r((1, "B2020", "1000"), (1, "B0220", "0100"), (1, "B0022", "0001"), scale=THIRD),
    "C1113": _r((1, "B2002", "1000"), (1, "B0202", "0100"), (1, "B0022", "0010"), scale=THIRD),
    "E1_3111": _r((1, "D2200", "0100"), (1, "D2020", "0010"), (1, "D2002", "0001")),
    "E1_1311": _r((1, "D2200", "1000"), (1, "D0220", "0010"), (1, "D0202", "0001")),
    "E1_1131": _r((1, "D2020", "1000"), (1, "D0220", "0100"), (1, "D0022", "0001")),
    "E1_1113": _r((1, "D2002", "1000"), (1, "D0202", "0100"), (1, "D0022", "0010")),
    "G5111": _r((1, "F4002", "0001"), (1, "F4020", "0010"), (1, "F4200", "0100")),
    "G1511": _r((1, "F0402", "0001"), (1, "F0420", "0010"), (1, "F2400", "1000")),
    "G1151": _r((1, "F0042", "0001"), (1, "F0240", "0100"), (1, "F2040", "1000")),
    "G1115": _r((1, "F0204", "0100"), (1, "F0024", "0010"), (1, "F2004", "1000")),
    "I1_5111": _r((1, "H4020", "0010"), (1, "H4200", "0100"), (1, "H4002", "0001")),
    "I1_1511": _r((1, "H0420", "0010"), (1, "H2400", "1000"), (1, "H4002", "0001")),
    "I1_1151": _r((1, "H0240", "0100"), (1, "H2040", "1000"), (1, "H0042", "0001")),
    "I1_1115": _r((1, "H0204", "0100"), (1, "H2004", "1000"), (1, "H0024", "0010")),
    "K5111": _r((1, "J4200", "0100"), (-1, "J4020", "0010"), (1, "J4002", "0001")),
    "K1511": _r((1, "J2400", "1000"), (-1, "J0420", "0010"), (1, "J0402", "0001")),
    "K1151": _r((1, "J2040", "1000"), (-1, "J0240", "0100"), (1, "J0042", "0001")),
    "K1115": _r((1, "J2004", "1000"), (-1, "J0204", "0110"), (1, "J0024", "0010")),
}

# the D_0022 row names its operand without the superscript; read as C1_1111
_single(TABLE, "D", """
    2200:C1_1111:0011 2020:C1_1111:0101 2002:C1_1111:0110
    0220:C1_1111:1001 0202:C1_1111:1010 0022:C1_1111:1100
    4000:C3111:0111 0400:C1311:1011 0040:C1131:1101 0004:C1113:1110""")
_single(TABLE, "F", """
    4200:E1_3111:0011 4020:E1_3111:0101 4002:E1_3111:0110
    0420:E1_1311:1001 0402:E1_1311:1010 0042:E1_1131:1100
    2400:E1_1311:0011 2040:E1_1131:0101 2004:E1_1113:0110
    0240:E1_1131:1001 0204:E1_1113:1010 0024:E1_1113:1100""")
# G with a superscript in three H rows has no separate definition; read as G
_HJ = """
    4200:{p}5111:1011 4020:{p}5111:1101 4002:{p}5111:1110
    0420:{p}1511:1101 0402:{p}1511:1110 0042:{p}1151:1110
    2400:{p}1511:0111 2040:{p}1151:0111 2004:{p}1115:0111
    0240:{p}1151:1011 0204:{p}1115:1011 0024:{p}1115:1101"""
_single(TABLE, "H", _HJ.format(p="G"))
_single(TABLE, "J", _HJ.format(p="I1_"))
_single(TABLE, "L", "6000:K5111:0111 0600:K1511:1011 0060:K1151:1101 0006:K1115:1110")


def _f1_rule(zero_slot: int) -> Rule:
    # E1 form with its 3 at slot s, transvected once at s and once at the empty slot;
    # alternating signs as in the K rows, since the plain sum vanishes identically
    terms = []
    for s in range(4):
        if s == zero_slot:
            continue
        name = "E1_" + "".join("3" if k == s else "1" for k in range(4))
        orders = "".join("1" if k in (s, zero_slot) else "0" for k in range(4))
        terms.append((1 if len(terms) % 2 == 0 else -1, name, orders))
    return Rule(tuple(terms), nonstandard=True)


for _z, _name in enumerate(("F1_0222", "F1_2022", "F1_2202", "F1_2220")):
    TABLE[_name] = _f1_rule(_z)

CORRECTIONS: dict[str, Rule] = {
    "I1_1511": _r((1, "H0420", "0010"), (1, "H2400", "1000"), (1, "H0402", "0001")),
    "K1115": _r((1, "J2004", "1000"), (-1, "J0204", "0100"), (1, "J0024", "0010")),
}

AGGREGATES: dict[str, tuple[str, tuple[str, ...]]] = {
    "P_B": ("sum", ("B2200", "B2020", "B2002", "B0220", "B0202", "B0022")),
    "P_C1": ("sum", ("C3111", "C1311", "C1131", "C1113")),
    "P_C2": ("product", ("C3111", "C1311", "C1131", "C1113")),
    "P_D1": ("sum", ("D4000", "D0400", "D0040", "D0004")),
    "P_D2": ("sum", ("D2200", "D2020", "D2002", "D0220", "D0202", "D0022")),
    "P_F": ("sum", ("F1_2220", "F1_2202", "F1_2022", "F1_0222")),
    "P_L": ("sum", ("L6000", "L0600", "L0060", "L0006")),
}

V2_NAMES = ("A", "P_B", "P_C1", "P_C2", "P_D1", "P_D2", "P_F", "P_L")
W4_V2 = (1, 1, 1, 1, 0, 0, 0, 0)


class CovariantTower:
    """Lazily evaluated covariants of one ground form."""

    def __init__(self, a: MultiForm, corrected: bool = False) -> None:
        if a.p != 4:
            raise ValueError("the tower is defined for 4-qubit ground forms")
        self.table = dict(TABLE)
        if corrected:
            self.table.update(CORRECTIONS)
        self.cache: dict[str, MultiForm] = {"A": a}
        self.flags: set[str] = set()

    @classmethod
    def of_state(cls, state: StateVector, corrected: bool = False) -> CovariantTower:
        if state.n != 4:
            raise ValueError(f"expected a 4-qubit state, got {state.n} qubits")
        return cls(MultiForm.ground_form(state.amps, 4), corrected)

    def __getitem__(self, name: str) -> MultiForm:
        if name in self.cache:
            return self.cache[name]
        if name in AGGREGATES:
            kind, parts = AGGREGATES[name]
            forms = [self[p] for p in parts]
            value = form_sum(forms) if kind == "sum" else form_product(forms)
        elif name in self.table:
            value = self._evaluate(name, self.table[name])
        else:
            raise KeyError(f"unknown covariant {name!r}")
        self.cache[name] = value
        return value

    def _evaluate(self, name: str, rule: Rule) -> MultiForm:
        a = self.cache["A"]
        if rule.nonstandard:
            self.flags.add(f"{name}: nonstandard-definition")
        parts = []
        for sign, operand, orders in rule.terms:
            t = transvect(a, self[operand], orders)
            parts.append(t if sign > 0 else -t)
        value = form_sum(parts)
        if rule.scale.numerator != 1:
            value = value.scale(rule.scale.numerator)
        if rule.scale.denominator != 1:
            value = self._divide(name, value, rule.scale.denominator)
        return value

    def _divide(self, name: str, value: MultiForm, d: int) -> MultiForm:
        def div(c):
            if is_exact(c):
                return c.div_int(d)
            return c / d

        try:
            return value.map_coefficients(div)
        except NotDivisibleError:
            # a nonzero multiple has the same vanishing pattern
            self.flags.add(f"{name}: kept as {d}x, coefficients not divisible by {d}")
            return value


@dataclass
class W4Report:
    v1: tuple[int, ...]
    v2: tuple[int, ...]
    member: bool
    use_pf: bool
    flags: list[str] = field(default_factory=list)


def _v2_matches(v2, use_pf: bool) -> bool:
    idx = [k for k in range(8) if use_pf or V2_NAMES[k] != "P_F"]
    return all(v2[k] == W4_V2[k] for k in idx)


def w4_report(state: StateVector, use_pf: bool = False, corrected: bool = False,
              tol: float = FLOAT_ZERO_TOL) -> W4Report:
    """Full invariant and covariant vanishing patterns of a 4-qubit state.

    The P_F bit is computed but only compared when ``use_pf`` is set.
    """
    v1 = vanishing_vector(inv4(state), tol)
    tower = CovariantTower.of_state(state, corrected)
    v2 = vanishing_vector([tower[n] for n in V2_NAMES], tol)
    member = v1 == (0, 0, 0, 0) and _v2_matches(v2, use_pf)
    return W4Report(v1, v2, member, use_pf, sorted(tower.flags))


def w4_test(state: StateVector, use_pf: bool = False, corrected: bool = False,
            tol: float = FLOAT_ZERO_TOL) -> bool:
    """Null-cone membership test for the W orbit, stopping at the first failing bit."""
    if vanishing_vector(inv4(state), tol) != (0, 0, 0, 0):
        return False
    tower = CovariantTower.of_state(state, corrected)
    # cheapest first: the expected-nonzero bits, then the expected-zero ones
    order = ["A", "P_B", "P_C1", "P_C2", "P_D1", "P_D2", "P_L"] + (["P_F"] if use_pf else [])
    for name in order:
        if name == "P_C2":
            # a product of polynomials vanishes iff some factor does
            factors = AGGREGATES["P_C2"][1]
            bit = int(all(vanishing_vector([tower[f] for f in factors], tol)))
        else:
            bit = vanishing_vector([tower[name]], tol)[0]
        if bit != W4_V2[V2_NAMES.index(name)]:
            return False
    return True

