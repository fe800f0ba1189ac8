"""Circuit data model, circuit/matrix translation, peephole reduction and file formats.

Gates are stored in temporal order (index 0 acts first). ``X i j`` is the
controlled-NOT with target ``i`` and control ``j``; it flips bit ``i`` when bit
``j`` is set, which on column vectors is left-multiplication by ``[ij]``.
Consequently the matrix of a circuit is the product of its gates' matrices with
the temporally first gate as the rightmost factor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf2core import BitMatrix, Transvection, TransvectionSeq

ONE_QUBIT_KINDS = ("H", "S", "T")


class CircuitParseError(ValueError):
    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"{message} at line {line}")
        self.line = line


class NonCnotGateError(ValueError):
    """Raised when a CNOT-only operation meets an H, S or T gate."""


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    control: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "X":
            if self.control is None:
                raise ValueError("CNOT needs a control qubit")
            if self.control == self.target:
                raise ValueError("target equals control")
        elif self.kind in ONE_QUBIT_KINDS:
            if self.control is not None:
                raise ValueError(f"{self.kind} gate takes one qubit")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def is_cnot(self) -> bool:
        return self.kind == "X"

    def qubits(self) -> tuple[int, ...]:
        return (self.target,) if self.control is None else (self.target, self.control)

    def __str__(self) -> str:
        if self.is_cnot:
            return f"X {self.target} {self.control}"
        return f"{self.kind} {self.target}"


def cnot(target: int, control: int) -> Gate:
    return Gate("X", target, control)


def h(q: int) -> Gate:
    return Gate("H", q)


def s(q: int) -> Gate:
    return Gate("S", q)


def t(q: int) -> Gate:
    return Gate("T", q)


def swap(a: int, b: int) -> list[Gate]:
    """Three CNOTs exchanging qubits ``a`` and ``b``."""
    return [cnot(a, b), cnot(b, a), cnot(a, b)]


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q < 0 or q >= self.n for q in g.qubits()):
                raise ValueError(f"gate {g} out of range for {self.n} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        """Run ``self`` then ``other``."""
        if self.n != other.n:
            raise ValueError("width mismatch")
        return Circuit(self.n, self.gates + other.gates)

    @property
    def cnot_count(self) -> int:
        return sum(g.is_cnot for g in self.gates)

    def is_cnot_only(self) -> bool:
        return all(g.is_cnot for g in self.gates)

    def transvections(self) -> TransvectionSeq:
        """The written product equal to :func:`matrix_of`."""
        _require_cnot(self)
        return TransvectionSeq(self.n, tuple(Transvection(g.target, g.control) for g in reversed(self.gates)))


def _require_cnot(c: Circuit) -> None:
    for g in c.gates:
        if not g.is_cnot:
            raise NonCnotGateError(f"gate {g} is not a CNOT")


def matrix_of(c: Circuit) -> BitMatrix:
    _require_cnot(c)
    rows = [1 << r for r in range(c.n)]
    for g in c.gates:
        rows[g.target] ^= rows[g.control]
    return BitMatrix(c.n, tuple(rows))


def circuit_of(seq: TransvectionSeq) -> Circuit:
    return Circuit(seq.n, tuple(cnot(i, j) for i, j in reversed(seq.items)))


def simulate_basis(c: Circuit, u: Sequence[int]) -> list[int]:
    _require_cnot(c)
    if len(u) != c.n:
        raise ValueError("basis state length does not match circuit width")
    bits = [int(b) & 1 for b in u]
    for g in c.gates:
        bits[g.target] ^= bits[g.control]
    return bits


def equivalent(c1: Circuit, c2: Circuit) -> bool:
    if c1.n != c2.n:
        raise ValueError("width mismatch")
    return matrix_of(c1) == matrix_of(c2)


def commute(a: Transvection, b: Transvection) -> bool:
    """Whether ``[ij]`` and ``[kl]`` commute: true unless ``j == k`` or ``i == l``."""
    return a == b or (a.j != b.i and a.i != b.j)


def _cancel_pass(items: list[Transvection]) -> bool:
    for p, a in enumerate(items):
        for q in range(p + 1, len(items)):
            b = items[q]
            if b == a:
                del items[q]
                del items[p]
                return True
            if not commute(a, b):
                break
    return False


def _triple_pass(items: list[Transvection]) -> bool:
    # [ij][jk][ik] -> [jk][ij] and [ij][ki][kj] -> [ki][ij], written order
    for p, a in enumerate(items):
        i, j = a
        for q in range(p + 1, len(items)):
            b = items[q]
            if b.i == j and b.j != i:
                want = Transvection(i, b.j)
                repl = [b, a]
            elif b.j == i and b.i != j:
                want = Transvection(b.i, j)
                repl = [b, a]
            else:
                want = None
            if want is not None:
                for r in range(q + 1, len(items)):
                    c = items[r]
                    if c == want:
                        items[r:r + 1] = []
                        items[q:q + 1] = repl
                        del items[p]
                        return True
                    if not commute(c, want):
                        break
            if not commute(a, b):
                break
    return False


def peephole_reduce(c: Circuit) -> Circuit:
    """Apply cancellation and triple rewrites until nothing changes.

    Never increases the gate count and preserves the circuit matrix.
    """
    items = list(c.transvections().items)
    while _cancel_pass(items) or _triple_pass(items):
        pass
    return circuit_of(TransvectionSeq(c.n, tuple(items)))


_QUBITS_RE = re.compile(r"^qubits\s+(\d+)$")


def parse_circuit(text: str) -> Circuit:
    """Parse the native line format: ``qubits n`` then ``X i j`` / ``H i`` / ``S i`` / ``T i``."""
    n: int | None = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _QUBITS_RE.match(line)
            if not m:
                raise CircuitParseError("expected 'qubits n' header", lineno)
            n = int(m.group(1))
            if n < 1:
                raise CircuitParseError("qubit count must be positive", lineno)
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        want = 2 if kind == "X" else 1 if kind in ONE_QUBIT_KINDS else None
        if want is None:
            raise CircuitParseError(f"unknown directive {kind!r}", lineno)
        if len(args) != want or not all(a.isdigit() for a in args):
            raise CircuitParseError(f"{kind} expects {want} qubit index(es)", lineno)
        idx = [int(a) for a in args]
        if any(q >= n for q in idx):
            raise CircuitParseError(f"qubit index out of range for {n} qubits", lineno)
        if kind == "X":
            if idx[0] == idx[1]:
                raise CircuitParseError("target equals control", lineno)
            gates.append(cnot(idx[0], idx[1]))
        else:
            gates.append(Gate(kind, idx[0]))
    if n is None:
        raise CircuitParseError("missing 'qubits n' header", max(1, len(text.splitlines())))
    return Circuit(n, tuple(gates))


def write_circuit(c: Circuit) -> str:
    return "\n".join([f"qubits {c.n}"] + [str(g) for g in c.gates]) + "\n"


def export_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.n}];"]
    for g in c.gates:
        if g.is_cnot:
            lines.append(f"cx q[{g.control}],q[{g.target}];")
        else:
            lines.append(f"{g.kind.lower()} q[{g.target}];")
    return "\n".join(lines) + "\n"


def from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> Circuit:
    """CNOT circuit from temporal ``(target, control)`` pairs."""
    return Circuit(n, tuple(cnot(i, j) for i, j in pairs))
