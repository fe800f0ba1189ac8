"""Route CNOT circuits onto a device coupling graph.

A CNOT between distant qubits is replaced by the product of nearest-neighbour
CNOTs along a shortest path of the undirected coupling graph. For a path
``i1, ..., ip`` the identity is

    [i1 ip] = (W)^2,  W = [i1 i2][i2 i3]...[i(p-1) ip][i(p-2) i(p-1)]...[i2 i3]

written as matrix products. A gate whose arc points the wrong way is wrapped in
Hadamards on both qubits, which swaps target and control.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from .circuit import Circuit, Gate, NonCnotGateError, circuit_of, cnot, h
from .gf2core import Transvection, TransvectionSeq


class RoutingError(ValueError):
    """No route exists for a requested gate."""


@dataclass(frozen=True)
class CouplingGraph:
    """Arcs map ``(control, target)`` to the CNOT error rate of that native gate."""

    n: int
    arcs: dict[tuple[int, int], float]
    h_error: tuple[float, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        for (c, t), e in self.arcs.items():
            if c == t or not (0 <= c < self.n and 0 <= t < self.n):
                raise ValueError(f"bad arc {c}->{t}")
            if not 0.0 <= e < 1.0:
                raise ValueError(f"error rate {e} outside [0, 1)")
        if not self.h_error:
            object.__setattr__(self, "h_error", (0.0,) * self.n)
        if len(self.h_error) != self.n or not all(0.0 <= e < 1.0 for e in self.h_error):
            raise ValueError("h_error must hold one probability in [0, 1) per qubit")

    def neighbours(self, v: int) -> list[int]:
        return sorted({t for c, t in self.arcs if c == v} | {c for c, t in self.arcs if t == v})

    def native(self, target: int, control: int) -> bool:
        return (control, target) in self.arcs

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> CouplingGraph:
        arcs = {(int(a["control"]), int(a["target"])): float(a.get("error", 0.0)) for a in data["arcs"]}
        return cls(int(data["n"]), arcs, tuple(data.get("h_error", ())), data.get("name", name))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "arcs": [{"control": c, "target": t, "error": e} for (c, t), e in sorted(self.arcs.items())],
            "h_error": list(self.h_error),
        }

    @classmethod
    def fully_connected(cls, n: int) -> CouplingGraph:
        return cls(n, {(c, t): 0.0 for c in range(n) for t in range(n) if c != t})

    @classmethod
    def line(cls, n: int, error: float = 0.0) -> CouplingGraph:
        arcs = {}
        for a in range(n - 1):
            arcs[(a, a + 1)] = arcs[(a + 1, a)] = error
        return cls(n, arcs)


def load_graph(path: str | Path) -> CouplingGraph:
    p = Path(path)
    return CouplingGraph.from_dict(json.loads(p.read_text()), name=p.stem)


def bundled_graph(name: str) -> CouplingGraph:
    """``"melbourne"`` or ``"rome"``."""
    text = resources.files("cnotkit.data").joinpath(f"{name}.json").read_text()
    return CouplingGraph.from_dict(json.loads(text), name=name)


def path_expand_seq(path: Sequence[int]) -> TransvectionSeq:
    """Written product equal to ``[path[0] path[-1]]`` using only consecutive pairs."""
    p = len(path)
    if p < 2:
        raise ValueError("path needs at least two vertices")
    if len(set(path)) != p:
        raise ValueError("path repeats a vertex")
    n = max(path) + 1
    if p == 2:
        return TransvectionSeq(n, (Transvection(path[0], path[1]),))
    up = [Transvection(path[k], path[k + 1]) for k in range(p - 1)]
    down = [Transvection(path[k], path[k + 1]) for k in range(p - 3, 0, -1)]
    word = tuple(up + down)
    return TransvectionSeq(n, word + word)


def path_expand(path: Sequence[int]) -> list[Gate]:
    """Temporal gate list for :func:`path_expand_seq`."""
    return list(circuit_of(path_expand_seq(path)).gates)


def _nlog(e: float) -> float:
    return -math.log1p(-e)


def gate_cost(g: CouplingGraph, target: int, control: int) -> float:
    """Cost of one emitted CNOT, including the Hadamard wrap when the arc is reversed."""
    if g.native(target, control):
        return _nlog(g.arcs[(control, target)])
    if g.native(control, target):
        return (_nlog(g.arcs[(target, control)])
                + 2 * _nlog(g.h_error[target]) + 2 * _nlog(g.h_error[control]))
    raise RoutingError(f"qubits {target} and {control} are not coupled")


def _multiplicity(u: int, v: int, source: int, dest: int) -> int:
    # gates the path expansion places on edge (u, v)
    if u == source and v == dest:
        return 1
    if u == source or v == dest:
        return 2
    return 4


def shortest_path(g: CouplingGraph, source: int, dest: int, weighted: bool = False) -> list[int]:
    """Best path in the undirected skeleton.

    Ranks paths by emitted-gate cost (weighted only), then vertex count, then
    prefers the lexicographically largest vertex sequence.
    """
    if source == dest:
        raise ValueError("source equals destination")
    for v in (source, dest):
        if not 0 <= v < g.n:
            raise ValueError(f"qubit {v} outside graph")
    settled: set[int] = set()
    heap: list[tuple[float, int, tuple[int, ...], tuple[int, ...]]] = [(0.0, 1, (-source,), (source,))]
    while heap:
        cost, hops, _, path = heapq.heappop(heap)
        u = path[-1]
        if u in settled:
            continue
        settled.add(u)
        if u == dest:
            return list(path)
        for v in g.neighbours(u):
            if v in settled:
                continue
            step = 0.0
            if weighted:
                step = _multiplicity(u, v, source, dest) * gate_cost(g, u, v)
            new = path + (v,)
            heapq.heappush(heap, (round(cost + step, 12), hops + 1, tuple(-x for x in new), new))
    raise RoutingError(f"qubits {source} and {dest} are disconnected")


def orient(g: CouplingGraph, gate: Gate) -> list[Gate]:
    """The gate itself if native, else its Hadamard-wrapped reverse."""
    t, c = gate.target, gate.control
    if g.native(t, c):
        return [gate]
    if g.native(c, t):
        return [h(t), h(c), cnot(c, t), h(t), h(c)]
    raise RoutingError(f"qubits {t} and {c} are not coupled")


def route_gate(g: CouplingGraph, gate: Gate, weighted: bool = False) -> list[Gate]:
    if not gate.is_cnot:
        raise NonCnotGateError(f"gate {gate} is not a CNOT")
    if g.native(gate.target, gate.control):
        return [gate]
    path = shortest_path(g, gate.target, gate.control, weighted)
    return [w for e in path_expand(path) for w in orient(g, e)]


@dataclass
class RouteReport:
    cnot_count: int
    h_count: int
    success_probability: float
    error_sum: float
    paths: list[list[int]] = field(default_factory=list)


def route_circuit(g: CouplingGraph, c: Circuit, weighted: bool = False) -> tuple[Circuit, RouteReport]:
    if c.n > g.n:
        raise RoutingError(f"circuit needs {c.n} qubits, graph has {g.n}")
    out: list[Gate] = []
    paths = []
    for gate in c.gates:
        if not gate.is_cnot:
            raise NonCnotGateError(f"gate {gate} is not a CNOT")
        if not g.native(gate.target, gate.control):
            paths.append(shortest_path(g, gate.target, gate.control, weighted))
        out += route_gate(g, gate, weighted)
    routed = Circuit(g.n, tuple(out))
    return routed, _report(g, routed, paths)


def _report(g: CouplingGraph, c: Circuit, paths: list[list[int]]) -> RouteReport:
    errors = []
    for gate in c.gates:
        if gate.is_cnot:
            errors.append(g.arcs[(gate.control, gate.target)])
        else:
            errors.append(g.h_error[gate.target])
    success = math.prod(1.0 - e for e in errors)
    return RouteReport(c.cnot_count, len(c) - c.cnot_count, success, math.fsum(errors), paths)


def collapse_h_wraps(c: Circuit) -> Circuit:
    """Replace each emitted ``H t, H c, X c t, H t, H c`` block by ``X t c``."""
    gates = list(c.gates)
    out: list[Gate] = []
    k = 0
    while k < len(gates):
        blk = gates[k:k + 5]
        if (len(blk) == 5 and blk[2].is_cnot and blk[0].kind == blk[1].kind == blk[3].kind == blk[4].kind == "H"):
            a, b = blk[2].control, blk[2].target
            if ([blk[0].target, blk[1].target, blk[3].target, blk[4].target] == [a, b, a, b]):
                out.append(cnot(a, b))
                k += 5
                continue
        out.append(gates[k])
        k += 1
    return Circuit(c.n, tuple(out))
