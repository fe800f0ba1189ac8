"""CNOT circuit optimization over GL_n(F_2), routing, and small-state entanglement classification."""

from __future__ import annotations

from .circuit import Circuit, Gate, circuit_of, matrix_of, parse_circuit, peephole_reduce, write_circuit
from .exact import build_table, optimal_decompose
from .gf2core import BitMatrix, Permutation, Transvection, TransvectionSeq, gauss_jordan
from .router import CouplingGraph, bundled_graph, route_circuit
from .structural import dispatch_optimize, dispatch_with_method

__version__ = "0.1.0"

__all__ = [
    "BitMatrix", "Circuit", "CouplingGraph", "Gate", "Permutation", "Transvection", "TransvectionSeq",
    "build_table", "bundled_graph", "circuit_of", "dispatch_optimize", "dispatch_with_method",
    "gauss_jordan", "matrix_of", "optimal_decompose", "parse_circuit", "peephole_reduce",
    "route_circuit", "write_circuit",
]
