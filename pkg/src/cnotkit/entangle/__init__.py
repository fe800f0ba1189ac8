"""Exact state simulation and SLOCC invariants for 3- and 4-qubit states."""

from __future__ import annotations

from .covariants import cov3, cov4, hyperdet4, inv4, w3_verdict
from .scalars import OmegaScalar
from .states import StateVector, named_state, run_circuit
from .tower import CovariantTower, w4_report, w4_test

__all__ = [
    "CovariantTower", "OmegaScalar", "StateVector", "cov3", "cov4", "hyperdet4", "inv4",
    "named_state", "run_circuit", "w3_verdict", "w4_report", "w4_test",
]
