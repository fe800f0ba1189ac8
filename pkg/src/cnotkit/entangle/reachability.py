"""Randomized check that CNOT circuits never map product states into the W orbit.

Every element of GL_4(F_2) acts on basis states as ``|b> -> |M b>``, so its
image of a state is a permutation of amplitudes. The four invariants are first
screened modulo a prime that contains a primitive 8th root of unity: a value
that is nonzero modulo the prime is nonzero over the exact ring, so only states
whose invariants all vanish modulo the prime need the exact tower test.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..exact import build_table, key_matrix
from ..gf2core import BitMatrix, mat_apply
from .covariants import invariants4_generic
from .forms import MultiForm
from .scalars import OmegaScalar
from .states import StateVector, factorized_state
from .tower import CovariantTower, w4_test

PRIME = 2013265921  # 15 * 2^27 + 1
_GENERATOR = 31


def _omega_mod(p: int = PRIME) -> int:
    w = pow(_GENERATOR, (p - 1) // 8, p)
    if pow(w, 4, p) != p - 1:
        raise ArithmeticError("no primitive 8th root of unity for this prime")
    return w


OMEGA_MOD = _omega_mod()


def to_mod(x: OmegaScalar, p: int = PRIME) -> int:
    """Image of an exact scalar under ``w -> OMEGA_MOD``."""
    v = sum(a * pow(OMEGA_MOD, e, p) for e, a in enumerate(x.a))
    return v * pow(pow(2, x.k, p), -1, p) % p


class ModArray:
    """Vector of residues modulo :data:`PRIME`, supporting ring arithmetic elementwise."""

    __slots__ = ("v",)

    def __init__(self, v) -> None:
        self.v = np.asarray(v, dtype=np.int64) % PRIME

    def __add__(self, o):
        return ModArray(self.v + (o.v if isinstance(o, ModArray) else o))

    def __sub__(self, o):
        return ModArray(self.v - (o.v if isinstance(o, ModArray) else o))

    def __neg__(self):
        return ModArray(-self.v)

    def __mul__(self, o):
        # residues are below 2^31, so products fit in int64
        return ModArray(self.v * (o.v if isinstance(o, ModArray) else o % PRIME))

    __rmul__ = __mul__

    def __truediv__(self, d: int):
        return self * pow(d, -1, PRIME)

    def nonzero(self) -> np.ndarray:
        return self.v != 0

    def is_zero(self) -> bool:
        return not self.v.any()


@lru_cache(maxsize=1)
def gl4_basis_permutations() -> tuple[tuple[BitMatrix, ...], np.ndarray]:
    """All 20160 invertible 4x4 matrices and their actions on the 16 basis indices."""
    mats = tuple(key_matrix(4, int(k)) for k in build_table(4).keys())
    perm = np.empty((len(mats), 16), dtype=np.int64)
    for m, M in enumerate(mats):
        for idx in range(16):
            bits = [(idx >> (3 - q)) & 1 for q in range(4)]
            out = mat_apply(M, bits)
            perm[m, idx] = sum(b << (3 - q) for q, b in enumerate(out))
    return mats, perm


def modular_images(state: StateVector) -> np.ndarray:
    """Residues of the state's image under every circuit; one row per circuit."""
    _, perm = gl4_basis_permutations()
    src = np.array([to_mod(a) for a in state.amps], dtype=np.int64)
    images = np.empty_like(perm)
    np.put_along_axis(images, perm, np.broadcast_to(src, perm.shape), axis=1)
    return images


def null_cone_survivors(state: StateVector) -> np.ndarray:
    """Indices of circuits whose image of ``state`` has all four invariants zero modulo the prime."""
    images = modular_images(state)
    inv = invariants4_generic([ModArray(images[:, k]) for k in range(16)])
    alive = np.ones(len(images), dtype=bool)
    for x in inv:
        alive &= ~x.nonzero()
    return np.flatnonzero(alive)


def modular_rejections(images: np.ndarray) -> np.ndarray:
    """Mask of states whose expected-zero D covariants are already nonzero modulo the prime.

    ``images`` holds one state per row as residues. A nonzero residue proves a
    nonzero exact value, so a rejected state is certainly outside the W orbit.
    """
    a = MultiForm.ground_form([ModArray(images[:, k]) for k in range(16)], 4)
    tower = CovariantTower(a)
    rejected = np.zeros(len(images), dtype=bool)
    for name in ("P_D1", "P_D2"):
        for c in tower[name].terms.values():
            rejected |= c.nonzero()
    return rejected


def apply_basis_permutation(state: StateVector, row: np.ndarray) -> StateVector:
    amps = [None] * 16
    for b, target in enumerate(row):
        amps[int(target)] = state.amps[b]
    return StateVector(4, tuple(amps))


def random_factorized(rng: random.Random, bound: int = 3) -> tuple[list[OmegaScalar], StateVector]:
    """Product state with random small exact coefficients; no factor is zero."""
    u: list[OmegaScalar] = []
    while len(u) < 8:
        pair = [OmegaScalar(*(rng.randint(-bound, bound) for _ in range(4))) for _ in range(2)]
        if any(not c.is_zero() for c in pair):
            u += pair
    return u, factorized_state(u)


@dataclass
class ReachabilityReport:
    trials: int
    circuits: int
    survivors: int
    exact_checks: int = 0
    hits: list[tuple[int, list[str]]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.hits

    def to_dict(self) -> dict:
        return {"trials": self.trials, "circuits": self.circuits, "null_cone_survivors": self.survivors,
                "exact_checks": self.exact_checks,
                "hits": [{"trial": t, "matrix": rows} for t, rows in self.hits], "seconds": self.seconds}


def sampled_reachability_check(trials: int = 10, seed: int = 0,
                               states: Sequence[StateVector] | None = None) -> ReachabilityReport:
    """Apply every 4-qubit CNOT circuit to sampled product states and test each image.

    ``states`` replaces the random product states, which lets a caller feed
    a known orbit member through the same harness.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    start = time.perf_counter()
    rng = random.Random(seed)
    inputs = list(states) if states is not None else [random_factorized(rng)[1] for _ in range(trials)]
    mats, perm = gl4_basis_permutations()
    report = ReachabilityReport(len(inputs), len(mats), 0)
    for t, state in enumerate(inputs):
        alive = null_cone_survivors(state)
        report.survivors += len(alive)
        if len(alive):
            alive = alive[~modular_rejections(modular_images(state)[alive])]
        report.exact_checks += len(alive)
        for m in alive:
            if w4_test(apply_basis_permutation(state, perm[m])):
                report.hits.append((t, mats[m].to_strings()))
    report.seconds = time.perf_counter() - start
    return report


__all__ = [
    "PRIME", "OMEGA_MOD", "ModArray", "to_mod", "gl4_basis_permutations", "null_cone_survivors",
    "modular_images", "modular_rejections",
    "apply_basis_permutation", "random_factorized", "ReachabilityReport", "sampled_reachability_check",
]
