"""Multi-binary forms and their transvectants.

A :class:`MultiForm` is a polynomial in ``p`` pairs of variables
``(x0, x1), (y0, y1), ...``. A monomial is keyed by its exponent tuple
``(e_x0, e_x1, e_y0, e_y1, ...)``. Coefficients come from either scalar
backend; stored coefficients are never exactly zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .scalars import is_zero

Exponent = tuple[int, ...]


def _falling(a: int, d: int) -> int:
    out = 1
    for x in range(a - d + 1, a + 1):
        out *= x
    return out


def _nonzero(c) -> bool:
    return not is_zero(c, 0.0)


@dataclass(frozen=True)
class MultiForm:
    p: int
    terms: Mapping[Exponent, object]

    def __post_init__(self) -> None:
        clean = {}
        for e, c in self.terms.items():
            if len(e) != 2 * self.p or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for {self.p} slots")
            if _nonzero(c):
                clean[tuple(e)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, p: int) -> MultiForm:
        return cls(p, {})

    @classmethod
    def constant(cls, p: int, c) -> MultiForm:
        return cls(p, {(0,) * (2 * p): c})

    @classmethod
    def ground_form(cls, amps: Sequence, p: int) -> MultiForm:
        """``sum_b alpha_b x_{b0} y_{b1} ...`` with ``b`` read big-endian."""
        terms = {}
        for idx, c in enumerate(amps):
            e = []
            for s in range(p):
                bit = (idx >> (p - 1 - s)) & 1
                e += [1 - bit, bit]
            terms[tuple(e)] = c
        return cls(p, terms)

    def is_zero(self, tol: float | None = None) -> bool:
        if tol is None:
            return not self.terms
        return all(is_zero(c, tol) for c in self.terms.values())

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, e: Exponent, default=0):
        return self.terms.get(tuple(e), default)

    def degrees(self) -> set[tuple[int, ...]]:
        """Multidegrees present; one entry per slot."""
        return {tuple(e[2 * s] + e[2 * s + 1] for s in range(self.p)) for e in self.terms}

    def _check(self, other: MultiForm) -> None:
        if self.p != other.p:
            raise ValueError(f"slot mismatch: {self.p} vs {other.p}")

    def __add__(self, other: MultiForm) -> MultiForm:
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MultiForm(self.p, out)

    def __neg__(self) -> MultiForm:
        return MultiForm(self.p, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: MultiForm) -> MultiForm:
        return self + (-other)

    def scale(self, c) -> MultiForm:
        return MultiForm(self.p, {e: v * c for e, v in self.terms.items()})

    def map_coefficients(self, f: Callable) -> MultiForm:
        return MultiForm(self.p, {e: f(v) for e, v in self.terms.items()})

    def __mul__(self, other: MultiForm) -> MultiForm:
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return MultiForm(self.p, out)

    def derivative(self, slot: int, var: int, times: int = 1) -> MultiForm:
        pos = 2 * slot + var
        out = {}
        for e, c in self.terms.items():
            if e[pos] >= times:
                ne = list(e)
                ne[pos] -= times
                out[tuple(ne)] = c * _falling(e[pos], times)
        return MultiForm(self.p, out)

    def evaluate(self, values: Sequence):
        """Substitute ``values = (x0, x1, y0, y1, ...)``."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(values, e):
                for _ in range(k):
                    v = v * x
            total = total + v
        return total

    def __str__(self) -> str:
        names = "xyztuvw"
        out = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "".join(
                f"{names[k // 2]}{k % 2}" + (f"^{d}" if d > 1 else "")
                for k, d in enumerate(e) if d)
            out.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(out) or "0"


@lru_cache(maxsize=None)
def _slot_options(a0: int, a1: int, b0: int, b1: int, i: int) -> tuple[tuple[int, tuple[int, int]], ...]:
    # Omega^i = sum_r C(i,r) (-1)^r d/dx'0^{i-r} d/dx'1^r d/dx''0^r d/dx''1^{i-r}
    opts = []
    for r in range(i + 1):
        if i - r > a0 or r > a1 or r > b0 or i - r > b1:
            continue
        w = comb(i, r) * (-1) ** r * _falling(a0, i - r) * _falling(a1, r) * _falling(b0, r) * _falling(b1, i - r)
        opts.append((w, (a0 - (i - r) + b0 - r, a1 - r + b1 - (i - r))))
    return tuple(opts)


def transvect(f: MultiForm, g: MultiForm, orders: Sequence[int] | str) -> MultiForm:
    """``tr Omega_1^{i1} ... Omega_p^{ip} f(x') g(x'')`` with the unnormalized Cayley operator."""
    if isinstance(orders, str):
        orders = [int(ch) for ch in orders]
    f._check(g)
    if len(orders) != f.p or min(orders, default=0) < 0:
        raise ValueError("need one nonnegative order per slot")
    p = f.p
    out: dict = {}
    for ef, cf in f.terms.items():
        for eg, cg in g.terms.items():
            slot_opts = []
            for s in range(p):
                opts = _slot_options(ef[2 * s], ef[2 * s + 1], eg[2 * s], eg[2 * s + 1], orders[s])
                if not opts:
                    break
                slot_opts.append(opts)
            else:
                prod = cf * cg
                for combo in itertools.product(*slot_opts):
                    w = 1
                    e: tuple[int, ...] = ()
                    for ws, es in combo:
                        w *= ws
                        e += es
                    v = prod * w
                    out[e] = out[e] + v if e in out else v
    return MultiForm(p, out)


def form_sum(forms: Iterable[MultiForm]) -> MultiForm:
    forms = list(forms)
    total = forms[0]
    for fm in forms[1:]:
        total = total + fm
    return total


def form_product(forms: Iterable[MultiForm]) -> MultiForm:
    forms = list(forms)
    total = forms[0]
    for fm in forms[1:]:
        total = total * fm
    return total
