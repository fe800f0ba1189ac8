"""Scalar backends for state amplitudes and covariant coefficients.

:class:`OmegaScalar` is exact: ``(a0 + a1 w + a2 w^2 + a3 w^3) / 2^k`` with
``w = exp(i pi / 4)``, so ``w^4 = -1`` and ``1/sqrt(2) = (w - w^3) / 2``. It is
closed under the amplitude arithmetic of CNOT, H, S and T gates. The floating
backend uses Python ``complex`` directly.
"""

from __future__ import annotations

import cmath
from typing import Union

W = cmath.exp(1j * cmath.pi / 4)

# |z| below this counts as zero for unit-norm floating states
FLOAT_ZERO_TOL = 1e-9


class NotDivisibleError(ArithmeticError):
    """An exact division by an odd integer left a remainder."""


class OmegaScalar:
    __slots__ = ("a", "k")

    def __init__(self, a0: int = 0, a1: int = 0, a2: int = 0, a3: int = 0, k: int = 0) -> None:
        a = (int(a0), int(a1), int(a2), int(a3))
        k = int(k)
        if k < 0:
            a = tuple(x << -k for x in a)
            k = 0
        g = a[0] | a[1] | a[2] | a[3]
        if g == 0:
            k = 0
        elif k:
            shift = min((g & -g).bit_length() - 1, k)
            if shift:
                a = tuple(x >> shift for x in a)
                k -= shift
        self.a = a
        self.k = k

    @classmethod
    def from_int(cls, v: int) -> OmegaScalar:
        return cls(v)

    @classmethod
    def omega_power(cls, e: int) -> OmegaScalar:
        e %= 8
        coeffs = [0, 0, 0, 0]
        coeffs[e % 4] = -1 if e >= 4 else 1
        return cls(*coeffs)

    @classmethod
    def inv_sqrt2(cls) -> OmegaScalar:
        return cls(0, 1, 0, -1, 1)

    @classmethod
    def sqrt2(cls) -> OmegaScalar:
        return cls(0, 1, 0, -1)

    def _coerce(self, other) -> OmegaScalar:
        if isinstance(other, OmegaScalar):
            return other
        if isinstance(other, int):
            return OmegaScalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.k == o.k:
            return OmegaScalar(*(x + y for x, y in zip(self.a, o.a)), k=self.k)
        if self.k > o.k:
            d = self.k - o.k
            return OmegaScalar(*(x + (y << d) for x, y in zip(self.a, o.a)), k=self.k)
        d = o.k - self.k
        return OmegaScalar(*((x << d) + y for x, y in zip(self.a, o.a)), k=o.k)

    __radd__ = __add__

    def __neg__(self) -> OmegaScalar:
        return OmegaScalar(*(-x for x in self.a), k=self.k)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return OmegaScalar(*(x * other for x in self.a), k=self.k)
        if not isinstance(other, OmegaScalar):
            return NotImplemented
        a0, a1, a2, a3 = self.a
        b0, b1, b2, b3 = other.a
        # w^4 = -1 folds the degree 4..6 terms back with a sign flip
        return OmegaScalar(
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
            k=self.k + other.k,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> OmegaScalar:
        if e < 0:
            raise ValueError("negative powers are not supported")
        out, base = OmegaScalar(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def half(self) -> OmegaScalar:
        return OmegaScalar(*self.a, k=self.k + 1)

    def mul_pow2(self, e: int) -> OmegaScalar:
        return OmegaScalar(*self.a, k=self.k - e)

    def div_int(self, d: int) -> OmegaScalar:
        """Exact division; powers of two go to the denominator, odd parts must divide."""
        if d == 0:
            raise ZeroDivisionError("division by zero")
        sign = -1 if d < 0 else 1
        d = abs(d)
        twos = (d & -d).bit_length() - 1
        odd = d >> twos
        if any(x % odd for x in self.a):
            raise NotDivisibleError(f"{self} is not divisible by {odd}")
        return OmegaScalar(*(sign * x // odd for x in self.a), k=self.k + twos)

    def conjugate(self) -> OmegaScalar:
        a0, a1, a2, a3 = self.a
        return OmegaScalar(a0, -a3, -a2, -a1, k=self.k)

    def is_zero(self) -> bool:
        return not any(self.a)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.k == o.k

    def __hash__(self) -> int:
        return hash((self.a, self.k))

    def __complex__(self) -> complex:
        a0, a1, a2, a3 = self.a
        return (a0 + a1 * W + a2 * W**2 + a3 * W**3) / 2.0**self.k

    def to_complex(self) -> complex:
        return complex(self)

    def __repr__(self) -> str:
        return f"OmegaScalar{self.a + (self.k,)}"

    def __str__(self) -> str:
        return f"({self.a[0]},{self.a[1]},{self.a[2]},{self.a[3]})/2^{self.k}"


Scalar = Union[OmegaScalar, complex]


def is_exact(x) -> bool:
    return isinstance(x, OmegaScalar)


def is_zero(x, tol: float = FLOAT_ZERO_TOL) -> bool:
    if isinstance(x, (int, float, complex)):
        return abs(x) <= tol
    # exact scalars and modular vectors decide zero themselves
    return x.is_zero()


def half(x):
    return x.half() if isinstance(x, OmegaScalar) else x / 2


def divide_int(x, d: int):
    return x.div_int(d) if isinstance(x, OmegaScalar) else x / d


def to_complex(x) -> complex:
    return complex(x)


def render(x) -> str | list[float]:
    """Exact values as ``(a0,a1,a2,a3)/2^k``; floats as ``[re, im]``."""
    if isinstance(x, OmegaScalar):
        return str(x)
    z = complex(x)
    return [z.real, z.imag]
