"""Exact arithmetic in Z[zeta], zeta a primitive 5th root of unity.

Elements are stored in the power basis {1, zeta, zeta^2, zeta^3}; zeta^4 is
always rewritten as -1 - zeta - zeta^2 - zeta^3.  The two complex embeddings
used throughout are

    phys: zeta -> e(1/5)      int: zeta -> e(2/5)

with e(x) = exp(2 pi i x).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

ZETA_PHYS = cmath.exp(2j * cmath.pi / 5)
ZETA_INT = cmath.exp(4j * cmath.pi / 5)

# powers zeta^0..zeta^3 under each embedding, for vectorised evaluation
_PHYS_POWERS = np.array([ZETA_PHYS**j for j in range(4)])
_INT_POWERS = np.array([ZETA_INT**j for j in range(4)])


def _reduce(coeffs: list[int]) -> tuple[int, int, int, int]:
    """Reduce a polynomial in zeta (any length) to the canonical basis."""
    folded = [0, 0, 0, 0, 0]
    for k, c in enumerate(coeffs):
        folded[k % 5] += c
    top = folded[4]
    return (folded[0] - top, folded[1] - top, folded[2] - top, folded[3] - top)


@dataclass(frozen=True, slots=True)
class CycInt:
    """a0 + a1 zeta + a2 zeta^2 + a3 zeta^3 with integer coordinates."""

    a0: int = 0
    a1: int = 0
    a2: int = 0
    a3: int = 0

    @classmethod
    def from_coeffs(cls, coeffs) -> CycInt:
        """Build from a polynomial coefficient list of any length."""
        return cls(*_reduce([int(c) for c in coeffs]))

    @classmethod
    def zeta_power(cls, k: int) -> CycInt:
        coeffs = [0] * 5
        coeffs[k % 5] = 1
        return cls(*_reduce(coeffs))

    @property
    def coords(self) -> tuple[int, int, int, int]:
        return (self.a0, self.a1, self.a2, self.a3)

    def __add__(self, other: CycInt) -> CycInt:
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: CycInt) -> CycInt:
        return add(self, -_coerce(other))

    def __rsub__(self, other) -> CycInt:
        return add(_coerce(other), -self)

    def __neg__(self) -> CycInt:
        return CycInt(-self.a0, -self.a1, -self.a2, -self.a3)

    def __mul__(self, other: CycInt) -> CycInt:
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CycInt:
        if k < 0:
            raise ValueError("negative powers are not defined in Z[zeta]")
        out, base = CycInt(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self) -> str:
        return f"CycInt({self.a0}, {self.a1}, {self.a2}, {self.a3})"


def _coerce(x) -> CycInt:
    if isinstance(x, CycInt):
        return x
    if isinstance(x, (int, np.integer)):
        return CycInt(int(x))
    raise TypeError(f"cannot treat {type(x).__name__} as an element of Z[zeta]")


ZERO = CycInt()
ONE = CycInt(1)
ZETA = CycInt(0, 1)


class ComplexPair(NamedTuple):
    """Images of an element under the physical and internal embeddings."""

    phys: complex
    int: complex


def add(x: CycInt, y: CycInt) -> CycInt:
    return CycInt(x.a0 + y.a0, x.a1 + y.a1, x.a2 + y.a2, x.a3 + y.a3)


def mul(x: CycInt, y: CycInt) -> CycInt:
    prod = [0] * 7
    for i, xi in enumerate(x.coords):
        if xi:
            for j, yj in enumerate(y.coords):
                prod[i + j] += xi * yj
    return CycInt(*_reduce(prod))


def galois(x: CycInt, k: int) -> CycInt:
    """Image of x under the automorphism zeta -> zeta^k, k in {1, 2, 3, 4}."""
    if k % 5 == 0:
        raise ValueError("k must be prime to 5")
    coeffs = [0] * 5
    for j, a in enumerate(x.coords):
        coeffs[(j * k) % 5] += a
    return CycInt(*_reduce(coeffs))


def conj(x: CycInt) -> CycInt:
    """Complex conjugation, i.e. zeta -> zeta^4.

    In coordinates this is (a0 - a1, -a1, a3 - a1, a2 - a1).
    """
    a0, a1, a2, a3 = x.coords
    return CycInt(a0 - a1, -a1, a3 - a1, a2 - a1)


def trace(x: CycInt) -> int:
    """Tr_{K/Q}(x); the power basis has traces (4, -1, -1, -1)."""
    return 4 * x.a0 - x.a1 - x.a2 - x.a3


def norm(x: CycInt) -> int:
    """Exact field norm, the product of the four Galois conjugates."""
    out = x
    for k in (2, 3, 4):
        out = out * galois(x, k)
    if out.a1 or out.a2 or out.a3:
        raise ArithmeticError(f"norm of {x!r} is not rational: {out!r}")
    return out.a0


def embed(x: CycInt) -> ComplexPair:
    phys = complex(sum(a * ZETA_PHYS**j for j, a in enumerate(x.coords)))
    inte = complex(sum(a * ZETA_INT**j for j, a in enumerate(x.coords)))
    return ComplexPair(phys, inte)


def embed_array(coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised embed for an (N, 4) integer array of coordinates."""
    c = np.asarray(coeffs, dtype=float)
    return c @ _PHYS_POWERS, c @ _INT_POWERS


def abs2_phys_exact(x: CycInt) -> tuple[int, int]:
    """|phys(x)|^2 written exactly as (p + q*phi) / 2 with phi the golden ratio.

    Returns the integer pair (p, q).  x * conj(x) is real, and a real element
    a0 + a1 z + a2 z^2 + a3 z^3 evaluates to a0 + a1 cos 72 + (a2 + a3) cos 144
    with cos 72 = (phi - 1)/2 and cos 144 = -phi/2.
    """
    r = x * conj(x)
    return (2 * r.a0 - r.a1, r.a1 - r.a2 - r.a3)
