"""Fourier transforms of balls, convex polygons and the radial bump psi.

Convention: f^(y) = integral of e(-x.y) f(x) dx with e(z) = exp(2 pi i z);
planar points and frequencies are complex numbers.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .bessel import bessel_j0, bessel_j1

DEGENERATE_REL = 1e-12


class QuadratureError(ArithmeticError):
    pass


def _dot(y, a):
    """Real dot product of planar vectors stored as complex numbers."""
    return (np.conj(y) * a).real


def ball_ft(R: float, y):
    """Transform of the indicator of the closed disc of radius R: R J1(2 pi R|y|)/|y|."""
    y = np.asarray(y, dtype=complex)
    r = np.abs(np.atleast_1d(y))
    out = np.full(r.shape, math.pi * R * R)
    nz = r > 0
    out[nz] = R * bessel_j1(2 * math.pi * R * r[nz]) / r[nz]
    return float(out[0]) if y.ndim == 0 else out


def polygon_ft(P, y):
    """Transform of the indicator of a convex polygon with ccw vertices.

    Edge-sum formula obtained from the divergence theorem; an edge whose
    direction is (numerically) orthogonal to y uses the limiting value
    -2 pi i |a_{j+1} - a_j| e(-y.(a_j + a_{j+1})/2).  At y = 0 this is the area.
    """
    verts = np.asarray(getattr(P, "vertices", P), dtype=complex)
    y = np.asarray(y, dtype=complex)
    yy = np.atleast_1d(y)
    a = verts
    b = np.roll(verts, -1)
    edge = b - a
    length = np.abs(edge)
    sigma = edge / length
    outward = -1j * sigma  # ccw polygon: outward normal is the edge turned clockwise
    ys = yy[:, None]
    ny = np.abs(yy)
    y_sigma = _dot(ys, sigma)
    y_v = _dot(ys, outward)
    ea = np.exp(-2j * math.pi * _dot(ys, a))
    eb = np.exp(-2j * math.pi * _dot(ys, b))
    degenerate = np.abs(y_sigma) < DEGENERATE_REL * ny[:, None]
    safe = np.where(degenerate, 1.0, y_sigma)
    with np.errstate(invalid="ignore", divide="ignore"):
        quot = np.where(
            degenerate,
            -2j * math.pi * length * np.exp(-2j * math.pi * _dot(ys, (a + b) / 2)),
            (eb - ea) / safe,
        )
    out = np.empty(yy.shape, dtype=complex)
    zero = ny == 0
    nzr = ~zero
    out[nzr] = -np.sum(quot[nzr] * y_v[nzr], axis=1) / (2 * math.pi * ny[nzr]) ** 2
    if zero.any():
        area = 0.5 * np.sum(a.real * b.imag - b.real * a.imag)
        out[zero] = area
    return complex(out[0]) if y.ndim == 0 else out


def polygon_envelope(P, y):
    """(1/|y|) * sum_j min(1, 1/|y.sigma_j|), the decay profile of polygon_ft."""
    verts = np.asarray(getattr(P, "vertices", P), dtype=complex)
    edge = np.roll(verts, -1) - verts
    sigma = edge / np.abs(edge)
    yy = np.atleast_1d(np.asarray(y, dtype=complex))
    ys = np.abs(_dot(yy[:, None], sigma))
    with np.errstate(divide="ignore"):
        terms = np.minimum(1.0, 1.0 / ys)
    return terms.sum(axis=1) / np.abs(yy)


# ---------------------------------------------------------------------------
# the bump psi(x) = exp(-1/(1 - 4|x|^2)) on |x| < 1/2


def psi(r):
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < 0.5
    out[inside] = np.exp(-1.0 / (1.0 - 4.0 * r[inside] ** 2))
    return out


@lru_cache(maxsize=None)
def _gl_half(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1/2]."""
    x, w = leggauss(n)
    return 0.25 * (x + 1), 0.25 * w


def _radial(k: np.ndarray, n: int) -> np.ndarray:
    """2 pi * integral_0^{1/2} psi(r) J0(2 pi r k) r dr with n nodes."""
    r, w = _gl_half(n)
    wt = w * psi(r) * r
    out = np.empty(k.shape)
    # chunk to bound memory for large k arrays
    step = max(1, 2_000_000 // n)
    for s in range(0, k.size, step):
        kk = k[s : s + step]
        out[s : s + step] = 2 * math.pi * (bessel_j0(2 * math.pi * np.outer(kk, r)) @ wt)
    return out


def _converged_radial(k: np.ndarray, tol: float = 1e-10, n0: int = 32, nmax: int = 8192) -> np.ndarray:
    n = n0
    prev = _radial(k, n)
    while n < nmax:
        n *= 2
        cur = _radial(k, n)
        if np.max(np.abs(cur - prev), initial=0.0) <= tol:
            return cur
        prev = cur
    raise QuadratureError(f"radial quadrature did not converge with {nmax} nodes")


@lru_cache(maxsize=1)
def psi_l1() -> float:
    """||psi||_1 = 2 pi integral_0^{1/2} psi(r) r dr."""
    return float(_converged_radial(np.zeros(1), tol=1e-15)[0])


def bump_ft(eps: float, y):
    """Transform of psi_eps(x) = psi(x/eps) / (||psi||_1 eps^2), i.e. psi^(eps y)/||psi||_1.

    Radial Hankel integral with the node count doubled until two successive
    values agree to 1e-10.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    y = np.asarray(y, dtype=complex)
    k = eps * np.abs(np.atleast_1d(y))
    out = _converged_radial(k) / psi_l1()
    return float(out[0]) if y.ndim == 0 else out
