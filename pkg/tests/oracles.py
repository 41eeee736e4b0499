"""Independent numerical oracles shared by the tests.

None of these reuse the package's transform code: they integrate the
defining integrals directly.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate


def j1_integral(t: float) -> float:
    """J1(t) = (1/2pi) int_0^2pi cos(t sin(th) - th) dth (the sine part integrates to 0)."""
    val, _ = integrate.quad(lambda th: math.cos(t * math.sin(th) - th), 0, 2 * math.pi, limit=1000, epsabs=1e-13, epsrel=1e-13)
    return val / (2 * math.pi)


def _gl(n: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return (b - a) / 2 * x + (a + b) / 2, (b - a) / 2 * w


def ball_quadrature(R: float, y: complex, nr: int = 200, nt: int = 512) -> complex:
    """int over |x| <= R of e(-x.y) dx on a polar grid (Gauss radially, periodic trapezoid in angle)."""
    r, w = _gl(nr, 0.0, R)
    th = 2 * math.pi * np.arange(nt) / nt
    x = r[:, None] * np.exp(1j * th)[None, :]
    phase = np.exp(-2j * math.pi * (x.real * y.real + x.imag * y.imag))
    return complex(np.sum(w[:, None] * r[:, None] * phase) * 2 * math.pi / nt)


def polygon_quadrature(vertices, y: complex, n: int = 100) -> complex:
    """int over a convex polygon of e(-x.y) dx, by a fan of triangles from the centroid.

    Each triangle (c, a, b) is parametrised as c + u((a - c) + v(b - a)) with
    u, v in [0, 1]; the Jacobian is u |(a - c) x (b - a)|.
    """
    v = np.asarray(vertices, dtype=complex)
    c = v.mean()
    u, wu = _gl(n, 0.0, 1.0)
    s, ws = _gl(n, 0.0, 1.0)
    total = 0j
    for a, b in zip(v, np.roll(v, -1)):
        p, q = a - c, b - a
        jac = abs(p.real * q.imag - p.imag * q.real)
        x = c + u[:, None] * (p + s[None, :] * q)
        f = np.exp(-2j * math.pi * (x.real * y.real + x.imag * y.imag))
        total += jac * np.sum(wu[:, None] * ws[None, :] * u[:, None] * f)
    return complex(total)
