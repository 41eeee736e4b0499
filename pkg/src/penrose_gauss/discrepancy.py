"""Vertex counts in balls, discrepancy against the area term, exponent fits."""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._lattice import cylinder_points
from .scheme import (
    DEFAULT_ETA,
    build_scheme,
    enumerate_arrays,
    pentagon_area,
    resolve_ball_exactly,
    vertex_arrays,
    window,
    TAU,
)

DEFAULT_OMEGA = complex(0.0137, 0.00291)


class FitError(ValueError):
    """The exponent fit is degenerate (e.g. every discrepancy is zero)."""


def c_p() -> float:
    """The vertex density constant (phi/5) sqrt(10 + 2 sqrt5) of unit rhombic Penrose tilings.

    Cross-checked against density(L) * sum of the four window areas.
    """
    phi = TAU
    closed = phi / 5 * math.sqrt(10 + 2 * math.sqrt(5))
    areas = sum(window(m).area() for m in (1, 2, 3, 4))
    via_windows = build_scheme().density * areas
    if abs(closed - via_windows) > 1e-12:
        raise ArithmeticError(f"C_P mismatch: {closed!r} vs {via_windows!r}")
    return closed


@dataclass
class CountRecord:
    omega: complex
    m: int
    R: float
    count: int
    main_term: float
    discrepancy: float
    boundary_hits: int
    wall_time: float
    small_radius: bool = False

    def as_dict(self) -> dict:
        return {
            "omega_re": self.omega.real,
            "omega_im": self.omega.imag,
            "m": self.m,
            "R": self.R,
            "count": self.count,
            "main_term": self.main_term,
            "discrepancy": self.discrepancy,
            "boundary_hits": self.boundary_hits,
            "wall_time_s": self.wall_time,
        }


def main_term(m: int, R: float) -> float:
    if m == 0:
        return math.pi * c_p() * R * R
    return math.pi * R * R * build_scheme().density * window(m).area()


def _radii(omega: complex, m: int, R: float, eta: float, exact: bool, threads=None):
    """Distances to the origin of all points counted at radius R, plus band flags."""
    if exact:
        if m == 0:
            v = vertex_arrays(omega, R, eta, exact=True, threads=threads)
            return np.abs(v.phys), v.boundary
        pts = resolve_ball_exactly(enumerate_arrays(window(m, omega), R, eta, sort=False, threads=threads), R)
        return np.abs(pts.phys), pts.boundary
    plan = build_scheme().plan
    labels = (1, 2, 3, 4) if m == 0 else (m,)
    dist, band = [], []
    for k in labels:
        center = -k if m == 0 else 0
        d, s = cylinder_points(plan, center, R, window(k, omega), eta, eta, threads, radii_only=True)
        dist.append(d)
        band.append((np.abs(d - R) <= eta) | (np.abs(s) <= eta))
    return np.concatenate(dist), np.concatenate(band)


def count_ball(
    omega: complex = DEFAULT_OMEGA,
    m: int = 0,
    R: float = 100.0,
    eta: float = DEFAULT_ETA,
    exact: bool = False,
    threads: int | None = None,
) -> CountRecord:
    """#(Lambda_omega cap B_R) for m = 0, or #(Lambda_{m,omega} cap B_R) for m = 1..4."""
    if m not in (0, 1, 2, 3, 4):
        raise ValueError(f"m must be 0..4, got {m!r}")
    small = R < 2
    if small:
        warnings.warn("count_ball is meant for R >= 2", stacklevel=2)
    t0 = time.perf_counter()
    r, band = _radii(complex(omega), m, R, eta, exact, threads)
    count = int(len(r))
    mt = main_term(m, R)
    return CountRecord(complex(omega), m, float(R), count, mt, count - mt, int(band.sum()), time.perf_counter() - t0, small)


@dataclass
class SweepResult:
    records: list[CountRecord]
    fitted_exponent: float
    fitted_constant: float
    residuals: list[float] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "fitted_exponent": self.fitted_exponent,
            "fitted_constant": self.fitted_constant,
            "residuals": self.residuals,
            "n_records": len(self.records),
        }


def fit_envelope(R, disc) -> tuple[float, float, list[float]]:
    """Least-squares fit of log(running max |E|) = log C + a log R.

    Returns (a, C, residuals).  The running maximum follows the envelope
    that a sup bound controls; E itself keeps passing through zero.
    """
    R = np.asarray(R, dtype=float)
    env = np.maximum.accumulate(np.abs(np.asarray(disc, dtype=float)))
    ok = env > 0
    if ok.sum() < 2:
        raise FitError("fewer than two nonzero discrepancies; exponent undefined")
    x, y = np.log(R[ok]), np.log(env[ok])
    a, b = np.polyfit(x, y, 1)
    res = y - (a * x + b)
    return float(a), float(math.exp(b)), [float(v) for v in res]


def geometric_grid(rmin: float, rmax: float, count: int) -> list[float]:
    return [float(v) for v in np.geomspace(rmin, rmax, count)]


def sweep(
    omega: complex = DEFAULT_OMEGA,
    m: int = 0,
    Rgrid=None,
    eta: float = DEFAULT_ETA,
    threads: int | None = None,
) -> SweepResult:
    """Counts and discrepancies on an increasing radius grid.

    One enumeration at the largest radius serves the whole grid: counts at
    smaller radii are read off the sorted distances.
    """
    Rgrid = geometric_grid(10, 2000, 48) if Rgrid is None else [float(r) for r in Rgrid]
    if len(Rgrid) < 2 or any(b <= a for a, b in zip(Rgrid, Rgrid[1:])):
        raise ValueError("Rgrid must be increasing with at least two values")
    t0 = time.perf_counter()
    r, _ = _radii(complex(omega), m, Rgrid[-1], eta, False, threads)
    r = np.sort(r)
    setup = time.perf_counter() - t0
    records = []
    for R in Rgrid:
        t1 = time.perf_counter()
        count = int(np.searchsorted(r, R + eta, side="right"))
        hits = count - int(np.searchsorted(r, R - eta, side="left"))
        mt = main_term(m, R)
        records.append(
            CountRecord(complex(omega), m, R, count, mt, count - mt, hits, time.perf_counter() - t1 + setup / len(Rgrid), R < 2)
        )
    a, C, res = fit_envelope(Rgrid, [rec.discrepancy for rec in records])
    return SweepResult(records, a, C, res)


# ---------------------------------------------------------------------------
# classical baseline


def gauss_count(R: float) -> int:
    """#(Z^2 cap B_R), exact: sum over x of 2*isqrt(floor(R^2) - x^2) + 1."""
    F = math.floor(Fraction(R) ** 2)
    if F < 0:
        return 0
    xmax = math.isqrt(F)
    x = np.arange(-xmax, xmax + 1, dtype=np.int64)
    rem = F - x * x
    y = np.floor(np.sqrt(rem.astype(float))).astype(np.int64)
    # float sqrt can be off by one near perfect squares
    y -= (y * y > rem).astype(np.int64)
    y += ((y + 1) * (y + 1) <= rem).astype(np.int64)
    return int(np.sum(2 * y + 1))


def gauss_baseline(Rgrid) -> SweepResult:
    Rgrid = [float(r) for r in Rgrid]
    if len(Rgrid) < 2 or any(b <= a for a, b in zip(Rgrid, Rgrid[1:])):
        raise ValueError("Rgrid must be increasing with at least two values")
    records = []
    for R in Rgrid:
        t0 = time.perf_counter()
        n = gauss_count(R)
        mt = math.pi * R * R
        records.append(CountRecord(0j, -1, R, n, mt, n - mt, 0, time.perf_counter() - t0))
    a, C, res = fit_envelope(Rgrid, [rec.discrepancy for rec in records])
    return SweepResult(records, a, C, res)
