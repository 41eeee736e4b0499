"""The dual lattice L*: enumeration, norm quantization and the gap property.

A dual point is D c for an integer vector c, D the transpose-inverse of the
lattice basis.  Its physical part is theta and its internal part theta*.
Since 25 L* lies in L, each dual point is an element of (1/25) L and
625 |theta|^2 |theta*|^2 is an integer (the field norm of 25 theta, over 625).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _lattice
from ..cyclotomic import CycInt, conj, norm
from ..scheme import build_scheme

NORM_SCALE = 625


@dataclass(frozen=True)
class DualPoint:
    source: tuple[int, int, int, int]  # coefficients in the dual basis
    theta: complex
    theta_star: complex

    def lattice_element(self) -> CycInt:
        """25 times this point, as an element of (1 - zeta) Z[zeta]."""
        gens = build_scheme().dual_times_25
        out = CycInt()
        for c, g in zip(self.source, gens):
            out = out + c * g
        return out


@dataclass
class DualArrays:
    source: np.ndarray  # (N, 4) int64
    theta: np.ndarray
    theta_star: np.ndarray

    def __len__(self) -> int:
        return len(self.theta)

    def subset(self, mask) -> DualArrays:
        return DualArrays(self.source[mask], self.theta[mask], self.theta_star[mask])

    def to_points(self) -> list[DualPoint]:
        return [
            DualPoint(tuple(int(v) for v in s), complex(a), complex(b))
            for s, a, b in zip(self.source, self.theta, self.theta_star)
        ]


@lru_cache(maxsize=2)
def _plan(outer_internal: bool) -> _lattice.CylinderPlan:
    D = build_scheme().dual_basis
    if outer_internal:
        return _lattice.make_plan(D, (2, 3), (0, 1))
    return _lattice.make_plan(D, (0, 1), (2, 3))


def _embed(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v = c.astype(float) @ build_scheme().dual_basis.T
    return v[:, 0] + 1j * v[:, 1], v[:, 2] + 1j * v[:, 3]


def dual_enumerate_arrays(Tphys: float, Tint: float, threads: int | None = None) -> DualArrays:
    """All nonzero dual points with |theta| <= Tphys and |theta*| <= Tint, lexicographically sorted."""
    if Tphys <= 0 or Tint <= 0:
        raise ValueError("Tphys and Tint must be positive")
    # the smaller disc is the inner constraint so the per-row boxes stay small
    swap = Tint > Tphys
    plan = _plan(swap)
    outer, inner = (Tint, Tphys) if swap else (Tphys, Tint)
    tol = 1e-12 * max(Tphys, Tint)
    c = _lattice.cylinder_points(plan, 0j, outer, _lattice.Disc(0j, inner), tol, tol, threads)
    c = c[np.any(c != 0, axis=1)]
    theta, theta_star = _embed(c)
    keep = (np.abs(theta) <= Tphys) & (np.abs(theta_star) <= Tint)
    c, theta, theta_star = c[keep], theta[keep], theta_star[keep]
    order = np.lexsort(c.T[::-1]) if len(c) else np.arange(0)
    return DualArrays(c[order], theta[order], theta_star[order])


def dual_enumerate(Tphys: float, Tint: float, threads: int | None = None) -> list[DualPoint]:
    return dual_enumerate_arrays(Tphys, Tint, threads).to_points()


def naive_dual_enumerate(Tphys: float, Tint: float) -> set[tuple]:
    """Coefficient-box oracle for dual_enumerate (small ranges only)."""
    D = build_scheme().dual_basis
    c = _lattice.naive_box_points(D, 0j, Tphys, _lattice.Disc(0j, Tint))
    return {tuple(map(int, row)) for row in c if any(row)}


@lru_cache(maxsize=1)
def _line_maps() -> tuple[np.ndarray, list[np.ndarray]]:
    """Integer matrices (acting on row vectors): dual coefficients -> coordinates
    of 25 theta, and x -> conj(x) zeta^(2j) for j = 0..4."""
    to_x = np.array([g.coords for g in build_scheme().dual_times_25], dtype=np.int64)
    unit = [CycInt.from_coeffs([int(i == k) for i in range(4)]) for k in range(4)]
    maps = []
    for j in range(5):
        z = CycInt.zeta_power(2 * j)
        maps.append(np.array([(conj(e) * z).coords for e in unit], dtype=np.int64))
    return to_x, maps


def on_real_lines(dual: DualArrays) -> np.ndarray:
    """Exact test for theta lying on one of the five lines R zeta^j through 0.

    With x = 25 theta in Z[zeta], x zeta^-j is real iff x = conj(x) zeta^(2j).
    Such points form rank-2 families (real quadratic multiples) with theta and
    theta* both on lines, along which |theta| |theta*| stays fixed.
    """
    to_x, maps = _line_maps()
    x = dual.source @ to_x
    hit = np.zeros(len(dual), dtype=bool)
    for M in maps:
        hit |= np.all(x @ M == x, axis=1)
    return hit


# ---------------------------------------------------------------------------
# norm quantization and gap


@dataclass
class QuantizationReport:
    count: int
    max_deviation: float
    worst: tuple[int, ...] | None
    exact_checked: int
    exact_ok: bool
    min_scaled_norm: float

    def as_dict(self) -> dict:
        return {
            "pointCount": self.count,
            "maxDeviation": self.max_deviation,
            "worstPoint": list(self.worst) if self.worst else None,
            "exactChecked": self.exact_checked,
            "exactOk": self.exact_ok,
            "minScaledNorm": self.min_scaled_norm,
        }


def norm_quantization_check(points, exact_sample: int = 200) -> QuantizationReport:
    """625 |theta|^2 |theta*|^2 versus the nearest integer.

    The float values are compared with their rounding; for up to
    exact_sample points the integer is also confirmed through the exact
    field norm of 25 theta (which equals 625^2 |theta|^2 |theta*|^2).
    """
    arr = points if isinstance(points, DualArrays) else _as_arrays(points)
    if len(arr) == 0:
        raise ValueError("norm_quantization_check needs at least one point")
    v = NORM_SCALE * np.abs(arr.theta) ** 2 * np.abs(arr.theta_star) ** 2
    dev = np.abs(v - np.rint(v))
    i = int(np.argmax(dev))
    ok = True
    step = max(1, len(arr) // exact_sample)
    idx = range(0, len(arr), step)
    gens = build_scheme().dual_times_25
    for j in idx:
        x = CycInt()
        for c, g in zip(arr.source[j], gens):
            x = x + int(c) * g
        n = norm(x)
        if n % NORM_SCALE or n // NORM_SCALE != round(v[j]):
            ok = False
    return QuantizationReport(len(arr), float(dev[i]), tuple(int(t) for t in arr.source[i]), len(idx), ok, float(v.min()))


def _as_arrays(points) -> DualArrays:
    pts = list(points)
    src = np.array([p.source for p in pts], dtype=np.int64).reshape(-1, 4)
    return DualArrays(src, np.array([p.theta for p in pts], dtype=complex), np.array([p.theta_star for p in pts], dtype=complex))


def gap_constant(R: float, Tint: float | None = None, threads: int | None = None) -> tuple[float, int]:
    """min |theta1* - theta2*| / R over distinct dual points with |theta_i| < 1/R.

    Internal parts are taken up to Tint (default 4R).  Returns (ratio,
    number of points); the ratio is inf when fewer than two points qualify.
    """
    from scipy.spatial import cKDTree

    Tint = 4 * R if Tint is None else Tint
    pts = dual_enumerate_arrays(1.0 / R, Tint, threads)
    pts = pts.subset(np.abs(pts.theta) < 1.0 / R)
    if len(pts) < 2:
        return math.inf, len(pts)
    xy = np.column_stack([pts.theta_star.real, pts.theta_star.imag])
    d, _ = cKDTree(xy).query(xy, k=2)
    return float(d[:, 1].min() / R), len(pts)
