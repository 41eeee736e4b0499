"""Numerical diagnostics: Poisson summation over L and the dual-sum lemma checks.

Poisson summation is tested on the lattice in R^4 with
    Phi(x, x*) = f(x) g(x*),   f = chi_{B_2} * psi_{1/8},   g(u) = s^-2 exp(-pi |u|^2 / s^2),
so that the left side sum over L of Phi is finite, and the right side is
    dens(L) * sum over the dual of f^(theta) g^(theta*),   g^(v) = exp(-pi s^2 |v|^2).
The zero frequency contributes dens(L) * 4 pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import _lattice
from ..scheme import build_scheme, coeffs_to_cyc, cyc_coords, window
from .dual import NORM_SCALE, DualArrays, dual_enumerate_arrays, on_real_lines
from .smoothing import _ball_smooth
from .transforms import ball_ft, bump_ft, polygon_ft

PSF_RADIUS = 2.0
PSF_EPS = 1 / 8
PSF_WIDTH = 20.0
PSF_TRUNCATION = 64.0
# g^ is below 1e-20 beyond this internal radius, g below 1e-20 beyond s times it
_GAUSS_CUT = math.sqrt(46.0 / math.pi)


class DiagnosticError(ArithmeticError):
    """A numerical diagnostic could not certify its own accuracy."""


@dataclass
class PsfResult:
    lhs: float
    rhs: float
    truncation: float
    tail_bound: float
    dual_points: int = 0
    lattice_points: int = 0

    @property
    def error(self) -> float:
        return abs(self.lhs - self.rhs)

    def as_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "truncation": self.truncation, "tailBound": self.tail_bound}


def _f_hat(r: np.ndarray) -> np.ndarray:
    y = np.asarray(r, dtype=complex)
    return ball_ft(PSF_RADIUS, y) * bump_ft(PSF_EPS, y)


def psf_lhs(width: float = PSF_WIDTH, nodes: int = 256) -> tuple[float, int]:
    """Direct sum over lattice points of f(lambda) g(lambda*)."""
    reach = PSF_RADIUS + PSF_EPS / 2
    cut = _GAUSS_CUT * width
    plan = build_scheme().plan
    b = _lattice.cylinder_points(plan, 0j, reach, _lattice.Disc(0j, cut), 0.0, 0.0, threads=1)
    phys, inte = cyc_coords(coeffs_to_cyc(b))
    f = _ball_smooth(np.abs(phys), PSF_RADIUS, PSF_EPS, nodes)
    g = np.exp(-math.pi * np.abs(inte) ** 2 / width**2) / width**2
    terms = np.sort(f * g)  # add small terms first
    return float(math.fsum(terms)), len(b)


def psf_tail(truncation: float, width: float = PSF_WIDTH, samples: int = 4096, horizon: float = 16.0) -> float:
    """Estimate of the dual terms beyond |theta| = truncation.

    Dual points weighted by g^(theta*) have mean density 1/(dens(L) s^2) in
    the theta plane, so the tail is about (2 pi / s^2) int_T^inf r F(r) dr with
    F the decreasing envelope (running max from the right) of |f^|.  The
    integral is cut at horizon * T, where the bump factor is negligible.
    """
    r = np.linspace(truncation, horizon * truncation, samples)
    F = np.abs(_f_hat(r))
    env = np.maximum.accumulate(F[::-1])[::-1]
    y = r * env
    integral = float(np.sum((y[1:] + y[:-1]) / 2 * np.diff(r)))
    return 2 * math.pi * integral / width**2


def psf_check(
    truncation: float = PSF_TRUNCATION,
    width: float = PSF_WIDTH,
    max_tail: float = 1e-4,
    threads: int | None = None,
) -> PsfResult:
    """Both sides of Poisson summation for Phi = f x g (see module docstring).

    Raises DiagnosticError when the estimated tail beyond the truncation
    exceeds max_tail.
    """
    if truncation <= 0:
        raise ValueError("truncation must be positive")
    tail = psf_tail(truncation, width)
    if not tail <= max_tail:
        raise DiagnosticError(f"tail estimate {tail:.3g} exceeds {max_tail:.3g} at truncation {truncation}")
    dens = build_scheme().density
    lhs, npts = psf_lhs(width)
    dual = dual_enumerate_arrays(truncation, _GAUSS_CUT / width, threads)
    fh = _f_hat(np.abs(dual.theta))
    gh = np.exp(-math.pi * width**2 * np.abs(dual.theta_star) ** 2)
    terms = np.sort(fh * gh)
    zero = PSF_RADIUS**2 * math.pi
    rhs = dens * math.fsum(np.concatenate([terms, [zero]]))
    return PsfResult(float(lhs), float(rhs), float(truncation), tail, len(dual), npts)


# ---------------------------------------------------------------------------
# lemma checks


@dataclass
class LemmaReport:
    lemma: int
    ranges: dict
    sup_ratio: float | None
    argmax_point: dict | None
    point_count: int
    cells: int = 0
    nonempty_cells: int = 0
    # the same sup with dual points on the five lines R zeta^j left out
    sup_ratio_off_lines: float | None = None
    line_points: int = 0
    per_cell: list = field(default_factory=list, repr=False)

    @property
    def vacuous(self) -> bool:
        return self.sup_ratio is None

    def as_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "ranges": self.ranges,
            "supRatio": self.sup_ratio,
            "argmaxPoint": self.argmax_point,
            "pointCount": self.point_count,
            "cells": self.cells,
            "nonemptyCells": self.nonempty_cells,
            "vacuous": self.vacuous,
            "supRatioOffLines": self.sup_ratio_off_lines,
            "linePoints": self.line_points,
        }


def _point_dict(dual: DualArrays, i: int) -> dict:
    return {
        "source": [int(v) for v in dual.source[i]],
        "theta": [float(dual.theta[i].real), float(dual.theta[i].imag)],
        "thetaStar": [float(dual.theta_star[i].real), float(dual.theta_star[i].imag)],
    }


def _abs_chi_hat(W, y: np.ndarray, chunk: int = 1 << 18) -> np.ndarray:
    out = np.empty(len(y))
    for s in range(0, len(y), chunk):
        out[s : s + chunk] = np.abs(polygon_ft(W, y[s : s + chunk]))
    return out


def lemma1_check(T: float = 50.0, Tint: float = 2.0, W=None, threads: int | None = None) -> LemmaReport:
    """sup over dual points with |theta| <= T, |theta*| <= Tint of
    |chi_W^(theta*)| / ((1/|theta*|) min(1, |theta|))."""
    W = window(1) if W is None else W
    dual = dual_enumerate_arrays(T, Tint, threads)
    ranges = {"T": T, "Tint": Tint, "window": W.label}
    if len(dual) == 0:
        return LemmaReport(1, ranges, None, None, 0)
    ratio = _abs_chi_hat(W, dual.theta_star) * np.abs(dual.theta_star) / np.minimum(1.0, np.abs(dual.theta))
    i = int(np.argmax(ratio))
    lines = on_real_lines(dual)
    off = float(ratio[~lines].max()) if (~lines).any() else None
    return LemmaReport(1, ranges, float(ratio[i]), _point_dict(dual, i), len(dual), 1, 1, off, int(lines.sum()))


def _cell_reduce(lemma, ranges, dual, keys, values, bounds, W_label) -> LemmaReport:
    """Sum values per cell key, divide by the cell bound, max-reduce."""
    ranges = dict(ranges, window=W_label)
    ncells = len(bounds)
    if len(dual) == 0 or len(keys) == 0:
        return LemmaReport(lemma, ranges, None, None, len(dual), ncells, 0)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.ravel()
    scale = np.array([bounds[tuple(int(v) for v in u)] for u in uniq])
    sums = np.bincount(inv, weights=values, minlength=len(uniq))
    ratios = sums / scale
    j = int(np.argmax(ratios))
    members = np.nonzero(inv == j)[0]
    top = members[np.argmax(values[members])]
    lines = on_real_lines(dual)
    off_sums = np.bincount(inv, weights=np.where(lines, 0.0, values), minlength=len(uniq))
    off = float((off_sums / scale).max()) if (~lines).any() else None
    per_cell = [(tuple(int(v) for v in uniq[c]), float(sums[c]), float(ratios[c])) for c in range(len(uniq))]
    arg = dict(_point_dict(dual, int(top)), cell=[int(v) for v in uniq[j]])
    return LemmaReport(lemma, ranges, float(ratios[j]), arg, len(dual), ncells, len(uniq), off, int(lines.sum()), per_cell)


def lemma2_check(R: float = 100.0, m_range=None, n_range=(2, 4000), W=None, threads: int | None = None) -> LemmaReport:
    """Cells S_{m,n}: 2^(m-1)/R < |theta| <= 2^m/R, n R/(M 2^m) <= |theta*| < (n+1) R/(M 2^m).

    Ratio = sum over the cell of |chi_W^(theta*)| divided by 2^(2m) log n / (n R^2).
    n starts at 2 because log 1 = 0.
    """
    W = window(1) if W is None else W
    mmax = math.ceil(math.log2(R))
    m_lo, m_hi = (1, mmax) if m_range is None else m_range
    n_lo, n_hi = n_range
    if n_lo < 2:
        raise ValueError("n must start at 2 or above (the bound vanishes at n = 1)")
    bounds = {(m, n): 2 ** (2 * m) * math.log(n) / (n * R * R) for m in range(m_lo, m_hi + 1) for n in range(n_lo, n_hi + 1)}
    parts, keys, vals = [], [], []
    for m in range(m_lo, m_hi + 1):
        scale = R / (NORM_SCALE * 2**m)
        d = dual_enumerate_arrays(2**m / R, (n_hi + 1) * scale, threads)
        a = np.abs(d.theta)
        n = np.floor(np.abs(d.theta_star) / scale).astype(np.int64)
        keep = (a > 2 ** (m - 1) / R) & (n >= n_lo) & (n <= n_hi)
        d = d.subset(keep)
        parts.append(d)
        keys.append(np.column_stack([np.full(len(d), m), n[keep]]))
        vals.append(_abs_chi_hat(W, d.theta_star))
    dual = _concat(parts)
    return _cell_reduce(
        2, {"R": R, "m": [m_lo, m_hi], "n": [n_lo, n_hi]}, dual, np.concatenate(keys), np.concatenate(vals), bounds, W.label
    )


def lemma3_check(m_range=(1, 8), n_range=(2, 16), W=None, threads: int | None = None) -> LemmaReport:
    """Cells S_{l,m,n}: m < |theta| <= m+1, arg theta in [2 pi (l-1)/m, 2 pi l/m), n-1 < |theta*| <= n.

    Ratio = sum over the cell of |chi_W^(theta*)| divided by log n / n.
    """
    W = window(1) if W is None else W
    m_lo, m_hi = m_range
    n_lo, n_hi = n_range
    if n_lo < 2:
        raise ValueError("n must start at 2 or above (the bound vanishes at n = 1)")
    bounds = {
        (l, m, n): math.log(n) / n for m in range(m_lo, m_hi + 1) for l in range(1, m + 1) for n in range(n_lo, n_hi + 1)
    }
    d = dual_enumerate_arrays(m_hi + 1, n_hi, threads)
    a = np.abs(d.theta)
    m = np.ceil(a).astype(np.int64) - 1  # m < |theta| <= m + 1
    n = np.ceil(np.abs(d.theta_star)).astype(np.int64)  # n - 1 < |theta*| <= n
    keep = (m >= m_lo) & (m <= m_hi) & (n >= n_lo) & (n <= n_hi)
    d, m, n = d.subset(keep), m[keep], n[keep]
    arg = np.mod(np.angle(d.theta), 2 * math.pi)
    l = np.minimum(np.floor(arg * m / (2 * math.pi)).astype(np.int64) + 1, m)
    keys = np.column_stack([l, m, n])
    vals = _abs_chi_hat(W, d.theta_star)
    return _cell_reduce(3, {"m": [m_lo, m_hi], "n": [n_lo, n_hi]}, d, keys, vals, bounds, W.label)


def _concat(parts: list[DualArrays]) -> DualArrays:
    if not parts:
        return DualArrays(np.empty((0, 4), np.int64), np.empty(0, complex), np.empty(0, complex))
    return DualArrays(
        np.concatenate([p.source for p in parts]),
        np.concatenate([p.theta for p in parts]),
        np.concatenate([p.theta_star for p in parts]),
    )


def lemma_bound_check(which: int, params: dict | None = None, threads: int | None = None) -> LemmaReport:
    """Dispatch to lemma1_check / lemma2_check / lemma3_check with keyword params."""
    params = dict(params or {})
    checks = {1: lemma1_check, 2: lemma2_check, 3: lemma3_check}
    if which not in checks:
        raise ValueError(f"which must be 1, 2 or 3, got {which!r}")
    return checks[which](**params, threads=threads)
