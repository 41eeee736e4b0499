"""Smoothed vertex counts N-/N+ on the physical side.

N+- = sum over lambda of chi+-_{R,eps}(lambda) chi+-_{W,delta}(lambda*), where
chi+-_{R,eps} = chi_{B_{R +- eps}} * psi_eps and chi+-_{W,delta} = chi_{W+-} * psi_delta,
W- the points of W at distance > delta from its boundary and W+ the points
within delta of W.  psi_eps is supported in B_{eps/2}, so every smoothed
indicator is exactly 1 or 0 outside a thin band around the boundary; only
points in a band need the convolution, which is a radial integral of the
fraction of a circle lying in the set.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .. import _lattice
from ..scheme import DEFAULT_ETA, PentagonWindow, build_scheme, window
from .transforms import _gl_half, psi, psi_l1

RADIAL_NODES = 64
ANGLE_SAMPLES = 256
BISECT_STEPS = 40


@dataclass(frozen=True)
class SmoothingParams:
    epsilon: float
    delta: float
    N: int = 3

    def __post_init__(self):
        if self.epsilon < 0 or self.delta < 0:
            raise ValueError("epsilon and delta must be non-negative")
        if (self.epsilon == 0) != (self.delta == 0):
            raise ValueError("epsilon and delta must both be positive, or both zero (no smoothing)")
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.epsilon >= 0.25 or self.delta >= 0.25:
            warnings.warn(
                f"smoothing scale >= 1/4 (epsilon={self.epsilon:.4g}, delta={self.delta:.4g}); "
                "the sandwich still holds but the smoothing is coarse",
                stacklevel=3,
            )

    @property
    def unsmoothed(self) -> bool:
        return self.epsilon == 0

    @classmethod
    def for_radius(cls, R: float, N: int = 3) -> SmoothingParams:
        """eps = (log R)^(2/3) R^(-1/3), delta = R^(-3/2)."""
        return cls(math.log(R) ** (2 / 3) * R ** (-1 / 3), R**-1.5, N)


def _radial_rule(n: int = RADIAL_NODES):
    """Nodes s on [0, 1/2] and weights with sum w = 1 for the unit bump, f -> sum w f(s)."""
    s, w = _gl_half(n)
    wt = w * psi(s) * 2 * math.pi * s
    return s, wt / wt.sum()


# ---------------------------------------------------------------------------
# ball factor


def _disc_fraction(d, r, rho):
    """Fraction of the circle |x - p| = r, |p| = d, lying in the disc |x| <= rho."""
    d, r = np.broadcast_arrays(np.asarray(d, float), np.asarray(r, float))
    out = np.zeros(d.shape)
    inside = d + r <= rho
    out[inside] = 1.0
    mid = ~inside & (np.abs(d - r) < rho) & (d > 0) & (r > 0)
    c = (d[mid] ** 2 + r[mid] ** 2 - rho**2) / (2 * d[mid] * r[mid])
    out[mid] = np.arccos(np.clip(c, -1.0, 1.0)) / math.pi
    return out


def _ball_smooth(d: np.ndarray, rho: float, eps: float, nodes: int = RADIAL_NODES) -> np.ndarray:
    """(chi_{B_rho} * psi_eps)(p) for |p| = d.

    The circle fraction has a square-root kink at r = |rho - d|; the radial
    integral is split there and the outer piece uses r = r0 + u^2.
    """
    out = np.empty(d.shape)
    full = d + eps / 2 <= rho
    none = d - eps / 2 >= rho
    out[full] = 1.0
    out[none] = 0.0
    band = ~(full | none)
    if not band.any():
        return out
    x, w = np.polynomial.legendre.leggauss(nodes)
    x, w = (x + 1) / 2, w / 2
    norm = psi_l1()
    vals = []
    for dd in d[band]:
        a = min(abs(rho - dd), eps / 2)
        # [0, a]: plain nodes
        r1 = a * x
        f1 = psi(r1 / eps) * 2 * math.pi * r1 * _disc_fraction(dd, r1, rho) * a
        # [a, eps/2]: r = a + u^2
        umax = math.sqrt(eps / 2 - a)
        u = umax * x
        r2 = a + u * u
        f2 = psi(r2 / eps) * 2 * math.pi * r2 * _disc_fraction(dd, r2, rho) * 2 * u * umax
        vals.append((np.dot(w, f1) + np.dot(w, f2)) / (norm * eps * eps))
    out[band] = np.clip(vals, 0.0, 1.0)
    return out


# ---------------------------------------------------------------------------
# window factor


def _circle_fraction(member, z: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Fraction of each circle |x - z_i| = r_i in the set {member(x)}.

    Sampled at ANGLE_SAMPLES angles; each sign change is refined by bisection.
    """
    K = len(z)
    th = 2 * math.pi * np.arange(ANGLE_SAMPLES) / ANGLE_SAMPLES
    pts = z[:, None] + r[:, None] * np.exp(1j * th)[None, :]
    inside = member(pts.ravel()).reshape(K, ANGLE_SAMPLES)
    frac = inside.mean(axis=1).astype(float)
    nxt = np.roll(inside, -1, axis=1)
    ki, ji = np.nonzero(inside != nxt)
    if len(ki) == 0:
        return frac
    lo = th[ji].copy()
    hi = lo + 2 * math.pi / ANGLE_SAMPLES
    lo_in = inside[ki, ji]
    for _ in range(BISECT_STEPS):
        mid = (lo + hi) / 2
        m_in = member(z[ki] + r[ki] * np.exp(1j * mid))
        same = m_in == lo_in
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    t = (lo + hi) / 2
    # the sampled cell [th_j, th_j + h) counted as in (or out) in full; correct it
    cell = 2 * math.pi / ANGLE_SAMPLES
    part = (t - th[ji]) / cell  # portion of the cell on the lo side
    corr = np.where(lo_in, part - 1.0, part)  # in->out loses (1-part), out->in gains part
    np.add.at(frac, ki, corr / ANGLE_SAMPLES)
    return np.clip(frac, 0.0, 1.0)


def _window_smooth(W: PentagonWindow, z: np.ndarray, delta: float, plus: bool) -> np.ndarray:
    """(chi_{W+-} * psi_delta)(z)."""
    sd = W.signed_distance(z)
    if plus:
        # W+ = {sd <= delta}
        full = sd + delta / 2 <= delta
        none = sd - delta / 2 > delta
        member = lambda x: W.signed_distance(x) <= delta  # noqa: E731
    else:
        # W- = {sd < -delta}; the inner parallel pentagon
        inner = W.offset(-delta)
        full = sd + delta / 2 < -delta
        none = sd - delta / 2 >= -delta
        member = lambda x: inner.slack(x) > 0  # noqa: E731
    out = np.where(full, 1.0, 0.0)
    band = ~(full | none)
    if band.any():
        s, wt = _radial_rule()
        zb = z[band]
        K = len(zb)
        frac = _circle_fraction(member, np.repeat(zb, len(s)), np.tile(delta * s, K))
        out[band] = np.clip(frac.reshape(K, len(s)) @ wt, 0.0, 1.0)
    return out


# ---------------------------------------------------------------------------


@dataclass
class SmoothedCount:
    n_minus: float
    n_plus: float
    exact: int
    band_points: int

    @property
    def gap(self) -> float:
        return self.n_plus - self.n_minus


def smoothed_count_detail(omega: complex, m: int, R: float, params: SmoothingParams, threads: int | None = None) -> SmoothedCount:
    if R < 2:
        raise ValueError("smoothed_count needs R >= 2")
    if m not in (0, 1, 2, 3, 4):
        raise ValueError(f"m must be 0..4, got {m!r}")
    labels = (1, 2, 3, 4) if m == 0 else (m,)
    eps, delta = params.epsilon, params.delta
    plan = build_scheme().plan
    n_minus = n_plus = 0.0
    exact = band_pts = 0
    for k in labels:
        W = window(k, omega)
        center = -k if m == 0 else 0
        if params.unsmoothed:
            d, s = _lattice.cylinder_points(plan, center, R, W, DEFAULT_ETA, DEFAULT_ETA, threads, radii_only=True)
            n = int(len(d))
            exact += n
            n_minus += n
            n_plus += n
            continue
        from ..scheme import coeffs_to_cyc, cyc_coords

        b = _lattice.cylinder_points(plan, center, R + 1.5 * eps, W.offset(1.5 * delta), 0.0, 0.0, threads)
        phys, inte = cyc_coords(coeffs_to_cyc(b))
        d = np.abs(phys - center)
        exact += int(np.count_nonzero((d <= R) & (W.slack(inte) >= 0)))
        bp = _ball_smooth(d, R + eps, eps)
        bm = _ball_smooth(d, R - eps, eps)
        wp = _window_smooth(W, inte, delta, True)
        wm = _window_smooth(W, inte, delta, False)
        band_pts += int(np.count_nonzero(((bp > 0) & (bp < 1)) | ((wp > 0) & (wp < 1)) | ((bm > 0) & (bm < 1)) | ((wm > 0) & (wm < 1))))
        n_plus += float(np.sum(bp * wp))
        n_minus += float(np.sum(bm * wm))
    return SmoothedCount(n_minus, n_plus, exact, band_pts)


def smoothed_count(omega: complex, m: int, R: float, params: SmoothingParams, threads: int | None = None) -> tuple[float, float]:
    """(N-, N+) for the window W_{m,omega}; m = 0 sums the four pieces of the vertex set."""
    r = smoothed_count_detail(omega, m, R, params, threads)
    return r.n_minus, r.n_plus


def gap_scale(R: float, params: SmoothingParams) -> float:
    """eps R + delta R^2 + 1."""
    return params.epsilon * R + params.delta * R * R + 1.0
