"""Integer points of a 4-d lattice inside a disc x (convex region) cylinder.

A lattice point v = B b (b in Z^4) is split into two planar parts,
u = U b ("outer", constrained to a disc) and w = V b ("inner", constrained
to a bounded convex region).  Two coefficients of b are looped over; the
other two are solved from the inner constraint, which leaves an O(1) box
per outer pair.  The total work is proportional to the number of outer
pairs, i.e. to the area of the outer disc.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

# outer pairs handled per vectorised batch
_BATCH = 1 << 18


def default_threads() -> int:
    env = os.environ.get("PENROSE_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


class Region:
    """A bounded convex planar region.

    Subclasses provide a circumscribing disc, a bounding box of the region
    under a linear map and a vectorised signed slack (positive inside).
    """

    center: complex
    radius: float

    def bbox_under(self, G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def slack(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Disc(Region):
    center: complex
    radius: float

    def bbox_under(self, G):
        h = self.radius * np.linalg.norm(G, axis=1)
        return -h, h

    def slack(self, z):
        return self.radius - np.abs(z - self.center)


class Polygon(Region):
    """Convex polygon given by counterclockwise vertices."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=complex)
        self.vertices = v
        self.center = complex(v.mean())
        self.radius = float(np.max(np.abs(v - self.center)))
        edges = np.roll(v, -1) - v
        # inward normal of a ccw edge is i * edge / |edge|
        normals = 1j * edges / np.abs(edges)
        self.normals = normals
        self.offsets = (normals.conj() * v).real

    def bbox_under(self, G):
        pts = np.stack([(self.vertices - self.center).real, (self.vertices - self.center).imag])
        img = G @ pts
        return img.min(axis=1), img.max(axis=1)

    def slack(self, z):
        z = np.asarray(z, dtype=complex)
        s = np.outer(z.real, self.normals.real) + np.outer(z.imag, self.normals.imag) - self.offsets
        return s.min(axis=1)


@dataclass
class CylinderPlan:
    """Precomputed linear algebra for one (basis, outer rows, inner rows) split."""

    basis: np.ndarray
    outer_rows: tuple[int, int]
    inner_rows: tuple[int, int]
    outer_cols: tuple[int, int]
    inner_cols: tuple[int, int]
    G: np.ndarray  # inverse of the inner 2x2 block
    Vo: np.ndarray
    S: np.ndarray  # Schur complement mapping outer coefficients to u
    K: np.ndarray  # U_p G


def make_plan(basis: np.ndarray, outer_rows=(0, 1), inner_rows=(2, 3)) -> CylinderPlan:
    """Pick the column pair whose inner block is best conditioned."""
    B = np.asarray(basis, dtype=float)
    U = B[list(outer_rows)]
    V = B[list(inner_rows)]
    best = None
    for p in itertools.combinations(range(4), 2):
        Vp = V[:, p]
        if abs(np.linalg.det(Vp)) < 1e-12:
            continue
        cond = np.linalg.cond(Vp)
        if best is None or cond < best[0]:
            best = (cond, p)
    if best is None or best[0] > 1e8:
        raise ArithmeticError("no well-conditioned inner coefficient pair")
    p = best[1]
    o = tuple(c for c in range(4) if c not in p)
    G = np.linalg.inv(V[:, p])
    K = U[:, p] @ G
    S = U[:, o] - K @ V[:, o]
    return CylinderPlan(B, tuple(outer_rows), tuple(inner_rows), o, p, G, V[:, o], S, K)


def _outer_pairs(plan: CylinderPlan, center: complex, radius: float, region: Region):
    """Integer outer coefficient pairs whose fibre can meet the cylinder.

    Returns a list of (b_o0 value, lo, hi) row descriptors in increasing order.
    """
    c_in = np.array([region.center.real, region.center.imag])
    w0 = np.array([center.real, center.imag]) - plan.K @ c_in
    rho = radius + np.linalg.norm(plan.K, 2) * region.radius
    rho *= 1 + 1e-9
    rho += 1e-9
    Sinv = np.linalg.inv(plan.S)
    e0 = Sinv @ w0
    Q = plan.S.T @ plan.S
    Qinv = np.linalg.inv(Q)
    half0 = rho * math.sqrt(Qinv[0, 0])
    rows = np.arange(math.ceil(e0[0] - half0), math.floor(e0[0] + half0) + 1)
    d0 = rows - e0[0]
    disc = Q[0, 1] ** 2 * d0**2 - Q[1, 1] * (Q[0, 0] * d0**2 - rho**2)
    disc = np.maximum(disc, 0.0)
    sq = np.sqrt(disc)
    lo = np.ceil(e0[1] + (-Q[0, 1] * d0 - sq) / Q[1, 1] - 1e-9).astype(np.int64)
    hi = np.floor(e0[1] + (-Q[0, 1] * d0 + sq) / Q[1, 1] + 1e-9).astype(np.int64)
    keep = hi >= lo
    return rows[keep].astype(np.int64), lo[keep], hi[keep]


def _expand_rows(rows, lo, hi):
    counts = hi - lo + 1
    b0 = np.repeat(rows, counts)
    starts = np.repeat(lo - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    b1 = np.arange(counts.sum(), dtype=np.int64) + starts
    return b0, b1


def _batches(rows, lo, hi):
    counts = hi - lo + 1
    cum = np.cumsum(counts)
    start = 0
    while start < len(rows):
        base = cum[start - 1] if start else 0
        stop = int(np.searchsorted(cum, base + _BATCH, side="right"))
        stop = max(stop, start + 1)
        yield rows[start:stop], lo[start:stop], hi[start:stop]
        start = stop


def _scan_batch(plan, center, radius, region, tol_out, tol_in, radii_only, rows, lo, hi):
    b_o0, b_o1 = _expand_rows(rows, lo, hi)
    bo = np.stack([b_o0, b_o1]).astype(float)
    c_in = np.array([region.center.real, region.center.imag])
    t = plan.G @ (c_in[:, None] - plan.Vo @ bo)
    blo, bhi = region.bbox_under(plan.G)
    start0 = np.ceil(t[0] + blo[0] - 1e-9).astype(np.int64)
    end0 = np.floor(t[0] + bhi[0] + 1e-9).astype(np.int64)
    start1 = np.ceil(t[1] + blo[1] - 1e-9).astype(np.int64)
    end1 = np.floor(t[1] + bhi[1] + 1e-9).astype(np.int64)
    k0max = int(np.max(end0 - start0, initial=-1)) + 1
    k1max = int(np.max(end1 - start1, initial=-1)) + 1
    B = plan.basis
    o0, o1 = plan.outer_cols
    p0, p1 = plan.inner_cols
    ur, ui = plan.outer_rows
    vr, vi = plan.inner_rows
    # contribution of the outer coefficients to all four coordinates
    base = B[:, [o0, o1]] @ bo
    found = []
    for k0 in range(k0max):
        c0 = start0 + k0
        ok0 = c0 <= end0
        if not ok0.any():
            continue
        for k1 in range(k1max):
            c1 = start1 + k1
            ok = ok0 & (c1 <= end1)
            if not ok.any():
                continue
            idx = np.nonzero(ok)[0]
            x0 = c0[idx].astype(float)
            x1 = c1[idx].astype(float)
            w = (base[vr, idx] + B[vr, p0] * x0 + B[vr, p1] * x1) + 1j * (
                base[vi, idx] + B[vi, p0] * x0 + B[vi, p1] * x1
            )
            s_in = region.slack(w)
            m = s_in >= -tol_in
            if not m.any():
                continue
            idx, x0, x1 = idx[m], x0[m], x1[m]
            u = (base[ur, idx] + B[ur, p0] * x0 + B[ur, p1] * x1) + 1j * (
                base[ui, idx] + B[ui, p0] * x0 + B[ui, p1] * x1
            )
            dist = np.abs(u - center)
            m2 = dist <= radius + tol_out
            if not m2.any():
                continue
            if radii_only:
                found.append((dist[m2], s_in[m][m2]))
                continue
            idx = idx[m2]
            b = np.empty((idx.size, 4), dtype=np.int64)
            b[:, o0] = b_o0[idx]
            b[:, o1] = b_o1[idx]
            b[:, p0] = c0[idx]
            b[:, p1] = c1[idx]
            found.append(b)
    if radii_only:
        if not found:
            return np.empty(0), np.empty(0)
        return np.concatenate([f[0] for f in found]), np.concatenate([f[1] for f in found])
    if not found:
        return np.empty((0, 4), dtype=np.int64)
    return np.concatenate(found)


def cylinder_points(
    plan: CylinderPlan,
    center: complex,
    radius: float,
    region: Region,
    tol_out: float = 0.0,
    tol_in: float = 0.0,
    threads: int | None = None,
    radii_only: bool = False,
):
    """Coefficient vectors b with |U b - center| <= radius + tol_out and
    V b in the region (slack >= -tol_in).

    Output order is deterministic (batches in order of the outer loop) but
    not sorted; callers sort when they need a canonical order.

    With radii_only, returns (|U b - center|, inner slack) arrays instead,
    which is all a pure count needs.
    """
    rows, lo, hi = _outer_pairs(plan, complex(center), radius + tol_out, region)
    if len(rows) == 0:
        if radii_only:
            return np.empty(0), np.empty(0)
        return np.empty((0, 4), dtype=np.int64)
    jobs = list(_batches(rows, lo, hi))
    threads = threads or default_threads()
    args = (plan, complex(center), radius, region, tol_out, tol_in, radii_only)
    if threads == 1 or len(jobs) == 1:
        parts = [_scan_batch(*args, *job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _scan_batch(*args, *job), jobs))
    if radii_only:
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
    return np.concatenate(parts)


def naive_box_points(basis, center, radius, region: Region, outer_rows=(0, 1), inner_rows=(2, 3), tol=0.0):
    """Reference enumeration over the full coefficient box.

    The box comes from |B^{-1}| row sums applied to the coordinate bounds;
    cost is the box volume, so only use this for small radii.
    """
    B = np.asarray(basis, dtype=float)
    Binv = np.linalg.inv(B)
    bound = np.zeros(4)
    center = complex(center)
    coord_center = np.zeros(4)
    coord_half = np.zeros(4)
    coord_center[list(outer_rows)] = [center.real, center.imag]
    coord_half[list(outer_rows)] = radius + tol
    coord_center[list(inner_rows)] = [region.center.real, region.center.imag]
    coord_half[list(inner_rows)] = region.radius + tol
    mid = Binv @ coord_center
    bound = np.abs(Binv) @ coord_half
    ranges = [np.arange(math.floor(mid[i] - bound[i]) - 1, math.ceil(mid[i] + bound[i]) + 2) for i in range(4)]
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, 4)
    coords = grid.astype(float) @ B.T
    u = coords[:, outer_rows[0]] + 1j * coords[:, outer_rows[1]]
    w = coords[:, inner_rows[0]] + 1j * coords[:, inner_rows[1]]
    keep = (np.abs(u - center) <= radius + tol) & (region.slack(w) >= -tol)
    return grid[keep]
