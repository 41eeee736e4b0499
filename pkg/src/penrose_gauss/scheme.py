"""Cut-and-project scheme over sigma((1 - zeta) Z[zeta]) and the Penrose windows.

Coordinates in R^4 are (Re phys, Im phys, Re int, Im int).  A lattice point
is stored by its source element lambda in (1 - zeta) Z[zeta] (canonical
CycInt coordinates) together with the two embeddings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _lattice
from .cyclotomic import CycInt, abs2_phys_exact, embed, trace, conj

TAU = (1 + math.sqrt(5)) / 2
DEFAULT_ETA = 1e-9

# window m = 1..4 is s_m * P - m + omega
WINDOW_SCALES = {1: 1.0, 2: -TAU, 3: TAU, 4: -1.0}

# (1 - zeta) zeta^j for j = 0..3, as canonical coordinates (columns)
GENERATORS = (CycInt(1, -1, 0, 0), CycInt(0, 1, -1, 0), CycInt(0, 0, 1, -1), CycInt(1, 1, 1, 2))
GEN_MATRIX = np.array([g.coords for g in GENERATORS], dtype=np.int64).T


class SchemeError(ArithmeticError):
    """Raised when the scheme's own consistency checks fail."""


@dataclass(frozen=True)
class SchemeData:
    basis: np.ndarray
    basis_inv: np.ndarray
    dual_basis: np.ndarray
    density: float
    # dual basis vector j times 25, as an exact element of (1 - zeta) Z[zeta]
    dual_times_25: tuple[CycInt, ...] = field(repr=False)
    plan: _lattice.CylinderPlan = field(repr=False)


def _vec(z: CycInt) -> np.ndarray:
    e = embed(z)
    return np.array([e.phys.real, e.phys.imag, e.int.real, e.int.imag])


def coeffs_to_cyc(b: np.ndarray) -> np.ndarray:
    """Lattice coefficient vectors (N, 4) -> canonical CycInt coordinates (N, 4)."""
    return np.asarray(b, dtype=np.int64) @ GEN_MATRIX.T


@lru_cache(maxsize=1)
def build_scheme() -> SchemeData:
    basis = np.column_stack([_vec(g) for g in GENERATORS])
    basis_inv = np.linalg.inv(basis)
    dual = basis_inv.T
    det = abs(np.linalg.det(basis))
    expected = 25 * math.sqrt(5) / 4
    if abs(det - expected) > 1e-9 * expected:
        raise SchemeError(f"|det basis| = {det!r}, expected {expected!r}")

    # 25 * dual vector must be an integer combination of the generators;
    # confirm exactly via the trace pairing <x, y> = Tr(x conj(y)) / 2
    exact = []
    for j in range(4):
        sol = basis_inv @ (25 * dual[:, j])
        rounded = np.rint(sol)
        if np.max(np.abs(sol - rounded)) > 1e-8:
            raise SchemeError(f"25 * dual column {j} is not a lattice vector: {sol}")
        elem = CycInt()
        for k, c in enumerate(rounded.astype(int)):
            elem = elem + int(c) * GENERATORS[k]
        for i, g in enumerate(GENERATORS):
            if trace(g * conj(elem)) != (50 if i == j else 0):
                raise SchemeError(f"trace pairing fails for generator {i}, dual {j}")
        exact.append(elem)

    plan = _lattice.make_plan(basis, (0, 1), (2, 3))
    return SchemeData(basis, basis_inv, dual, 1.0 / det, tuple(exact), plan)


def pentagon_area() -> float:
    return 2.5 * math.sin(2 * math.pi / 5)


class PentagonWindow(_lattice.Polygon):
    """Closed pentagon s * P - m + omega in internal space.

    Vertices are stored counterclockwise.  A negative real scale factor is a
    half-turn, so the images of e(k/5) keep their counterclockwise order.
    """

    def __init__(self, m: int, omega: complex, scale: float | None = None, vertices=None):
        self.label = m
        self.shift = complex(omega)
        self.scale = WINDOW_SCALES[m] if scale is None else scale
        if vertices is None:
            k = np.arange(5)
            vertices = self.scale * np.exp(2j * np.pi * k / 5) - m + self.shift
        super().__init__(vertices)

    @property
    def half_planes(self) -> list[tuple[complex, float]]:
        """(unit inward normal, offset) pairs; a point z is inside iff n.z >= offset."""
        return [(complex(n), float(o)) for n, o in zip(self.normals, self.offsets)]

    def area(self) -> float:
        v = self.vertices
        return 0.5 * float(np.sum(v.real * np.roll(v.imag, -1) - np.roll(v.real, -1) * v.imag))

    def perimeter(self) -> float:
        return float(np.sum(np.abs(np.roll(self.vertices, -1) - self.vertices)))

    def offset(self, d: float) -> PentagonWindow:
        """Parallel pentagon with every edge moved outward by d (inward if d < 0).

        For a regular pentagon this is a rescaling about the centre; the
        inradius changes by d.
        """
        inradius = abs(self.scale) * math.cos(math.pi / 5)
        if inradius + d <= 0:
            raise ValueError("offset collapses the window")
        f = (inradius + d) / inradius
        c = complex(-self.label + self.shift)
        return PentagonWindow(self.label, self.shift, self.scale * f, c + f * (self.vertices - c))

    def signed_distance(self, z) -> np.ndarray:
        """Exact signed Euclidean distance to the boundary, negative inside."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        s = -self.slack(z)
        inside = s <= 0
        out = s.copy()
        if (~inside).any():
            zo = z[~inside]
            a = self.vertices
            b = np.roll(a, -1)
            ab = b - a
            t = ((zo[:, None] - a).conj() * ab).real / np.abs(ab) ** 2
            t = np.clip(t, 0.0, 1.0)
            d = np.abs(zo[:, None] - (a + t * ab)).min(axis=1)
            out[~inside] = d
        return out

    def __repr__(self) -> str:
        return f"PentagonWindow(m={self.label}, omega={self.shift!r})"


def window(m: int, omega: complex = 0j) -> PentagonWindow:
    if m not in WINDOW_SCALES:
        raise ValueError(f"window label must be 1..4, got {m!r}")
    return PentagonWindow(m, omega)


@dataclass(frozen=True)
class Containment:
    """Result of a membership test with tolerance band eta."""

    state: str  # "inside" | "outside" | "boundary"
    distance: float = 0.0

    @property
    def is_member(self) -> bool:
        # windows are closed, so the tolerance band counts as inside
        return self.state != "outside"


INSIDE = "inside"
OUTSIDE = "outside"
BOUNDARY = "boundary"


def contains(W: PentagonWindow, p: complex, eta: float = DEFAULT_ETA) -> Containment:
    if eta < 0:
        raise ValueError("eta must be non-negative")
    s = float(W.slack(np.array([p]))[0])
    if s > eta:
        return Containment(INSIDE)
    if s < -eta:
        return Containment(OUTSIDE)
    return Containment(BOUNDARY, abs(s))


@dataclass(frozen=True)
class LatticePoint:
    source: CycInt
    phys: complex
    int: complex


@dataclass
class PointArrays:
    """Bulk form of an enumeration: one row per lattice point."""

    cyc: np.ndarray  # (N, 4) int64 canonical coordinates of lambda
    phys: np.ndarray
    int: np.ndarray
    ball_band: np.ndarray  # within eta of the ball boundary
    window_band: np.ndarray  # within eta of the window boundary

    def __len__(self) -> int:
        return len(self.phys)

    @property
    def boundary(self) -> np.ndarray:
        return self.ball_band | self.window_band

    def subset(self, mask) -> PointArrays:
        return PointArrays(
            self.cyc[mask], self.phys[mask], self.int[mask], self.ball_band[mask], self.window_band[mask]
        )

    def to_points(self) -> list[LatticePoint]:
        return [
            LatticePoint(CycInt(*map(int, c)), complex(p), complex(q))
            for c, p, q in zip(self.cyc, self.phys, self.int)
        ]


def _sort_order(cyc: np.ndarray) -> np.ndarray:
    return np.lexsort((cyc[:, 3], cyc[:, 2], cyc[:, 1], cyc[:, 0]))


def enumerate_arrays(
    W: _lattice.Region,
    R: float,
    eta: float = DEFAULT_ETA,
    center: complex = 0j,
    sort: bool = True,
    threads: int | None = None,
) -> PointArrays:
    """All lambda in L with |lambda - center| <= R and lambda* in W (closed, band eta)."""
    if R <= 0:
        raise ValueError("R must be positive")
    S = build_scheme()
    b = _lattice.cylinder_points(S.plan, center, R, W, tol_out=eta, tol_in=eta, threads=threads)
    cyc = coeffs_to_cyc(b)
    if sort and len(cyc):
        cyc = cyc[_sort_order(cyc)]
    coords = cyc_coords(cyc)
    phys = coords[0]
    inte = coords[1]
    ball_band = np.abs(np.abs(phys - center) - R) <= eta
    window_band = np.abs(W.slack(inte)) <= eta
    return PointArrays(cyc, phys, inte, ball_band, window_band)


def cyc_coords(cyc: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    from .cyclotomic import embed_array

    return embed_array(cyc)


def enumerate_points(W: PentagonWindow, R: float, eta: float = DEFAULT_ETA, center: complex = 0j) -> list[LatticePoint]:
    """Lattice points of the cut-and-project set of W inside the closed ball B_R.

    Lexicographic order in the source coordinates.
    """
    return enumerate_arrays(W, R, eta, center).to_points()


def naive_enumerate(W: PentagonWindow, R: float, eta: float = DEFAULT_ETA, center: complex = 0j) -> set[tuple]:
    """Brute-force oracle over the full coefficient box (small R only)."""
    S = build_scheme()
    b = _lattice.naive_box_points(S.basis, center, R, W, tol=eta)
    return {tuple(map(int, row)) for row in coeffs_to_cyc(b)}


# ---------------------------------------------------------------------------
# exact ball membership


def _sign_sqrt5(a: Fraction, b: int) -> int:
    """Sign of a + b*sqrt(5) for rational a and integer b."""
    if a >= 0 and b >= 0:
        return 1 if (a or b) else 0
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 5 b^2
    diff = a * a - 5 * b * b
    if diff == 0:
        return 0
    return (1 if a > 0 else -1) if diff > 0 else (1 if b > 0 else -1)


def exact_in_ball(x: CycInt, R2: Fraction) -> int:
    """Sign of R^2 - |phys(x)|^2 decided exactly (1 inside, 0 on, -1 outside)."""
    p, q = abs2_phys_exact(x)
    # 4|x|^2 = 2p + q + q*sqrt5
    return _sign_sqrt5(4 * Fraction(R2) - 2 * p - q, -q)


def resolve_ball_exactly(pts: PointArrays, R: float, center_int: int = 0, band: float = 1e-6) -> PointArrays:
    """Re-decide ball membership of near-boundary points in exact arithmetic.

    Points are lambda + center_int (center_int a rational integer); R^2 is
    taken as the exact rational value of the float R squared.
    """
    R2 = Fraction(R) ** 2
    keep = np.ones(len(pts), dtype=bool)
    near = np.nonzero(np.abs(np.abs(pts.phys + center_int) - R) <= band)[0]
    for i in near:
        y = CycInt(*map(int, pts.cyc[i])) + center_int
        keep[i] = exact_in_ball(y, R2) >= 0
    out = pts.subset(keep)
    out.ball_band = np.zeros(len(out), dtype=bool)
    return out


# ---------------------------------------------------------------------------
# vertex sets


@dataclass
class VertexArrays:
    """Points of Lambda_omega in B_R with their window labels."""

    cyc: np.ndarray  # canonical coordinates of the vertex y = lambda + m
    phys: np.ndarray
    int: np.ndarray
    label: np.ndarray
    boundary: np.ndarray

    def __len__(self) -> int:
        return len(self.phys)


def vertex_arrays(
    omega: complex, R: float, eta: float = DEFAULT_ETA, exact: bool = False, threads: int | None = None
) -> VertexArrays:
    """Lambda_omega cap B_R, the union over m of (Lambda_{m,omega} + m).

    Each piece is enumerated over the ball of radius R centred at -m, which
    is the same as enumerating in B_{R+4} and filtering after the shift.
    """
    parts = []
    for m in (1, 2, 3, 4):
        pts = enumerate_arrays(window(m, omega), R, eta, center=-m, sort=False, threads=threads)
        if exact:
            pts = resolve_ball_exactly(pts, R, center_int=m)
        cyc = pts.cyc.copy()
        cyc[:, 0] += m
        parts.append((cyc, pts.phys + m, pts.int + m, np.full(len(pts), m, dtype=np.int8), pts.boundary))
    cyc = np.concatenate([p[0] for p in parts])
    order = _sort_order(cyc) if len(cyc) else np.arange(0)
    return VertexArrays(
        cyc[order],
        np.concatenate([p[1] for p in parts])[order],
        np.concatenate([p[2] for p in parts])[order],
        np.concatenate([p[3] for p in parts])[order],
        np.concatenate([p[4] for p in parts])[order],
    )


def vertex_set(omega: complex, R: float, eta: float = DEFAULT_ETA) -> list[tuple[complex, int]]:
    v = vertex_arrays(omega, R, eta)
    return [(complex(p), int(m)) for p, m in zip(v.phys, v.label)]


def min_separation(points: np.ndarray) -> float:
    """Smallest pairwise distance of a planar point set (complex array)."""
    from scipy.spatial import cKDTree

    xy = np.column_stack([points.real, points.imag])
    if len(xy) < 2:
        return math.inf
    d, _ = cKDTree(xy).query(xy, k=2)
    return float(d[:, 1].min())


# ---------------------------------------------------------------------------
# singularity


@dataclass(frozen=True)
class BoundaryHit:
    m: int
    source: CycInt
    phys: complex
    int: complex
    distance: float


def singularity_scan(omega: complex, R: float, eta: float = DEFAULT_ETA) -> list[BoundaryHit]:
    """Lattice points in B_R whose star lies within eta of some window boundary.

    An empty list means the translate is non-singular as far as radius R.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    if eta < 0:
        raise ValueError("eta must be non-negative")
    hits = []
    for m in (1, 2, 3, 4):
        W = window(m, omega)
        pts = enumerate_arrays(W, R, eta)
        s = W.slack(pts.int)
        for i in np.nonzero(np.abs(s) <= eta)[0]:
            hits.append(BoundaryHit(m, CycInt(*map(int, pts.cyc[i])), complex(pts.phys[i]), complex(pts.int[i]), float(abs(s[i]))))
    return hits
