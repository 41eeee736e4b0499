"""CSV, JSON and SVG writers.

Floats are written with 17 significant digits so every value round-trips
exactly; output for a fixed input is byte-identical between runs.
"""

from __future__ import annotations

import io
import json
import math

import numpy as np

from . import __version__

POINT_HEADER = ("a0", "a1", "a2", "a3", "phys_re", "phys_im", "int_re", "int_im", "window_m")
SWEEP_HEADER = ("omega_re", "omega_im", "m", "R", "count", "main_term", "discrepancy", "boundary_hits", "wall_time_s")

# one color per window label, in label order
WINDOW_COLORS = {1: "#d62728", 2: "#1f77b4", 3: "#2ca02c", 4: "#ff7f0e"}


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def to_json(obj, indent: int = 2) -> str:
    """JSON text with 17-digit floats; non-finite floats become null."""
    return _encode(obj, indent, 0) + "\n"


def _encode(obj, indent, level) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return _encode([obj.real, obj.imag], indent, level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def points_csv(vertices) -> str:
    """CSV of a VertexArrays (window_m = label) or PointArrays (window_m column from `label`)."""
    label = getattr(vertices, "label", None)
    rows = []
    for i in range(len(vertices)):
        c = vertices.cyc[i]
        p, q = vertices.phys[i], vertices.int[i]
        m = int(label[i]) if label is not None else 0
        rows.append((*c, p.real, p.imag, q.real, q.imag, m))
    return _csv(POINT_HEADER, rows)


def sweep_csv(records) -> str:
    return _csv(SWEEP_HEADER, [tuple(r.as_dict()[k] for k in SWEEP_HEADER) for r in records])


def unit_edges(points: np.ndarray, tol: float = 1e-6) -> list[tuple[int, int]]:
    """Index pairs at distance 1 (within tol), the rhombus edges of the patch."""
    from scipy.spatial import cKDTree

    xy = np.column_stack([points.real, points.imag])
    pairs = cKDTree(xy).query_pairs(1.0 + tol, output_type="ndarray")
    if len(pairs) == 0:
        return []
    d = np.abs(points[pairs[:, 0]] - points[pairs[:, 1]])
    keep = np.abs(d - 1.0) <= tol
    return sorted(map(tuple, pairs[keep].tolist()))


def points_svg(points: np.ndarray, labels: np.ndarray, edges: bool = True, radius: float | None = None, size: int = 800) -> str:
    """SVG render of a planar point set colored by window label.

    The first line after the XML header is a generator comment carrying the
    package version; everything else depends only on the input.
    """
    points = np.asarray(points, dtype=complex)
    R = radius if radius is not None else (float(np.abs(points).max()) if len(points) else 1.0)
    R = max(R, 1e-9) + 1.0
    s = size / (2 * R)

    def xy(z):
        return fmt(round((z.real + R) * s, 4)), fmt(round((R - z.imag) * s, 4))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- generator: penrose_gauss {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if edges and len(points) > 1:
        out.append('<g stroke="#888888" stroke-width="1">')
        for i, j in unit_edges(points):
            (x1, y1), (x2, y2) = xy(points[i]), xy(points[j])
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        out.append("</g>")
    r = fmt(max(1.5, 0.08 * s))
    for m in sorted(WINDOW_COLORS):
        sel = np.nonzero(np.asarray(labels) == m)[0]
        if not len(sel):
            continue
        out.append(f'<g fill="{WINDOW_COLORS[m]}" class="window-{m}">')
        for i in sel:
            x, y = xy(points[i])
            out.append(f'<circle cx="{x}" cy="{y}" r="{r}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
