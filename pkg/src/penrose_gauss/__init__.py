"""Vertex counting for rhombic Penrose tilings built as cut-and-project sets.

The vertex set of a rhombic Penrose tiling is realised over the lattice
sigma((1 - zeta) Z[zeta]) in R^4, zeta = exp(2 pi i / 5).  This package
enumerates those vertices in large balls, measures the discrepancy against
the area main term and provides the Fourier-analytic diagnostics that go
with the counting problem.
"""

__version__ = "0.1.0"

from .cyclotomic import CycInt, ComplexPair, add, conj, embed, mul, norm
from .scheme import (
    Containment,
    LatticePoint,
    PentagonWindow,
    SchemeData,
    build_scheme,
    contains,
    enumerate_points,
    singularity_scan,
    vertex_set,
    window,
)
from .discrepancy import CountRecord, SweepResult, c_p, count_ball, gauss_baseline, sweep

__all__ = [
    "CycInt",
    "ComplexPair",
    "add",
    "mul",
    "embed",
    "conj",
    "norm",
    "SchemeData",
    "PentagonWindow",
    "LatticePoint",
    "Containment",
    "build_scheme",
    "window",
    "contains",
    "enumerate_points",
    "vertex_set",
    "singularity_scan",
    "CountRecord",
    "SweepResult",
    "c_p",
    "count_ball",
    "sweep",
    "gauss_baseline",
]
