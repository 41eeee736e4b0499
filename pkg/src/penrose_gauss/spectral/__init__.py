"""Fourier toolkit: transforms, the dual lattice, smoothed counts and diagnostics."""

from .bessel import bessel_j0, bessel_j1
from .diagnostics import DiagnosticError, LemmaReport, PsfResult, lemma_bound_check, psf_check
from .dual import DualPoint, dual_enumerate, dual_enumerate_arrays, gap_constant, norm_quantization_check, on_real_lines
from .smoothing import SmoothingParams, smoothed_count
from .transforms import QuadratureError, ball_ft, bump_ft, polygon_ft, psi, psi_l1

__all__ = [
    "bessel_j0",
    "bessel_j1",
    "ball_ft",
    "polygon_ft",
    "bump_ft",
    "psi",
    "psi_l1",
    "QuadratureError",
    "DualPoint",
    "dual_enumerate",
    "dual_enumerate_arrays",
    "norm_quantization_check",
    "gap_constant",
    "on_real_lines",
    "SmoothingParams",
    "smoothed_count",
    "psf_check",
    "lemma_bound_check",
    "PsfResult",
    "LemmaReport",
    "DiagnosticError",
]
