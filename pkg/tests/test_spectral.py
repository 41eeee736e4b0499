from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from scipy import integrate, special

from penrose_gauss.cyclotomic import CycInt, embed
from penrose_gauss.discrepancy import DEFAULT_OMEGA, count_ball
from penrose_gauss.scheme import build_scheme, pentagon_area, window
from penrose_gauss.spectral import (
    DiagnosticError,
    QuadratureError,
    SmoothingParams,
    ball_ft,
    bessel_j0,
    bessel_j1,
    bump_ft,
    dual_enumerate,
    dual_enumerate_arrays,
    gap_constant,
    lemma_bound_check,
    norm_quantization_check,
    on_real_lines,
    polygon_ft,
    psf_check,
    psi,
    psi_l1,
    smoothed_count,
)
from penrose_gauss.spectral.dual import naive_dual_enumerate
from penrose_gauss.spectral.smoothing import _ball_smooth, _window_smooth, gap_scale, smoothed_count_detail
from penrose_gauss.spectral.transforms import DEGENERATE_REL, _converged_radial, polygon_envelope

from oracles import ball_quadrature, j1_integral, polygon_quadrature


# ---------------------------------------------------------------------------
# Bessel


@pytest.mark.parametrize("t", [0.1, 1.0, 10.0, 100.0])
def test_j1_against_integral(t):
    assert abs(bessel_j1(t) - j1_integral(t)) < 1e-8


def test_j1_at_zero():
    assert bessel_j1(0.0) == 0.0
    assert bessel_j0(0.0) == 1.0


def test_bessel_regimes_against_reference():
    # reference values from scipy across all three evaluation regimes
    t = np.concatenate([np.linspace(0, 40, 4001), np.geomspace(40, 1e5, 500)])
    assert np.max(np.abs(bessel_j1(t) - special.j1(t))) < 1e-12
    assert np.max(np.abs(bessel_j0(t) - special.j0(t))) < 1e-12


# ---------------------------------------------------------------------------
# ball and polygon transforms


def test_ball_ft_origin_and_example():
    assert ball_ft(3.0, 0j) == pytest.approx(math.pi * 9, rel=1e-15)
    y = 0.3 + 0.4j
    assert abs(ball_ft(1.0, y) - ball_quadrature(1.0, y)) < 1e-6


def test_ball_ft_random_frequencies():
    rng = np.random.default_rng(11)
    for _ in range(20):
        R = rng.uniform(0.3, 2.0)
        y = complex(*rng.uniform(-3, 3, 2))
        assert abs(ball_ft(R, y) - ball_quadrature(R, y)) < 1e-6


def test_ball_ft_bound():
    # |ball_ft| <= c min(R^2, R^(1/2) |y|^(-3/2)); c measured over this grid and frozen
    worst = 0.0
    y = np.geomspace(1e-3, 1e3, 600)
    for R in (0.5, 1.0, 10.0, 100.0):
        v = np.abs(ball_ft(R, y.astype(complex)))
        worst = max(worst, float(np.max(v / np.minimum(R * R, math.sqrt(R) / y**1.5))))
    assert worst <= 3.15  # pi R^2 at the origin dominates: c is about pi
    assert worst > 1.0


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_polygon_ft_random_frequencies(m):
    W = window(m, 0.0137 + 0.00291j)
    rng = np.random.default_rng(m)
    ys = rng.uniform(-2, 2, 20) + 1j * rng.uniform(-2, 2, 20)
    got = polygon_ft(W, ys)
    for y, g in zip(ys, got):
        assert abs(g - polygon_quadrature(W.vertices, y)) < 1e-6


def test_polygon_ft_origin_is_area():
    W = window(1, 0)
    assert abs(polygon_ft(W, 0j) - pentagon_area()) < 1e-10
    assert abs(polygon_ft(W, 0j) - 2.37764) < 1e-5
    for m in (2, 3, 4):
        assert abs(polygon_ft(window(m, 0.2j), 0j) - window(m).area()) < 1e-10


def test_polygon_ft_conjugate_symmetry():
    W = window(2, 0.1 - 0.05j)
    rng = np.random.default_rng(3)
    ys = rng.standard_normal(50) * 5 + 1j * rng.standard_normal(50) * 5
    assert np.allclose(polygon_ft(W, -ys), np.conj(polygon_ft(W, ys)), atol=1e-13)


def test_polygon_ft_degenerate_direction():
    W = window(3, 0.05 + 0.01j)
    v = W.vertices
    sigma = (v[1] - v[0]) / abs(v[1] - v[0])
    normal = 1j * sigma
    for t in (0.7, 2.3):
        exact = normal * t
        below = exact + sigma * t * 0.5 * DEGENERATE_REL  # takes the limiting branch
        above = exact + sigma * t * 1e3 * DEGENERATE_REL  # general branch, near threshold
        ref = polygon_quadrature(v, exact)
        for y in (exact, below, above):
            assert abs(polygon_ft(W, y) - ref) < 1e-6
        assert abs(polygon_ft(W, below) - polygon_ft(W, above)) < 1e-6


def test_polygon_envelope_bound():
    W = window(1, 0)
    rng = np.random.default_rng(7)
    r = np.geomspace(0.1, 200, 400)
    th = rng.uniform(0, 2 * math.pi, 400)
    ys = r * np.exp(1j * th)
    # edge-normal directions are where the bound is tight
    normals = [n for n, _ in W.half_planes]
    ys = np.concatenate([ys] + [n * r for n in normals])
    ratio = np.abs(polygon_ft(W, ys)) / polygon_envelope(W, ys)
    assert np.max(ratio) <= 1.0  # frozen constant measured on this grid
    assert np.max(ratio) > 0.05


# ---------------------------------------------------------------------------
# bump


def test_bump_normalisation():
    assert bump_ft(0.1, 0j) == pytest.approx(1.0, abs=1e-12)
    r, w = np.polynomial.legendre.leggauss(400)
    r, w = 0.25 * (r + 1), 0.25 * w
    assert psi_l1() == pytest.approx(2 * math.pi * np.sum(w * psi(r) * r), rel=1e-12)
    assert psi_l1() == pytest.approx(0.1166280982945832, rel=1e-12)


def test_bump_decay():
    eps = 0.05
    y = np.geomspace(1e-2, 2e3, 300).astype(complex)
    v = np.abs(bump_ft(eps, y)) * (1 + np.abs(eps * y) ** 2) ** 3
    assert np.all(np.isfinite(v))
    # frozen; the weighted profile peaks near |eps y| ~ 20-40 at about 1.8e3
    assert np.max(v) <= 2000.0
    # and has turned over by the end of the grid (decay beats any power)
    assert v[-1] < np.max(v) / 5


def test_bump_radial_symmetry():
    for r in (0.5, 3.0, 17.0):
        a = bump_ft(0.2, r + 0j)
        b = bump_ft(0.2, r * np.exp(1.1j))
        assert abs(a - b) < 1e-10


def test_bump_against_2d_quadrature():
    eps, y = 0.25, 3.0 + 1.0j
    f = lambda r, t: psi(np.array([r / eps]))[0] * math.cos(2 * math.pi * r * (y.real * math.cos(t) + y.imag * math.sin(t))) * r  # noqa: E731
    val, _ = integrate.dblquad(f, 0, 2 * math.pi, 0, eps / 2, epsabs=1e-13)
    assert bump_ft(eps, y) == pytest.approx(val / (psi_l1() * eps * eps), abs=1e-8)


def test_bump_rejects_bad_eps():
    with pytest.raises(ValueError):
        bump_ft(0.0, 1j)


def test_radial_quadrature_nonconvergence():
    with pytest.raises(QuadratureError):
        _converged_radial(np.array([1e6]), tol=1e-16, nmax=64)


# ---------------------------------------------------------------------------
# dual lattice


@pytest.mark.parametrize("T", [(2, 2), (1, 3), (3, 1)])
def test_dual_enumeration_oracle(T):
    got = {p.source for p in dual_enumerate(*T)}
    assert got == naive_dual_enumerate(*T)
    assert len(got) > 0


def test_dual_symmetric_and_nonzero():
    d = dual_enumerate_arrays(4, 4)
    src = {tuple(map(int, s)) for s in d.source}
    assert (0, 0, 0, 0) not in src
    assert {tuple(-v for v in s) for s in src} == src
    assert np.all(np.abs(d.theta) <= 4) and np.all(np.abs(d.theta_star) <= 4)


def test_dual_points_scaled_into_lattice():
    S = build_scheme()
    for p in dual_enumerate(1.5, 1.5)[:50]:
        x = p.lattice_element()
        e = embed(x)
        assert e.phys == pytest.approx(25 * p.theta, abs=1e-10)
        assert e.int == pytest.approx(25 * p.theta_star, abs=1e-10)
        b = S.basis_inv @ np.array([e.phys.real, e.phys.imag, e.int.real, e.int.imag])
        assert np.max(np.abs(b - np.rint(b))) < 1e-8


def test_norm_quantization():
    rep = norm_quantization_check(dual_enumerate_arrays(5, 5))
    assert rep.max_deviation < 1e-6
    assert rep.exact_ok and rep.exact_checked > 0
    assert rep.min_scaled_norm == pytest.approx(16, abs=1e-6)
    # a list of DualPoint works too
    small = norm_quantization_check(dual_enumerate(1, 1))
    assert small.exact_ok
    with pytest.raises(ValueError):
        norm_quantization_check([])


def test_gap_constant():
    for R in (5, 10, 20):
        c, n = gap_constant(R)
        assert n >= 2
        assert c >= 0.08


# ---------------------------------------------------------------------------
# Poisson summation


def test_psf_default():
    res = psf_check()
    assert res.error < 1e-4
    assert res.truncation == 64
    assert res.tail_bound <= 1e-4
    # leading (zero frequency) term
    assert build_scheme().density * math.pi * 4 == pytest.approx(0.8991762855732128, rel=1e-14)
    assert set(res.as_dict()) == {"lhs", "rhs", "truncation", "tailBound"}


@pytest.mark.slow
def test_psf_three_doublings():
    errs = [psf_check(T, max_tail=1e-3).error for T in (32, 64, 128, 256)]
    for a, b in zip(errs, errs[1:]):
        assert b <= 1.1 * a
    assert errs[-1] < 1e-8


def test_psf_tail_failure():
    with pytest.raises(DiagnosticError):
        psf_check(8)


# ---------------------------------------------------------------------------
# lemma diagnostics


def test_lemma1_stable_in_T():
    a = lemma_bound_check(1, {"T": 12.5, "Tint": 2})
    b = lemma_bound_check(1, {"T": 25, "Tint": 2})
    assert a.sup_ratio == pytest.approx(1.9753770048255412, rel=1e-9)
    assert b.sup_ratio <= 2 * a.sup_ratio
    assert b.sup_ratio == pytest.approx(a.sup_ratio, rel=1e-9)
    assert b.point_count > a.point_count
    d = b.as_dict()
    assert {"lemma", "ranges", "supRatio", "argmaxPoint", "pointCount"} <= set(d)


def test_lemma2_regression_and_doubling():
    a = lemma_bound_check(2, {"R": 100, "n_range": (2, 2000)})
    b = lemma_bound_check(2, {"R": 100, "n_range": (2, 4000)})
    assert a.sup_ratio == pytest.approx(11666.863304865892, rel=1e-9)
    assert b.sup_ratio <= 2 * a.sup_ratio
    assert a.sup_ratio_off_lines == pytest.approx(947.633290427209, rel=1e-9)


def test_lemma2_vacuous_cell():
    rep = lemma_bound_check(2, {"R": 100, "m_range": (3, 3), "n_range": (10, 10)})
    assert rep.vacuous and rep.sup_ratio is None and rep.point_count == 0
    assert rep.as_dict()["vacuous"] is True


def test_lemma2_rejects_n1():
    with pytest.raises(ValueError):
        lemma_bound_check(2, {"R": 100, "n_range": (1, 10)})


def test_lemma3_regression():
    rep = lemma_bound_check(3, {"m_range": (1, 4), "n_range": (2, 8)})
    assert rep.sup_ratio == pytest.approx(436.35117223103424, rel=1e-9)
    assert rep.sup_ratio_off_lines == pytest.approx(412.4562179415148, rel=1e-9)
    assert rep.nonempty_cells <= rep.cells


def test_lemma_dispatch_rejects_unknown():
    with pytest.raises(ValueError):
        lemma_bound_check(4, {})


# findings: the lattice contains real elements, so the dual set meets the
# five lines R zeta^j in rank-2 families along which |theta||theta*| is fixed.


def test_lattice_contains_real_elements():
    x = CycInt(1, -1) * (CycInt(1) - CycInt.zeta_power(4))
    assert x == CycInt(2) - CycInt.zeta_power(1) - CycInt.zeta_power(4)
    e = embed(x)
    assert abs(e.phys.imag) < 1e-15 and abs(e.int.imag) < 1e-15
    assert e.phys.real == pytest.approx(2 - 2 * math.cos(2 * math.pi / 5), abs=1e-15)


def test_on_line_dual_points():
    d = dual_enumerate_arrays(4, 4)
    lines = on_real_lines(d)
    assert lines.any() and not lines.all()
    th = d.theta[lines]
    # every flagged theta lies on some line R zeta^j (angle a multiple of pi/5)
    ang = np.mod(np.angle(th), math.pi / 5)
    assert np.all(np.minimum(ang, math.pi / 5 - ang) < 1e-9)
    prod = np.abs(d.theta[lines]) * np.abs(d.theta_star[lines])
    assert prod.min() == pytest.approx(0.16, abs=1e-12)
    # the float angle test agrees with the exact one on this range
    ang_all = np.mod(np.angle(d.theta), math.pi / 5)
    assert np.array_equal(np.minimum(ang_all, math.pi / 5 - ang_all) < 1e-9, lines)


def test_lemma1_grows_with_internal_range():
    reps = [lemma_bound_check(1, {"T": 12.5, "Tint": t}) for t in (2, 4, 8)]
    full = [r.sup_ratio for r in reps]
    off = [r.sup_ratio_off_lines for r in reps]
    # on-line families: the ratio scales with the internal range
    assert full[2] > 4 * full[0]
    # off the lines the constant does not move
    assert max(off) == pytest.approx(min(off), rel=1e-12)
    assert off[0] == pytest.approx(0.6717469014453256, rel=1e-9)


def test_lemma2_grows_with_radius():
    a = lemma_bound_check(2, {"R": 100, "n_range": (2, 1000)})
    b = lemma_bound_check(2, {"R": 200, "n_range": (2, 1000)})
    c = lemma_bound_check(2, {"R": 400, "n_range": (2, 1000)})
    assert c.sup_ratio > 3.5 * a.sup_ratio
    assert a.sup_ratio_off_lines == pytest.approx(b.sup_ratio_off_lines, rel=1e-9)
    assert a.sup_ratio_off_lines == pytest.approx(c.sup_ratio_off_lines, rel=1e-9)


# ---------------------------------------------------------------------------
# smoothing


def test_smoothing_params_validation():
    with pytest.raises(ValueError):
        SmoothingParams(-0.1, 0.1)
    with pytest.raises(ValueError):
        SmoothingParams(0.0, 0.1)
    with pytest.raises(ValueError):
        SmoothingParams(0.1, 0.1, N=0)
    with pytest.warns(UserWarning):
        SmoothingParams(0.3, 0.01)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        p = SmoothingParams(0.1, 0.01)
    assert not p.unsmoothed and SmoothingParams(0, 0).unsmoothed


def test_for_radius():
    p = SmoothingParams.for_radius(1e6)
    assert p.epsilon == pytest.approx(math.log(1e6) ** (2 / 3) * 1e-2)
    assert p.delta == pytest.approx(1e-9)
    assert p.N == 3


@pytest.mark.parametrize("R", [10, 50, 100])
def test_sandwich(R):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p = SmoothingParams.for_radius(R)
    for m in (0, 1, 3):
        d = smoothed_count_detail(DEFAULT_OMEGA, m, R, p)
        assert d.n_minus <= d.exact <= d.n_plus
        assert d.exact == count_ball(DEFAULT_OMEGA, m, R).count
        assert d.gap <= 25 * gap_scale(R, p)


def test_unsmoothed_limit():
    for m in (0, 2):
        lo, hi = smoothed_count(DEFAULT_OMEGA, m, 30, SmoothingParams(0, 0))
        n = count_ball(DEFAULT_OMEGA, m, 30).count
        assert lo == hi == n


def test_smoothed_count_rejects_small_radius():
    with pytest.raises(ValueError):
        smoothed_count(DEFAULT_OMEGA, 0, 1.5, SmoothingParams(0.1, 0.01))


def _brute_convolution(member, z, scale, nr=400, nt=2000):
    """Polar grid approximation of (chi_member * psi_scale)(z)."""
    r, w = np.polynomial.legendre.leggauss(nr)
    r, w = scale / 4 * (r + 1), scale / 4 * w
    t = 2 * math.pi * (np.arange(nt) + 0.5) / nt
    x = z + r[:, None] * np.exp(1j * t)[None, :]
    frac = member(x.ravel()).reshape(nr, nt).mean(axis=1)
    wt = w * psi(r / scale) * 2 * math.pi * r
    return float(np.dot(wt, frac) / np.sum(wt))


def test_ball_smoothing_against_brute():
    rho, eps = 5.0, 0.2
    d = np.array([4.85, 4.95, 5.0, 5.03, 5.09])
    got = _ball_smooth(d, rho, eps)
    for di, g in zip(d, got):
        ref = _brute_convolution(lambda x: np.abs(x) <= rho, complex(di), eps)
        assert abs(g - ref) < 2e-3
    assert _ball_smooth(np.array([4.0]), rho, eps)[0] == 1.0
    assert _ball_smooth(np.array([6.0]), rho, eps)[0] == 0.0


@pytest.mark.parametrize("plus", [True, False])
def test_window_smoothing_against_brute(plus):
    W = window(2, 0.03 + 0.01j)
    delta = 0.08
    v = W.vertices
    # points near an edge and near a vertex
    mid = (v[0] + v[1]) / 2
    inward = [n for n, _ in W.half_planes][0]
    zs = np.array([mid + inward * s for s in (-0.1, -0.05, 0.0, 0.05, 0.1, 0.15)] + [v[2], v[2] * 1.01])
    got = _window_smooth(W, zs, delta, plus)
    if plus:
        member = lambda x: W.signed_distance(x) <= delta  # noqa: E731
    else:
        inner = W.offset(-delta)
        member = lambda x: inner.slack(x) > 0  # noqa: E731
    for z, g in zip(zs, got):
        assert abs(g - _brute_convolution(member, z, delta)) < 2e-3
