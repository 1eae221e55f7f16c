# tests\test_analysis.py

from types import SimpleNamespace

import numpy as np
import pytest

from src.deadcore_app.core.analysis import (
    FreeBoundaryAnalyzer,
    HenonChecker,
    blowup_rescale,
    blowup_sequence,
    density_ratio,
    distance_growth_fit,
    extract_free_boundary,
    gradient_magnitude,
    growth_fit,
    growth_table,
    halfspace_profile_error,
    henon_checks,
    liouville_decay_check,
    nondegeneracy_check,
    pair_magnitude,
    porosity_probe,
)
from src.deadcore_app.core.theory import (
    HenonParams,
    SystemParams,
    henon_constant,
    henon_radial_solution,
    liouville_threshold,
    radial_pair,
)
from src.deadcore_app.core.utils import FieldFactory
from src.deadcore_app.core.utils.errors import (
    ArgumentError,
    DomainError,
    FitUnavailableError,
    PreconditionError,
    ResolutionError,
    ShapeError,
)

KAPPA = 8.0 / 3.0
SUBLINEAR = SystemParams(0.0, 0.0, 0.5, 0.5, n=2)


def _half_plane(N=129, power=1.0):
    return FieldFactory.sample(FieldFactory.disk(N), lambda X, Y: np.maximum(X, 0.0) ** power)


def test_pair_magnitude_combinations():
    sol_u, sol_v = radial_pair(SUBLINEAR)
    template = FieldFactory.disk(33)
    u, v = sol_u.sample(template), sol_v.sample(template)
    total = pair_magnitude(u, v, SUBLINEAR)
    largest = pair_magnitude(u, v, SUBLINEAR, "max")
    assert np.allclose(total.values, 2.0 * largest.values)
    with pytest.raises(ArgumentError):
        pair_magnitude(u, v, SUBLINEAR, "mean")
    with pytest.raises(ShapeError):
        pair_magnitude(u, sol_v.sample(FieldFactory.disk(17)), SUBLINEAR)


def test_growth_fit_recovers_homogeneous_exponent():
    # N = 2^8 + 1: raios diádicos caem exatamente em nós da grade
    mag = FieldFactory.sample(FieldFactory.disk(257), lambda X, Y: np.hypot(X, Y) ** KAPPA)
    radii = [0.5, 0.25, 0.125, 0.0625, 0.03125]
    slope, const, r2 = growth_fit(mag, (0.0, 0.0), radii)
    assert slope == pytest.approx(KAPPA, abs=1e-3)
    assert const == pytest.approx(1.0, rel=1e-2)
    assert r2 > 0.999


def test_growth_fit_needs_enough_radii():
    mag = FieldFactory.sample(FieldFactory.disk(33), lambda X, Y: np.hypot(X, Y) ** KAPPA)
    with pytest.raises(FitUnavailableError):
        growth_fit(mag, (0.0, 0.0), [0.5, 0.25])


def test_growth_table_columns():
    mag = FieldFactory.sample(FieldFactory.disk(129), lambda X, Y: np.hypot(X, Y) ** 2)
    table = growth_table(mag, (0.0, 0.0), [0.5, 0.25, 0.125, 0.01])
    assert list(table.columns) == ["r", "S", "log_r", "log_S"]
    # 0.01 < 4h fica de fora
    assert len(table) == 3
    assert table["S"].iloc[0] == pytest.approx(0.25)


def test_nondegeneracy_check_against_floor():
    mag = FieldFactory.sample(FieldFactory.disk(257), lambda X, Y: np.hypot(X, Y) ** KAPPA)
    radii = [0.5, 0.25, 0.125, 0.0625]
    min_ratio, passed = nondegeneracy_check(mag, (0.0, 0.0), radii, SUBLINEAR)
    assert min_ratio == pytest.approx(1.0, rel=1e-9)
    assert passed
    _, passed = nondegeneracy_check(mag, (0.0, 0.0), radii, SUBLINEAR, c_floor=2.0)
    assert not passed
    with pytest.raises(ArgumentError):
        nondegeneracy_check(mag, (0.0, 0.0), radii, SUBLINEAR, c_floor=0.0)


def test_extract_free_boundary_of_half_plane():
    mag = _half_plane(65)
    fb = extract_free_boundary(mag, 1e-12)
    assert fb.shape[0] > 0
    assert np.allclose(fb[:, 0], 0.0)
    with pytest.raises(ArgumentError):
        extract_free_boundary(mag, 0.0)


def test_no_transition_gives_empty_boundary():
    mag = FieldFactory.sample(FieldFactory.disk(33), lambda X, Y: 1.0 + X ** 2)
    assert extract_free_boundary(mag, 1e-12).shape == (0, 2)


def test_porosity_of_straight_line():
    mag = _half_plane(65)
    fb = extract_free_boundary(mag, 1e-12)
    tau = porosity_probe(mag, fb, [0.25])
    assert tau == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(ArgumentError):
        porosity_probe(mag, np.empty((0, 2)), [0.25])
    with pytest.raises(ArgumentError):
        porosity_probe(mag, fb, [])


def test_density_ratio_of_half_plane():
    mag = _half_plane(129)
    ratios = density_ratio(mag, (0.0, 0.0), [0.25, 0.125], 1e-12)
    assert np.all((ratios > 0.4) & (ratios < 0.55))
    with pytest.raises(ResolutionError):
        density_ratio(mag, (0.0, 0.0), [mag.h], 1e-12)


def test_density_ratio_zero_outside_support():
    mag = FieldFactory.disk(65)
    ratios = density_ratio(mag, (0.0, 0.0), [0.25], 1e-12)
    assert np.all(ratios == 0.0)


def test_distance_growth_fit_of_half_plane():
    mag = _half_plane(129, KAPPA)
    fb = extract_free_boundary(mag, 1e-12)
    slope, const, r2 = distance_growth_fit(mag, fb)
    assert slope == pytest.approx(KAPPA, abs=1e-8)
    assert const == pytest.approx(1.0, rel=1e-8)
    with pytest.raises(ArgumentError):
        distance_growth_fit(mag, np.empty((0, 2)))


def test_analyzer_report_on_offset_pair():
    sol_u, sol_v = radial_pair(SUBLINEAR, offset=0.3)
    template = FieldFactory.disk(257)
    mag = pair_magnitude(sol_u.sample(template), sol_v.sample(template), SUBLINEAR)
    report = FreeBoundaryAnalyzer(SUBLINEAR, 1e-12).build_report(mag)

    assert report.expected_exponent == pytest.approx(KAPPA)
    assert abs(report.fitted_exponent - KAPPA) < 0.25
    assert report.fit_window == (0.03125, 0.25)
    assert 0.0 < report.density_min_ratio <= 1.0
    assert 0.0 < report.porosity_radius_fraction <= 0.5 + 1e-12
    anchor = np.array([report.extras["anchor_x"], report.extras["anchor_y"]])
    assert np.hypot(*anchor) == pytest.approx(0.3, abs=2 * template.h)

    doc = report.to_dict()
    assert doc["fb_point_count"] == len(report.fb_points)
    assert doc["expected_exponent"] == pytest.approx(KAPPA)


def test_analyzer_requires_free_boundary():
    mag = FieldFactory.sample(FieldFactory.disk(65), lambda X, Y: 1.0 + X ** 2)
    with pytest.raises(FitUnavailableError):
        FreeBoundaryAnalyzer(SUBLINEAR, 1e-12).build_report(mag)


def test_analyzer_uses_configured_nondegeneracy_floor():
    mag = _half_plane(257, KAPPA)
    radii = [0.5, 0.25, 0.125, 0.0625, 0.03125]
    strict = FreeBoundaryAnalyzer(SUBLINEAR, 1e-12, c_floor=1e9).build_report(mag, radii=radii)
    loose = FreeBoundaryAnalyzer(SUBLINEAR, 1e-12, c_floor=1e-9).build_report(mag, radii=radii)
    assert strict.extras["nondegeneracy_pass"] == 0.0
    assert loose.extras["nondegeneracy_pass"] == 1.0


def test_gradient_magnitude_of_linear_field():
    u = FieldFactory.sample(FieldFactory.disk(17), lambda X, Y: 3 * X - 4 * Y)
    grad = gradient_magnitude(u)
    assert grad.same_grid(u)
    assert np.allclose(grad.values[1:-1, 1:-1], 5.0)


def test_gradient_growth_near_free_boundary():
    # α = β = 4 para o par sublinear: |∇u| ~ dist³
    u = _half_plane(257, 4.0)
    fb = extract_free_boundary(u, 1e-12)
    report = FreeBoundaryAnalyzer(SUBLINEAR, 1e-12).gradient_growth(u, u, fb)
    assert report["expected_grad_u"] == pytest.approx(3.0)
    assert report["expected_grad_v"] == pytest.approx(3.0)
    assert report["grad_u_slope"] == pytest.approx(3.0, abs=0.1)
    assert report["grad_v_slope"] == pytest.approx(report["grad_u_slope"])
    assert report["grad_u_r2"] > 0.99


def test_liouville_check_at_threshold():
    params = SystemParams(0.0, 0.0, 0.0, 0.0, n=2)
    m = liouville_threshold(params)
    mag = FieldFactory.sample(FieldFactory.box(129, 4.0), lambda X, Y: (X ** 2 + Y ** 2) / 4.0)
    verdict = liouville_decay_check(mag, params, m)
    assert verdict.ratio == pytest.approx(0.25, rel=1e-10)
    assert verdict.verdict == "above_threshold"
    assert len(verdict.annuli) == 2
    assert verdict.rescaled_sups == pytest.approx([0.25, 0.25], rel=1e-2)


def test_liouville_check_on_zero_field():
    params = SystemParams(0.0, 0.0, 0.0, 0.0, n=2)
    verdict = liouville_decay_check(FieldFactory.box(129, 4.0), params, liouville_threshold(params))
    assert verdict.verdict == "vanishes"
    assert verdict.ratio == 0.0
    assert verdict.origin_vanishes
    assert verdict.rescaled_sups == [0.0, 0.0]


def test_liouville_check_on_scaled_exact_solution():
    params = SystemParams(0.0, 0.0, 0.0, 0.0, n=2)
    m = liouville_threshold(params)
    mag = FieldFactory.sample(FieldFactory.box(129, 4.0), lambda X, Y: 0.9 * (X ** 2 + Y ** 2) / 4.0)
    verdict = liouville_decay_check(mag, params, m)
    assert verdict.ratio == pytest.approx(0.9 * m, rel=1e-10)
    assert verdict.ratio < m
    # Abaixo do limiar, mas o campo não se anula: o veredito não é "vanishes"
    assert verdict.origin_vanishes
    assert verdict.inner_sup > 0.0
    assert verdict.verdict == "above_threshold"
    assert verdict.rescaled_sups == pytest.approx([0.9 * m, 0.9 * m], rel=1e-2)


def test_liouville_check_requires_vanishing_at_origin():
    params = SystemParams(0.0, 0.0, 0.0, 0.0, n=2)
    m = liouville_threshold(params)
    mag = FieldFactory.sample(FieldFactory.box(129, 4.0), lambda X, Y: 0.01 * np.exp(-(X ** 2 + Y ** 2)))
    verdict = liouville_decay_check(mag, params, m)
    assert verdict.ratio < m
    assert verdict.origin_value == pytest.approx(0.01, rel=1e-12)
    assert not verdict.origin_vanishes
    assert verdict.verdict == "above_threshold"
    doc = verdict.to_dict()
    assert doc["origin_vanishes"] is False
    assert doc["rescaled_sup_max"] == pytest.approx(max(verdict.rescaled_sups))


def test_liouville_check_preconditions():
    params = SystemParams(0.0, 0.0, 0.0, 0.0, n=2)
    with pytest.raises(PreconditionError):
        liouville_decay_check(FieldFactory.box(65, 2.0), params, 0.25)
    with pytest.raises(ResolutionError):
        liouville_decay_check(FieldFactory.box(129, 4.0), params, 0.25, n_annuli=10)


def test_blowup_at_unit_scale_is_identity():
    u = FieldFactory.sample(FieldFactory.disk(65), lambda X, Y: (X ** 2 + Y ** 2) ** 2)
    u_t, v_t = blowup_rescale(u, u, (0.0, 0.0), 1.0, SUBLINEAR)
    assert np.allclose(u_t.values, u.values, rtol=1e-12, atol=1e-14)
    assert np.allclose(v_t.values, u.values, rtol=1e-12, atol=1e-14)


def test_blowup_of_homogeneous_profile_is_invariant():
    # α = 4 para o par sublinear: |x|^4 é fixo pela reescala
    u = FieldFactory.sample(FieldFactory.disk(129), lambda X, Y: (X ** 2 + Y ** 2) ** 2)
    u_t, _ = blowup_rescale(u, None, (0.0, 0.0), 0.5, SUBLINEAR)
    X, Y = u_t.coordinates()
    err = np.abs(u_t.values - (X ** 2 + Y ** 2) ** 2)[u_t.domain_mask]
    assert np.max(err) < 1e-2


def test_blowup_composition_matches_single_rescale():
    u = FieldFactory.sample(FieldFactory.disk(129), lambda X, Y: np.sin(2 * X) + Y ** 2 + 1.0)
    z0 = (0.1, -0.05)
    direct, _ = blowup_rescale(u, None, z0, 0.25, SUBLINEAR)
    first, _ = blowup_rescale(u, None, z0, 0.5, SUBLINEAR)
    twice, _ = blowup_rescale(first, None, (0.0, 0.0), 0.5, SUBLINEAR)
    mask = direct.domain_mask
    scale = np.max(np.abs(direct.values[mask]))
    assert np.max(np.abs(twice.values - direct.values)[mask]) <= 1e-3 * scale


def test_blowup_exponent_override():
    u = FieldFactory.sample(FieldFactory.disk(129), lambda X, Y: X ** 2 + Y ** 2)
    u_t, _ = blowup_rescale(u, None, (0.0, 0.0), 0.5, SUBLINEAR, exponent=2.0)
    X, Y = u_t.coordinates()
    assert np.max(np.abs(u_t.values - (X ** 2 + Y ** 2))[u_t.domain_mask]) < 2e-3


def test_blowup_argument_and_domain_errors():
    u = FieldFactory.sample(FieldFactory.disk(33), lambda X, Y: X ** 2)
    with pytest.raises(ArgumentError):
        blowup_rescale(u, None, (0.0, 0.0), 0.0, SUBLINEAR)
    with pytest.raises(ArgumentError):
        blowup_rescale(u, None, (0.0, 0.0), 1.5, SUBLINEAR)
    with pytest.raises(DomainError):
        blowup_rescale(u, None, (0.5, 0.0), 0.75, SUBLINEAR)
    with pytest.raises(ArgumentError):
        blowup_rescale(u, u, (0.0, 0.0), 0.5, HenonParams(1.0, 0.5, 1.0))


def test_halfspace_profile_error_and_sequence():
    u = _half_plane(129, 4.0)
    assert halfspace_profile_error(u, 1.0, 4.0, (2.0, 0.0)) == pytest.approx(0.0, abs=1e-14)
    assert halfspace_profile_error(u, 1.0, 4.0, (0.0, 1.0)) > 1e-3

    seq = blowup_sequence(u, (0.0, 0.0), [1.0, 0.5, 0.25], SUBLINEAR, 1.0, 4.0, (1.0, 0.0))
    assert [tau for tau, _ in seq] == [1.0, 0.5, 0.25]
    assert all(err < 1e-2 for _, err in seq)


def _henon_field(params, N=129):
    return henon_radial_solution(params).sample(FieldFactory.disk(N))


def test_henon_checks_on_exact_solution():
    params = HenonParams(1.0, 0.5, 1.0)
    u = _henon_field(params)
    report = HenonChecker(params).run(u)

    assert report.critical_points.shape == (1, 2)
    assert np.allclose(report.critical_points[0], 0.0)
    assert report.nondegeneracy_pass
    assert report.nondegeneracy_min_ratio == pytest.approx(1.0, rel=1e-9)
    assert report.fitted_constant == pytest.approx(henon_constant(params), rel=1e-9)
    assert report.expected_gradient_exponent == pytest.approx(5.0 / 3.0)
    assert abs(report.gradient_slope - 5.0 / 3.0) < 0.05
    assert report.to_dict()["critical_point_count"] == 1


def test_henon_checks_critical_case_uses_strong_maximum():
    params = HenonParams(0.0, 1.0, 1.0, critical=True)
    u = FieldFactory.sample(FieldFactory.disk(33), lambda X, Y: 1.0 + X ** 2 + Y ** 2)
    report = HenonChecker(params).run(u)
    assert report.strong_max_pass
    assert report.strong_max_min == pytest.approx(1.0, abs=0.01)
    assert report.fitted_constant is None


def test_henon_checks_require_converged_solution():
    params = HenonParams(1.0, 0.5, 1.0)
    with pytest.raises(PreconditionError):
        henon_checks(_henon_field(params, 33), params, SimpleNamespace(converged=False))


def test_henon_checks_without_dead_set_leave_note():
    params = HenonParams(1.0, 0.5, 1.0)
    u = FieldFactory.sample(FieldFactory.disk(33), lambda X, Y: 1.0 + X ** 2)
    report = HenonChecker(params).run(u)
    assert report.nondegeneracy_pass is None
    assert "sem pontos críticos" in report.notes
