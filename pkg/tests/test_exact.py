# tests\test_exact.py

import numpy as np
import pytest

from src.deadcore_app.core.theory import (
    BarrierKind,
    HenonParams,
    OperatorKind,
    SystemParams,
    barrier_offset,
    coordinate_residual,
    coordinate_solution,
    dead_core_bracket,
    exact_growth_ratio,
    henon_constant,
    henon_radial_solution,
    henon_residual,
    liouville_threshold,
    radial_pair,
    relative_residual_radial,
    residual_radial,
    system_constants,
)
from src.deadcore_app.core.utils import FieldFactory
from src.deadcore_app.core.utils.errors import (
    AdmissibilityWarning,
    ArgumentError,
    DeadCoreEvaluationError,
    UnsupportedRangeError,
)


def _zero_weight(p, mu, n=1):
    with pytest.warns(AdmissibilityWarning):
        return HenonParams(p, mu, 0.0, n=n)


def test_constants_one_dimensional_sublinear_pair():
    A, B = system_constants(SystemParams(0.0, 0.0, 0.5, 0.5, n=1))
    assert A == pytest.approx(1.0 / 144.0, rel=1e-12)
    assert B == pytest.approx(1.0 / 144.0, rel=1e-12)


def test_constants_plane_poisson():
    A, B = system_constants(SystemParams(0.0, 0.0, 0.0, 0.0, n=2))
    assert A == pytest.approx(0.25)
    assert B == pytest.approx(0.25)


@pytest.mark.parametrize("p,q,l1,l2,n", [(0.0, 0.0, 0.5, 0.5, 1), (0.5, 1.5, 0.3, 0.8, 2), (-0.4, 0.2, 0.6, 0.2, 3),
                                         (1.0, 0.0, 0.9, 0.1, 2)])
def test_radial_pair_solves_system(p, q, l1, l2, n):
    params = SystemParams(p, q, l1, l2, n=n)
    sol_u, sol_v = radial_pair(params)
    for r in (0.1, 0.37, 1.0):
        ru, rv = relative_residual_radial(sol_u, sol_v, params, OperatorKind.TRACE, r)
        assert ru < 1e-10
        assert rv < 1e-10


def test_residual_radial_absolute_cancellation():
    params = SystemParams(0.0, 0.0, 0.5, 0.5, n=1)
    sol_u, sol_v = radial_pair(params)
    for r in np.linspace(0.05, 1.0, 7):
        res1, res2 = residual_radial(sol_u, sol_v, params, OperatorKind.TRACE, r)
        assert abs(res1) < 1e-12
        assert abs(res2) < 1e-12


def test_pucci_barriers_use_extremal_constants():
    params = SystemParams(0.0, 0.0, 0.5, 0.5, ell_lo=0.5, ell_hi=2.0, n=2)
    sup_u, sup_v = radial_pair(params, BarrierKind.SUPER)
    sub_u, sub_v = radial_pair(params, BarrierKind.SUB)
    assert sup_u.coeff < sub_u.coeff
    ru, rv = relative_residual_radial(sup_u, sup_v, params, OperatorKind.PUCCI_PLUS, 0.5)
    assert max(ru, rv) < 1e-10
    ru, rv = relative_residual_radial(sub_u, sub_v, params, OperatorKind.PUCCI_MINUS, 0.5)
    assert max(ru, rv) < 1e-10


def test_offset_pair_inside_dead_core():
    params = SystemParams(0.0, 0.0, 0.5, 0.5)
    sol_u, sol_v = radial_pair(params, offset=0.3)
    assert residual_radial(sol_u, sol_v, params, OperatorKind.TRACE, 0.2) == (0.0, 0.0)
    assert float(sol_u.profile(0.3)) == 0.0


def test_mixed_dead_core_evaluation_is_rejected():
    params = SystemParams(0.0, 0.0, 0.5, 0.5)
    sol_u, _ = radial_pair(params, offset=0.3)
    _, sol_v = radial_pair(params, offset=0.1)
    with pytest.raises(DeadCoreEvaluationError):
        residual_radial(sol_u, sol_v, params, OperatorKind.TRACE, 0.2)


def test_henon_constant_named_values():
    assert henon_constant(_zero_weight(0.0, 0.0)) == pytest.approx(0.5)
    assert henon_constant(_zero_weight(0.0, 0.5)) == pytest.approx(1.0 / 144.0, rel=1e-12)


def test_henon_constant_plane_example():
    params = HenonParams(1.0, 0.5, 1.0)
    c1 = henon_constant(params)
    assert c1 == pytest.approx((1.5 ** 3 / 64.0) ** (1.0 / 1.5), rel=1e-12)
    sol = henon_radial_solution(params)
    for r in (0.05, 0.3, 0.9):
        rel = abs(henon_residual(sol, params, r)) / (r ** params.alpha * float(sol.profile(r)) ** params.mu)
        assert rel < 1e-10


def test_henon_residual_requires_positive_radius():
    params = HenonParams(1.0, 0.5, 1.0)
    with pytest.raises(ArgumentError):
        henon_residual(henon_radial_solution(params), params, 0.0)


def test_coordinate_solution_corrected_matches_named_values():
    assert coordinate_solution(_zero_weight(0.0, 0.0), 1).coeff == pytest.approx(0.5)
    profile = coordinate_solution(_zero_weight(0.0, 0.5), 1)
    assert profile.coeff == pytest.approx(1.0 / 144.0, rel=1e-12)
    assert profile.exponent == pytest.approx(4.0)


@pytest.mark.parametrize("p,mu,alpha", [(0.0, 0.5, 1.0), (1.0, 0.5, 1.0), (2.0, 1.5, 0.5)])
def test_corrected_coordinate_solution_has_small_residual(p, mu, alpha):
    params = HenonParams(p, mu, alpha, n=2)
    profile = coordinate_solution(params, 2)
    for t in (-0.7, 0.2, 0.9):
        assert coordinate_residual(profile, params, t) < 1e-10


def test_literal_coordinate_coefficient_fails_residual():
    params = _zero_weight(0.0, 0.5)
    literal = coordinate_solution(params, 1, "literal")
    assert literal.coeff == pytest.approx(1.0 / 12.0)
    assert coordinate_residual(literal, params, 0.5) > 1e-2


def test_coordinate_solution_rejects_bad_axis_and_variant():
    params = HenonParams(1.0, 0.5, 1.0, n=2)
    with pytest.raises(ArgumentError):
        coordinate_solution(params, 3)
    with pytest.raises(ArgumentError):
        coordinate_solution(params, 1, "guess")


def test_liouville_threshold_values():
    m = liouville_threshold(SystemParams(0.0, 0.0, 0.5, 0.5, n=1))
    assert m == pytest.approx(144.0 ** (-2.0 / 3.0), rel=1e-12)
    assert liouville_threshold(SystemParams(0.0, 0.0, 0.0, 0.0, n=2)) == pytest.approx(0.25)


def test_liouville_threshold_rejects_singular_range():
    with pytest.raises(UnsupportedRangeError):
        liouville_threshold(SystemParams(0.0, -0.5, 0.5, 0.5))


def test_exact_growth_ratio_combinations():
    params = SystemParams(0.0, 0.0, 0.5, 0.5, n=1)
    m = liouville_threshold(params)
    assert exact_growth_ratio(params, "max") == pytest.approx(m)
    assert exact_growth_ratio(params, "sum") == pytest.approx(2 * m)
    with pytest.raises(ArgumentError):
        exact_growth_ratio(params, "mean")


def test_exact_magnitude_matches_growth_ratio_on_grid():
    params = SystemParams(0.0, 0.0, 0.5, 0.5, n=2)
    sol_u, _ = radial_pair(params)
    template = FieldFactory.disk(33)
    u = sol_u.sample(template)
    X, Y = template.coordinates()
    r = np.hypot(X, Y)
    sel = template.domain_mask & (r > 0.1)
    ratio = u.values[sel] ** (2.0 / params.num_alpha) / r[sel] ** (8.0 / 3.0)
    assert np.allclose(ratio, exact_growth_ratio(params, "max"), rtol=1e-10)


def test_barrier_offset_and_bracket():
    params = SystemParams(0.0, 0.0, 0.5, 0.5, n=2)
    m = liouville_threshold(params)
    assert barrier_offset(params, 1.0, m) == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < barrier_offset(params, 1.0, 0.1 * m) < 1.0

    lo, hi = dead_core_bracket(params, 1.0, (1e-3, 1e-3))
    assert lo == pytest.approx(1.0 - 0.256 ** 0.25)
    assert hi == pytest.approx(1.0 - 0.144 ** 0.25)
    assert 0.0 < lo < hi < 1.0
    assert dead_core_bracket(params, 1.0, (1.0, 1.0)) == (0.0, 0.0)
    with pytest.raises(ArgumentError):
        dead_core_bracket(params, 1.0, (-1.0, 1.0))
