# tests\test_acceptance.py

import json
from pathlib import Path

import numpy as np
import pytest

from src.deadcore_app.cli import EXIT_OK, main
from src.deadcore_app.core.numerics import solve_radial_system
from src.deadcore_app.core.theory import (
    HenonParams,
    SystemParams,
    henon_constant,
    henon_exponents,
    system_exponents,
)
from src.deadcore_app.core.utils.errors import AdmissibilityWarning

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _run(name: str, out: Path) -> dict:
    assert main([_command(name), "--config", str(CONFIGS / f"{name}.cfg"), "--out", str(out)]) == EXIT_OK
    return json.loads((out / f"{name}_report.json").read_text(encoding="utf-8"))


def _command(name: str) -> str:
    return {
        "verify_exact": "verify-exact",
        "henon_radial": "solve-radial",
        "deadcore_2d": "solve-grid",
        "henon_2d": "solve-henon",
        "liouville": "liouville",
        "blowup": "blowup",
    }[name]


# --- Álgebra dos expoentes ---

def test_exponent_algebra_over_random_tuples():
    rng = np.random.default_rng(1000)
    checked = 0
    while checked < 1000:
        p, q = rng.uniform(-0.9, 3.0, size=2)
        l1, l2 = rng.uniform(0.0, 2.0, size=2)
        # D afastado de zero: os expoentes ficam limitados
        if (1 + p) * (1 + q) - l1 * l2 < 0.05:
            continue
        ex = system_exponents(SystemParams(p, q, l1, l2))
        scale = max(1.0, ex.alpha_u * (1 + p), ex.beta_v * (1 + q))
        assert ex.alpha_u * (1 + p) - (2 + p) == pytest.approx(l1 * ex.beta_v, abs=1e-12 * scale)
        assert ex.beta_v * (1 + q) - (2 + q) == pytest.approx(l2 * ex.alpha_u, abs=1e-12 * scale)
        assert ex.grad_u == pytest.approx(ex.alpha_u - 1.0, abs=1e-12)
        checked += 1


@pytest.mark.parametrize("p,lam", [(0.0, 0.5), (1.0, 0.3), (-0.5, 0.2), (2.0, 1.9)])
def test_symmetric_system_degenerates_to_single_equation(p, lam):
    ex = system_exponents(SystemParams(p, p, lam, lam))
    assert ex.alpha_u == pytest.approx((2 + p) / (1 + p - lam), rel=1e-12)
    assert ex.beta_v == pytest.approx(ex.alpha_u, rel=1e-12)


@pytest.mark.parametrize("l1,l2", [(0.5, 0.5), (0.2, 0.9), (0.0, 0.7)])
def test_uniformly_elliptic_pair_exponent(l1, l2):
    ex = system_exponents(SystemParams(0.0, 0.0, l1, l2))
    assert ex.alpha_u == pytest.approx(2 * (1 + l1) / (1 - l1 * l2), rel=1e-12)


@pytest.mark.parametrize("p,mu", [(0.0, 0.5), (1.0, 0.25), (2.0, 2.5)])
def test_henon_exponent_without_weight(p, mu):
    with pytest.warns(AdmissibilityWarning):
        params = HenonParams(p, mu, 0.0)
    beta_h, _ = henon_exponents(params)
    assert beta_h == pytest.approx((2 + p) / (1 + p - mu), rel=1e-12)
    if p == 0.0:
        assert beta_h == pytest.approx(2 / (1 - mu), rel=1e-12)


def test_henon_constant_identity_over_random_tuples():
    rng = np.random.default_rng(100)
    for k in range(100):
        p = rng.uniform(0.0, 2.0)
        mu = rng.uniform(0.0, 0.9 * (1 + p))
        alpha = rng.uniform(0.1, 2.0)
        ell_hi = rng.uniform(1.0, 3.0)
        n = 1 + k % 3
        params = HenonParams(p, mu, alpha, 1.0, ell_hi, n)
        c1 = henon_constant(params)
        beta_h, _ = henon_exponents(params)
        identity = c1 ** (1 + p - mu) * beta_h ** (1 + p) * (n + beta_h - 2) * ell_hi
        assert identity == pytest.approx(1.0, rel=1e-12)


# --- Execuções dos arquivos de configuração ---

@pytest.mark.slow
def test_radial_solver_second_order():
    params = SystemParams(0.0, 0.0, 0.5, 0.5, n=1)
    errors = []
    for N in (500, 2000):
        profile = solve_radial_system(params, 1.0, (1.0 / 144.0, 1.0 / 144.0), N, tol=1e-10, max_iter=200)
        errors.append(np.max(np.abs(profile.u_vals - profile.r_nodes ** 4 / 144.0)))
    assert errors[1] <= 1e-5
    assert np.log(errors[0] / errors[1]) / np.log(4.0) >= 1.8


def test_bundled_verify_exact(tmp_path):
    report = _run("verify_exact", tmp_path)
    assert report["cases"] == 20
    assert report["max_relative_residual"] <= 1e-10


def test_bundled_liouville(tmp_path):
    report = _run("liouville", tmp_path)
    assert report["m"] == pytest.approx(0.25, rel=1e-12)


def test_bundled_henon_radial(tmp_path):
    report = _run("henon_radial", tmp_path)
    assert report["max_error_vs_exact"] <= 1e-4


def test_centered_blowup_reproduces_exact_solution(tmp_path):
    cfg = tmp_path / "centered.cfg"
    cfg.write_text("[run]\nname = centered\n[blowup]\nfamily = centered\ntaus = 0.5, 0.25\n", encoding="utf-8")
    assert main(["blowup", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "centered_report.json").read_text(encoding="utf-8"))
    assert report["max_error"] <= 5 * report["h"]


@pytest.mark.slow
def test_bundled_blowup_is_monotone(tmp_path):
    report = _run("blowup", tmp_path)
    assert report["monotone"]


@pytest.mark.slow
def test_bundled_deadcore_grid(tmp_path):
    report = _run("deadcore_2d", tmp_path)
    kappa = 8.0 / 3.0
    assert report["dead_core_fraction"] >= 0.01
    assert abs(report["fitted_exponent"] - kappa) <= 0.1 * kappa
    assert report["density_min_ratio"] >= 0.05
    assert report["porosity_tau"] >= 0.1


@pytest.mark.slow
def test_bundled_henon_grid(tmp_path):
    report = _run("henon_2d", tmp_path)
    assert report["max_error_vs_exact"] <= 1e-3
    assert report["nondegeneracy_pass"]
    assert abs(report["fitted_constant"] / report["C1"] - 1.0) <= 0.2
    assert abs(report["gradient_slope"] - 5.0 / 3.0) <= 0.15 * 5.0 / 3.0
