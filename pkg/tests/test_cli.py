# tests\test_cli.py

import json

import numpy as np
import pandas as pd
import pytest

from src.deadcore_app.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main
from src.deadcore_app.core.utils import FieldFactory
from src.deadcore_app.persistence import FileManager, RunCatalog


def _config(tmp_path, text: str):
    path = tmp_path / "exp.cfg"
    path.write_text(text, encoding="utf-8")
    return str(path)


def _report(tmp_path, run_name: str) -> dict:
    return json.loads((tmp_path / f"{run_name}_report.json").read_text(encoding="utf-8"))


def test_missing_output_directory_is_usage_error(tmp_path):
    assert main(["liouville", "--out", str(tmp_path / "nao_existe")]) == EXIT_USAGE


def test_unreadable_config_is_usage_error(tmp_path):
    cfg = _config(tmp_path, "[system]\nchave = 1\n")
    assert main(["liouville", "--config", cfg, "--out", str(tmp_path)]) == EXIT_USAGE


def test_verify_exact_default_suite(tmp_path):
    assert main(["verify-exact", "--out", str(tmp_path), "--seed", "3"]) == EXIT_OK
    table = pd.read_csv(tmp_path / "verify_exact_residuals.csv")
    assert len(table) == 20
    assert table["passed"].all()
    report = _report(tmp_path, "verify_exact")
    assert report["failing_cases"] == "none"
    assert report["seed"] == 3


def test_verify_exact_literal_coordinate_fails_numerically(tmp_path):
    cfg = _config(tmp_path, "[run]\nname = literal\n[suite]\ncases = 3\n[exact]\ncoordinate_variant = literal\n")
    assert main(["verify-exact", "--config", cfg, "--out", str(tmp_path)]) == EXIT_NUMERICAL
    assert "coordinate_literal" in _report(tmp_path, "literal")["failing_cases"]

    failed = RunCatalog(tmp_path).get_runs_by_status("falhou")
    assert [row[1] for row in failed] == ["literal"]


def test_inadmissible_coupling_is_usage_error(tmp_path):
    cfg = _config(tmp_path, "[system]\nlambda1 = 1.0\nlambda2 = 1.0\n")
    assert main(["verify-exact", "--config", cfg, "--out", str(tmp_path)]) == EXIT_USAGE


def test_liouville_reports_threshold(tmp_path):
    assert main(["liouville", "--out", str(tmp_path)]) == EXIT_OK
    assert main(["liouville", "--out", str(tmp_path)]) == EXIT_OK
    first, second = _report(tmp_path, "liouville"), _report(tmp_path, "liouville1")
    assert first["m"] == pytest.approx(second["m"])
    assert first["kappa"] == pytest.approx(8.0 / 3.0)


def test_liouville_rejects_singular_range(tmp_path):
    cfg = _config(tmp_path, "[system]\nq = -0.5\n")
    assert main(["liouville", "--config", cfg, "--out", str(tmp_path)]) == EXIT_USAGE


def test_fit_requires_field(tmp_path):
    assert main(["fit", "--out", str(tmp_path)]) == EXIT_USAGE


def test_fit_on_saved_field(tmp_path):
    mag = FieldFactory.sample(FieldFactory.disk(257), lambda X, Y: np.maximum(X, 0.0) ** (8.0 / 3.0))
    field_path = FileManager.save_field(mag, tmp_path / "mag.dclf")
    cfg = _config(tmp_path, f"[run]\nname = ajuste\n[fit]\nfield = {field_path}\n")
    assert main(["fit", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK

    report = _report(tmp_path, "ajuste")
    assert report["fitted_exponent"] == pytest.approx(8.0 / 3.0, abs=1e-6)
    assert report["anchor_x"] == pytest.approx(0.0, abs=1e-12)
    assert (tmp_path / "ajuste_growth.csv").is_file()


def test_radial_command_writes_profile(tmp_path):
    cfg = _config(tmp_path, "[run]\nname = radial\n[radial]\nnodes = 400\n")
    assert main(["solve-radial", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    report = _report(tmp_path, "radial")
    assert report["bracket_lo"] - 0.02 <= report["dead_core_radius"] <= report["bracket_hi"] + 0.02
    profile = pd.read_csv(tmp_path / "radial_profile.csv")
    assert list(profile.columns) == ["r", "u", "v"]


@pytest.mark.parametrize("c_floor, expected", [(1e9, 0.0), (1e-9, 1.0)])
def test_fit_uses_configured_nondegeneracy_floor(tmp_path, c_floor, expected):
    mag = FieldFactory.sample(FieldFactory.disk(257), lambda X, Y: np.maximum(X, 0.0) ** (8.0 / 3.0))
    field_path = FileManager.save_field(mag, tmp_path / "mag.dclf")
    cfg = _config(tmp_path, f"[run]\nname = piso\n[fit]\nfield = {field_path}\n[analysis]\nc_floor = {c_floor}\n")
    assert main(["fit", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    assert _report(tmp_path, "piso")["nondegeneracy_pass"] == expected


def test_fit_on_saved_pair_reports_gradient_growth(tmp_path):
    u = FieldFactory.sample(FieldFactory.disk(257), lambda X, Y: np.maximum(X, 0.0) ** 4)
    u_path = FileManager.save_field(u, tmp_path / "u.dclf")
    v_path = FileManager.save_field(u, tmp_path / "v.dclf")
    cfg = _config(tmp_path, f"[run]\nname = par\n[fit]\nfield = {u_path}\nv_field = {v_path}\n")
    assert main(["fit", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK

    report = _report(tmp_path, "par")
    assert report["expected_grad_u"] == pytest.approx(3.0)
    assert report["expected_grad_v"] == pytest.approx(3.0)
    assert report["grad_u_slope"] == pytest.approx(3.0, abs=0.1)
    assert report["grad_v_slope"] == pytest.approx(report["grad_u_slope"])


def test_liouville_on_saved_field_below_threshold(tmp_path):
    field = FieldFactory.sample(FieldFactory.box(129, 4.0), lambda X, Y: 0.9 * (X ** 2 + Y ** 2) / 4.0)
    field_path = FileManager.save_field(field, tmp_path / "campo.dclf")
    cfg = _config(tmp_path, f"[run]\nname = lv\n[system]\nlambda1 = 0\nlambda2 = 0\n[liouville]\nfield = {field_path}\n")
    assert main(["liouville", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK

    report = _report(tmp_path, "lv")
    assert report["m"] == pytest.approx(0.25)
    assert report["ratio"] == pytest.approx(0.225, rel=1e-10)
    assert report["verdict"] == "above_threshold"
    assert report["origin_vanishes"] is True
    assert report["rescaled_sups"] == pytest.approx([0.225, 0.225], rel=1e-2)


def test_blowup_offset_sequence(tmp_path):
    cfg = _config(tmp_path, "[run]\nname = bu\n[blowup]\nsize = 257\n")
    assert main(["blowup", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    table = pd.read_csv(tmp_path / "bu_blowup.csv")
    assert list(table["tau"]) == pytest.approx([0.2, 0.1, 0.05])
    report = _report(tmp_path, "bu")
    assert report["family"] == "offset"
    assert report["max_error"] == pytest.approx(table["error"].max())
