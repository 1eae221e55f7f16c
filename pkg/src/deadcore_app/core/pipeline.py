# src\deadcore_app\core\pipeline.py

import traceback
import numpy as np
import pandas as pd
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from PySide6.QtCore import QObject, QRunnable, QThreadPool, Signal

from .analysis import (
    FreeBoundaryAnalyzer,
    blowup_rescale,
    blowup_sequence,
    extract_free_boundary,
    growth_table,
    henon_checks,
    liouville_decay_check,
    pair_magnitude,
)
from .numerics import (
    DeadCoreGridSolver,
    RadialSolver,
    apriori_bound_check,
    detect_free_boundary,
    fit_growth_radial,
)
from .theory import (
    BarrierKind,
    HenonParams,
    OperatorKind,
    SystemParams,
    coordinate_residual,
    coordinate_solution,
    dead_core_bracket,
    henon_constant,
    henon_exponents,
    henon_radial_solution,
    henon_residual,
    liouville_threshold,
    radial_pair,
    relative_residual_radial,
    system_constants,
    system_exponents,
)
from .utils import FieldFactory, NumericCalculator, TableKind
from .utils.errors import ArgumentError, ResidualCheckError
from ..persistence import ExperimentConfig, FileManager


class _CaseTask(QRunnable):
    """Executa um caso da suíte de resíduos no pool de threads."""

    def __init__(self, fn: Callable[[], Dict], results: List, index: int):
        super().__init__()
        self.fn = fn
        self.results = results
        self.index = index

    def run(self):
        try:
            self.results[self.index] = self.fn()
        except Exception as e:
            self.results[self.index] = e


class ExperimentPipeline(QObject):
    """
    Orquestrador dos comandos: lê a configuração, chama os solvers e as
    análises e grava os artefatos em `out_dir`.
    """

    # (passo_atual, total_passos, descrição)
    progress_update = Signal(int, int, str)
    # (comando, resumo)
    run_complete = Signal(str, dict)
    # (mensagem)
    run_error = Signal(str)

    COMMANDS = ("verify-exact", "solve-radial", "solve-grid", "solve-henon", "fit", "liouville", "blowup")

    def __init__(self, config: ExperimentConfig, out_dir, run_name: str = "run", seed: Optional[int] = None,
                 parallel: bool = False, parent=None):
        super().__init__(parent)
        self.config = config
        self.out_dir = Path(out_dir)
        self.run_name = run_name
        self.seed = config.get("run", "seed") if seed is None else seed
        self.parallel = parallel
        self.artifacts: List[Path] = []

        # Descrição dos passos de cada comando
        self.step_titles = {
            "verify-exact": ["Gerando casos...", "Avaliando resíduos...", "Salvando relatório..."],
            "solve-radial": ["Resolvendo problema radial...", "Analisando perfil...", "Salvando artefatos..."],
            "solve-grid": ["Continuação em ε...", "Analisando fronteira livre...", "Salvando artefatos..."],
            "solve-henon": ["Resolvendo Hénon na grade...", "Verificações de Hénon...", "Salvando artefatos..."],
            "fit": ["Carregando campos...", "Ajustando crescimento...", "Salvando artefatos..."],
            "liouville": ["Calculando limiar...", "Verificando decaimento...", "Salvando relatório..."],
            "blowup": ["Amostrando família exata...", "Reescalando...", "Salvando relatório..."],
        }

    # --- Utilidades ---

    def _path(self, suffix: str) -> Path:
        return self.out_dir / f"{self.run_name}_{suffix}"

    def _emit_step(self, command: str, step: int):
        titles = self.step_titles[command]
        self.progress_update.emit(step, len(titles), titles[step - 1])

    def _save_reports(self, report: Dict):
        self.artifacts.append(FileManager.save_report_text(report, self._path("report.txt")))
        self.artifacts.append(FileManager.save_report_json(report, self._path("report.json")))

    # --- Entrada ---

    def run(self, command: str) -> Dict:
        """Executa `command`; erros são impressos, sinalizados e relançados."""
        handlers = {
            "verify-exact": self.verify_exact,
            "solve-radial": self.solve_radial,
            "solve-grid": self.solve_grid,
            "solve-henon": self.solve_henon,
            "fit": self.fit,
            "liouville": self.liouville,
            "blowup": self.blowup,
        }
        if command not in handlers:
            raise ArgumentError(f"Comando desconhecido: {command}")
        try:
            print(f"Pipeline: comando '{command}' iniciado (execução '{self.run_name}').")
            summary = handlers[command]()
            print(f"Pipeline: comando '{command}' concluído.")
            self.run_complete.emit(command, summary)
            return summary
        except Exception as e:
            print(f"Pipeline: Erro no comando '{command}' - {e}")
            traceback.print_exc()
            self.run_error.emit(f"Erro no pipeline: {e}")
            raise

    # --- verify-exact ---

    def _random_cases(self, count: int) -> List[SystemParams]:
        rng = np.random.default_rng(self.seed)
        dims = [int(d) for d in self.config.get("suite", "dimensions")]
        cases = []
        while len(cases) < count:
            p, q = rng.uniform(-0.5, 2.0, size=2)
            l1, l2 = rng.uniform(0.0, 1.0, size=2)
            if l1 * l2 >= (1 + p) * (1 + q):
                continue
            cases.append(SystemParams(p, q, l1, l2, n=dims[len(cases) % len(dims)]))
        return cases

    def _system_case(self, name: str, params: SystemParams, radii: np.ndarray, tol: float) -> Dict:
        sol_u, sol_v = radial_pair(params, BarrierKind.SUPER)
        res = np.array([relative_residual_radial(sol_u, sol_v, params, OperatorKind.TRACE, r) for r in radii])
        ru, rv = float(res[:, 0].max()), float(res[:, 1].max())
        return {"case": name, "n": params.n, "p": params.p, "q": params.q, "lambda1": params.lambda1,
                "lambda2": params.lambda2, "residual_u": ru, "residual_v": rv, "passed": max(ru, rv) <= tol}

    def _henon_case(self, params: HenonParams, radii: np.ndarray, tol: float) -> Dict:
        sol = henon_radial_solution(params)
        res = max(abs(henon_residual(sol, params, r)) / (r ** params.alpha * float(sol.profile(r)) ** params.mu)
                  for r in radii)
        return {"case": "henon", "n": params.n, "p": params.p, "residual_u": float(res),
                "residual_v": 0.0, "passed": res <= tol}

    def _coordinate_case(self, params: HenonParams, radii: np.ndarray, tol: float) -> Dict:
        variant = self.config.get("exact", "coordinate_variant")
        profile = coordinate_solution(params, 1, variant)
        res = max(coordinate_residual(profile, params, t) for t in radii)
        return {"case": f"coordinate_{variant}", "n": params.n, "p": params.p, "residual_u": float(res),
                "residual_v": 0.0, "passed": res <= tol}

    def verify_exact(self) -> Dict:
        suite = self.config.section("suite")
        tol = suite["rel_tol"]
        radii = np.linspace(suite["r_min"], suite["r_max"], 50)

        self._emit_step("verify-exact", 1)
        tasks: List[Callable[[], Dict]] = []
        if self.config.get("exact", "include_named"):
            system = self.config.system_params()
            henon = self.config.henon_params()
            tasks.append(lambda: self._system_case("configured", system, radii, tol))
            tasks.append(lambda: self._henon_case(henon, radii, tol))
            tasks.append(lambda: self._coordinate_case(henon, radii, tol))
        random_count = max(suite["cases"] - len(tasks), 0)
        for k, params in enumerate(self._random_cases(random_count)):
            tasks.append(lambda k=k, params=params: self._system_case(f"random_{k:02d}", params, radii, tol))

        self._emit_step("verify-exact", 2)
        results: List = [None] * len(tasks)
        if self.parallel:
            pool = QThreadPool.globalInstance()
            for i, fn in enumerate(tasks):
                pool.start(_CaseTask(fn, results, i))
            pool.waitForDone()
        else:
            for i, fn in enumerate(tasks):
                _CaseTask(fn, results, i).run()
        for r in results:
            if isinstance(r, Exception):
                raise r

        self._emit_step("verify-exact", 3)
        table = pd.DataFrame(results)
        self.artifacts.append(FileManager.save_table(table, self._path("residuals.csv"), TableKind.RESIDUALS))
        failing = table.loc[~table["passed"].astype(bool), "case"].tolist()
        worst = float(table[["residual_u", "residual_v"]].max().max())
        report = {"cases": len(table), "max_relative_residual": worst, "tolerance": tol,
                  "failing_cases": ",".join(failing) if failing else "none", "seed": self.seed}
        self._save_reports(report)

        for row in results:
            flag = "ok" if row["passed"] else "FALHOU"
            print(f"  {row['case']:<24} res_u={row['residual_u']:.3e} res_v={row['residual_v']:.3e} {flag}")
        if failing:
            raise ResidualCheckError(f"Resíduo acima de {tol:.1e} nos casos: {', '.join(failing)}")
        return report

    # --- solve-radial ---

    def solve_radial(self) -> Dict:
        rad = self.config.section("radial")
        solver = RadialSolver(self.config.radial_config())
        R, N = rad["radius"], rad["nodes"]
        bc_u, bc_v = self.config.boundary()
        use_exact = self.config.get("boundary", "exact")

        self._emit_step("solve-radial", 1)
        report: Dict = {"problem": rad["problem"], "radius": R, "nodes": N}
        if rad["problem"] == "henon":
            params = self.config.henon_params()
            exact = henon_radial_solution(params)
            bc = float(exact.profile(R)) if use_exact else bc_u
            profile = solver.solve_henon(params, R, bc, N, rad["tol"], rad["max_iter"])
            self._emit_step("solve-radial", 2)
            report["bc"] = bc
            report["max_error_vs_exact"] = float(np.max(np.abs(profile.u_vals - exact.profile(profile.r_nodes))))
            report["C1"] = exact.coeff
            report["beta_h"] = exact.exponent
        elif rad["problem"] == "system":
            params = self.config.system_params()
            sol_u, sol_v = radial_pair(params)
            if use_exact:
                bc_u, bc_v = float(sol_u.profile(R)), float(sol_v.profile(R))
            profile = solver.solve_system(params, R, (bc_u, bc_v), N, rad["tol"], rad["max_iter"])
            self._emit_step("solve-radial", 2)
            report.update({"bc_u": bc_u, "bc_v": bc_v})
            if use_exact:
                report["max_error_vs_exact"] = float(max(
                    np.max(np.abs(profile.u_vals - sol_u.profile(profile.r_nodes))),
                    np.max(np.abs(profile.v_vals - sol_v.profile(profile.r_nodes))),
                ))
            rho = detect_free_boundary(profile, rad["fb_factor"])
            lo, hi = dead_core_bracket(params, R, (bc_u, bc_v))
            report.update({"bracket_lo": lo, "bracket_hi": hi})
            if rho is not None:
                ex = system_exponents(params)
                slope, r2 = fit_growth_radial(profile, min(ex.alpha_u, ex.beta_v), rad["fb_factor"])
                report.update({"dead_core_radius": rho, "fitted_exponent": slope, "r_squared": r2})
            else:
                print("  Aviso: perfil estritamente positivo, sem núcleo morto.")
        else:
            raise ArgumentError(f"Problema radial desconhecido: {rad['problem']}")

        report.update({"iterations": profile.diagnostics.iterations, "residual": profile.diagnostics.residual})
        self._emit_step("solve-radial", 3)
        self.artifacts.append(FileManager.save_profile_csv(profile, self._path("profile.csv")))
        self._save_reports(report)
        return report

    # --- solve-grid ---

    def _template(self):
        grid = self.config.section("grid")
        return FieldFactory.disk(grid["size"], grid["radius"])

    def _save_field(self, f, name: str):
        self.artifacts.append(FileManager.save_field(f, self._path(f"{name}.dclf")))
        self.artifacts.append(FileManager.save_field(f, self._path(f"{name}.csv")))

    def _analyze_magnitude(self, mag, params: SystemParams, radii=None, pair=None) -> Dict:
        """
        Relatório da fronteira livre e tabela de crescimento; vazio se não houver
        fronteira. Com `pair` = (u, v) inclui o crescimento dos gradientes.
        """
        ana = self.config.section("analysis")
        tol = self.config.analysis_tol()
        if extract_free_boundary(mag, tol).shape[0] == 0:
            print("  Aviso: nenhuma fronteira livre no campo; análise omitida.")
            return {"fb_point_count": 0}

        radii = list(radii) if radii else NumericCalculator.dyadic_radii(mag.h, ana["r_max"])
        porosity = [r for r in radii if r <= ana["porosity_r_max"]] or radii[-1:]
        analyzer = FreeBoundaryAnalyzer(params, tol, ana["c_floor"])
        fb_report = analyzer.build_report(mag, radii=radii, porosity_radii=porosity)

        anchor = (fb_report.extras["anchor_x"], fb_report.extras["anchor_y"])
        table = growth_table(mag, anchor, radii)
        self.artifacts.append(FileManager.save_table(table, self._path("growth.csv"), TableKind.GROWTH))
        out = fb_report.to_dict()
        out["dead_core_fraction"] = float(np.mean(mag.values[mag.domain_mask] <= tol))
        if pair is not None:
            out.update(analyzer.gradient_growth(pair[0], pair[1], fb_report.fb_points, ana["r_max"]))
        return out

    def solve_grid(self) -> Dict:
        params = self.config.system_params()
        spec = self.config.operator_spec()
        cfg = self.config.solve_config()
        schedule = self.config.get("solver", "eps_schedule")
        template = self._template()

        self._emit_step("solve-grid", 1)
        solver = DeadCoreGridSolver(template)
        sol = solver.solve_deadcore(params, (spec, spec), self.config.boundary(), cfg, schedule)

        self._emit_step("solve-grid", 2)
        mag = pair_magnitude(sol.u, sol.v, params, self.config.get("analysis", "combine"))
        report = {"N": template.N, "h": template.h, "iterations": sol.diagnostics.iterations,
                  "residual": sol.diagnostics.residual, "verified_residual": sol.diagnostics.verified_residual,
                  "kappa": system_exponents(params).kappa}
        report.update(self._analyze_magnitude(mag, params, pair=(sol.u, sol.v)))

        self._emit_step("solve-grid", 3)
        self._save_field(sol.u, "u")
        self._save_field(sol.v, "v")
        pd_stages = pd.DataFrame(sol.diagnostics.stages)
        self.artifacts.append(FileManager.save_table(pd_stages, self._path("stages.csv")))
        self._save_reports(report)
        return report

    # --- solve-henon ---

    def solve_henon(self) -> Dict:
        params = self.config.henon_params()
        spec = self.config.operator_spec()
        cfg = self.config.solve_config()
        template = self._template()
        R = self.config.get("grid", "radius")

        exact = None if params.is_critical else henon_radial_solution(params)
        if self.config.get("boundary", "exact"):
            if exact is None:
                raise ArgumentError("Dado exato indisponível no caso crítico.")
            # Traço exato em cada nó da camada de fronteira
            boundary = exact.sample(template)
            bc = float(exact.profile(R))
        else:
            bc = self.config.get("boundary", "u")
            boundary = bc

        self._emit_step("solve-henon", 1)
        solver = DeadCoreGridSolver(template)
        sol = solver.solve_henon(params, spec, None, boundary, cfg)

        self._emit_step("solve-henon", 2)
        slack = self.config.get("analysis", "fit_slack")
        checks = henon_checks(sol.u, params, sol.diagnostics, tol=self.config.analysis_tol(), fit_slack=slack)
        report: Dict = {"N": template.N, "h": template.h, "bc": bc, "iterations": sol.diagnostics.iterations,
                        "residual": sol.diagnostics.residual}
        report.update(checks.to_dict())
        if exact is not None:
            err = np.abs(sol.u.values - exact.sample(template).values)[template.domain_mask]
            report["max_error_vs_exact"] = float(err.max())
            beta_h, grad_h = henon_exponents(params)
            report.update({"beta_h": beta_h, "grad_h": grad_h, "C1": henon_constant(params)})
        diam = 2 * R
        bc_sup = float(np.max(sol.u.values[~template.domain_mask]))
        rhs_sup = R ** params.alpha * max(bc_sup, float(sol.u.values.max())) ** params.mu
        report["apriori_margin"] = apriori_bound_check(sol.u, bc_sup, rhs_sup, params.p, diam)

        self._emit_step("solve-henon", 3)
        self._save_field(sol.u, "u")
        self._save_reports(report)
        return report

    # --- fit ---

    def fit(self) -> Dict:
        sec = self.config.section("fit")
        if not sec["field"]:
            raise ArgumentError("[fit] field é obrigatório.")
        self._emit_step("fit", 1)
        u = FileManager.load_field(sec["field"])
        params = self.config.system_params()
        pair = None
        if sec["v_field"]:
            v = FileManager.load_field(sec["v_field"])
            mag = pair_magnitude(u, v, params, sec["combine"])
            pair = (u, v)
        else:
            mag = u

        self._emit_step("fit", 2)
        report = self._analyze_magnitude(mag, params, sec["radii"] or None, pair)
        report["kappa"] = system_exponents(params).kappa

        self._emit_step("fit", 3)
        self._save_reports(report)
        return report

    # --- liouville ---

    def liouville(self) -> Dict:
        params = self.config.system_params()
        sec = self.config.section("liouville")

        self._emit_step("liouville", 1)
        m = liouville_threshold(params)
        A, B = system_constants(params)
        ex = system_exponents(params)
        report: Dict = {"m": m, "A": A, "B": B, "alpha": ex.alpha_u, "beta": ex.beta_v, "kappa": ex.kappa}
        print(f"  Limiar de Liouville m = {m:.12g} (A={A:.6g}, B={B:.6g}, α={ex.alpha_u:.6g}, β={ex.beta_v:.6g})")

        self._emit_step("liouville", 2)
        if sec["field"]:
            mag = FileManager.load_field(sec["field"])
            verdict = liouville_decay_check(mag, params, m, sec["tol"], sec["annuli"])
            report.update(verdict.to_dict())

        self._emit_step("liouville", 3)
        self._save_reports(report)
        return report

    # --- blowup ---

    def blowup(self) -> Dict:
        params = self.config.system_params()
        sec = self.config.section("blowup")
        ex = system_exponents(params)

        self._emit_step("blowup", 1)
        if sec["family"] == "centered":
            sol_u, _ = radial_pair(params)
            z0 = (0.0, 0.0)
        elif sec["family"] == "offset":
            sol_u, _ = radial_pair(params, offset=sec["offset"])
            z0 = (sec["offset"], 0.0)
        else:
            raise ArgumentError(f"Família desconhecida: {sec['family']}")
        # Grade local em torno de z0: só B_τ(z0) é lido pelas reescalas
        template = FieldFactory.disk(sec["size"], 1.25 * max(sec["taus"]), center=z0)
        u = sol_u.sample(template)

        self._emit_step("blowup", 2)
        if sec["family"] == "centered":
            sequence = []
            for tau in sec["taus"]:
                u_t, _ = blowup_rescale(u, None, z0, tau, params)
                ref = sol_u.sample(u_t)
                err = float(np.max(np.abs(u_t.values - ref.values)[NumericCalculator.ball_mask(u_t, (0, 0), 0.5)]))
                sequence.append((tau, err))
        else:
            sequence = blowup_sequence(u, z0, sec["taus"], params, sol_u.coeff, ex.alpha_u, (1.0, 0.0))
        rows = [{"tau": tau, "error": err} for tau, err in sequence]
        for row in rows:
            print(f"  τ={row['tau']:g}: erro={row['error']:.4e}")

        errors = [r["error"] for r in rows]
        report = {"family": sec["family"], "max_error": max(errors), "h": template.h,
                  "monotone": bool(all(b < a for a, b in zip(errors, errors[1:])))}
        if sec["family"] == "offset" and not report["monotone"]:
            print("  Aviso: erros da sequência de blow-up não decrescem monotonamente.")

        self._emit_step("blowup", 3)
        self.artifacts.append(FileManager.save_table(pd.DataFrame(rows), self._path("blowup.csv")))
        self._save_reports(report)
        return report
