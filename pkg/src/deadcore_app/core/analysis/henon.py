# src\deadcore_app\core\analysis\henon.py

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..numerics.operators import gradient_field
from ..theory.exact import henon_constant
from ..theory.params import HenonParams, henon_exponents
from ..utils.calculus import NumericCalculator
from ..utils.errors import FitUnavailableError, PreconditionError
from ..utils.state import Field
from .free_boundary import distance_to_points, extract_free_boundary


@dataclass
class HenonCheckReport:
    critical_points: np.ndarray
    nondegeneracy_min_ratio: Optional[float] = None
    nondegeneracy_pass: Optional[bool] = None
    fitted_constant: Optional[float] = None
    expected_constant: Optional[float] = None
    strong_max_min: Optional[float] = None
    strong_max_pass: Optional[bool] = None
    gradient_slope: Optional[float] = None
    gradient_constant: Optional[float] = None
    gradient_r2: Optional[float] = None
    expected_gradient_exponent: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        out = {"critical_point_count": int(len(self.critical_points))}
        for key in ("nondegeneracy_min_ratio", "nondegeneracy_pass", "fitted_constant",
                    "expected_constant", "strong_max_min", "strong_max_pass", "gradient_slope",
                    "gradient_constant", "gradient_r2", "expected_gradient_exponent"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


class HenonChecker:
    """
    Verificações pós-solução da equação de Hénon: não degenerescência nos
    pontos críticos, princípio do máximo forte no caso crítico e crescimento
    do gradiente perto da fronteira livre.
    """
    MAX_CRITICAL_POINTS = 64
    MIN_RADIUS = 1.0 / 16       # raios menores ficam abaixo do erro de discretização
    MAX_RADIUS = 0.5

    def __init__(self, params: HenonParams, tol: float = 1e-8, fit_slack: float = 0.2,
                 grad_tol: Optional[float] = None):
        self.params = params
        self.tol = tol
        self.fit_slack = fit_slack
        self.grad_tol = grad_tol

    def critical_points(self, u: Field) -> np.ndarray:
        """
        Nós com u ≤ tol e |∇u| ≤ grad_tol no fecho de {u > tol}.
        """
        grad_tol = self.grad_tol if self.grad_tol is not None else self.tol / u.h
        ux, uy = gradient_field(u.values, u.h)
        small = u.domain_mask & (u.values <= self.tol) & (np.hypot(ux, uy) <= grad_tol)

        positive = u.values > self.tol
        near = np.zeros_like(positive)
        near[1:, :] |= positive[:-1, :]
        near[:-1, :] |= positive[1:, :]
        near[:, 1:] |= positive[:, :-1]
        near[:, :-1] |= positive[:, 1:]

        i, j = np.nonzero(small & near)
        pts = np.column_stack([u.origin[0] + i * u.h, u.origin[1] + j * u.h])
        if pts.shape[0] > self.MAX_CRITICAL_POINTS:
            center = u.point(((u.N - 1) // 2, (u.N - 1) // 2))
            order = np.argsort(np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1]), kind="stable")
            pts = pts[order[: self.MAX_CRITICAL_POINTS]]
        return pts

    def _radii(self, u: Field, x0: np.ndarray) -> List[float]:
        half = 0.5 * (u.N - 1) * u.h
        center = np.array([u.origin[0] + half, u.origin[1] + half])
        room = half - np.hypot(*(x0 - center)) - 2 * u.h
        lo = max(4 * u.h, self.MIN_RADIUS)
        return [r for r in NumericCalculator.dyadic_radii(u.h, self.MAX_RADIUS) if lo <= r <= room]

    def nondegeneracy(self, u: Field, points: np.ndarray) -> Tuple[float, float]:
        """
        Para cada ponto crítico e raio diádico r: sup de u na casca |y−x0| ≈ r
        comparado a C₁·|y*−x0|^{β_H} no nó y* que realiza o supremo.
        Retorna (razão mínima, constante ajustada no primeiro ponto).
        """
        beta_h, _ = henon_exponents(self.params)
        c1 = henon_constant(self.params)
        X, Y = u.coordinates()

        min_ratio = np.inf
        fitted = None
        for k, x0 in enumerate(points):
            dist = np.hypot(X - x0[0], Y - x0[1])
            logs = []
            for r in self._radii(u, x0):
                shell = u.domain_mask & (np.abs(dist - r) <= u.h)
                idx = np.argmax(np.where(shell, u.values, -np.inf))
                s, d = u.values.ravel()[idx], dist.ravel()[idx]
                min_ratio = min(min_ratio, s / (c1 * d ** beta_h))
                if s > 0:
                    logs.append(np.log(s) - beta_h * np.log(d))
            if k == 0 and logs:
                fitted = float(np.exp(np.mean(logs)))
        if fitted is None:
            raise FitUnavailableError("Nenhum raio utilizável em torno dos pontos críticos.")
        return float(min_ratio), fitted

    def gradient_growth(self, u: Field, fb_points: np.ndarray, bins: int = 12) -> Tuple[float, float, float]:
        """Ajuste log-log de max|∇u| contra a distância à fronteira livre."""
        ux, uy = gradient_field(u.values, u.h)
        grad = np.hypot(ux, uy)
        d = distance_to_points(u, fb_points)
        edges = np.geomspace(max(4 * u.h, self.MIN_RADIUS), self.MAX_RADIUS, bins + 1)

        xs, ys = [], []
        valid = u.domain_mask & (u.values > self.tol)
        for a, b in zip(edges[:-1], edges[1:]):
            sel = valid & (d > a) & (d <= b)
            if not np.any(sel):
                continue
            idx = np.argmax(np.where(sel, grad, -np.inf))
            xs.append(d.ravel()[idx])
            ys.append(grad.ravel()[idx])
        if len(xs) < NumericCalculator.MIN_FIT_POINTS:
            raise FitUnavailableError("Faixas de distância insuficientes para o gradiente.")
        return NumericCalculator.loglog_fit(xs, ys)

    def run(self, u: Field, diagnostics=None) -> HenonCheckReport:
        if diagnostics is not None and not diagnostics.converged:
            raise PreconditionError("Verificações de Hénon exigem uma solução convergida.")

        points = self.critical_points(u)
        report = HenonCheckReport(critical_points=points)

        if self.params.is_critical:
            report.strong_max_min = float(np.min(u.values[u.domain_mask]))
            report.strong_max_pass = report.strong_max_min > 0
            print(f"  Analysis: caso crítico, min u = {report.strong_max_min:.4e}")
            return report

        report.expected_constant = henon_constant(self.params)
        _, report.expected_gradient_exponent = henon_exponents(self.params)

        if points.shape[0] > 0:
            ratio, fitted = self.nondegeneracy(u, points)
            report.nondegeneracy_min_ratio = ratio
            report.nondegeneracy_pass = ratio >= 1.0 - self.fit_slack
            report.fitted_constant = fitted
        else:
            report.notes.append("sem pontos críticos")

        fb = extract_free_boundary(u, self.tol)
        fb = np.vstack([fb, points]) if fb.size else points
        if fb.shape[0] > 0:
            slope, const, r2 = self.gradient_growth(u, fb)
            report.gradient_slope, report.gradient_constant, report.gradient_r2 = slope, const, r2
        else:
            report.notes.append("sem fronteira livre para o ajuste do gradiente")

        print(f"  Analysis: Hénon {len(points)} pontos críticos, "
              f"C ajustada={report.fitted_constant}, inclinação do gradiente={report.gradient_slope}")
        return report


def henon_checks(u: Field, params: HenonParams, diagnostics=None, tol: float = 1e-8,
                 fit_slack: float = 0.2) -> HenonCheckReport:
    return HenonChecker(params, tol, fit_slack).run(u, diagnostics)
