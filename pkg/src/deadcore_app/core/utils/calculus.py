# src\deadcore_app\core\utils\calculus.py

import numpy as np
from typing import List, Sequence, Tuple

from .state import Field
from .errors import FitUnavailableError


class NumericCalculator:
    """
    Classe para cálculos numéricos auxiliares (potências de partes
    positivas, ajustes log-log, bolas discretas).
    """
    MACHINE_EPS = np.finfo(float).eps
    MEMBERSHIP_RTOL = 1e-12         # folga relativa na pertença a bolas
    MIN_FIT_POINTS = 4

    @staticmethod
    def positive_power(t, exponent: float) -> np.ndarray:
        """
        t₊^exponent com a convenção t₊^0 = 1 se t > 0 e 0 caso contrário.
        """
        t = np.asarray(t, dtype=float)
        positive = t > 0
        out = np.zeros_like(t)
        out[positive] = t[positive] ** exponent
        return out

    @staticmethod
    def positive_power_derivative(t, exponent: float, floor: float) -> np.ndarray:
        """
        Derivada de t ↦ t₊^exponent para o Jacobiano. Abaixo de `floor` a
        derivada é congelada em exponent·floor^(exponent−1); nula para t < 0.
        """
        t = np.asarray(t, dtype=float)
        if exponent == 0.0:
            return np.zeros_like(t)
        safe = np.maximum(t, floor)
        out = exponent * safe ** (exponent - 1.0)
        return np.where(t >= 0.0, out, 0.0)

    @staticmethod
    def loglog_fit(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float, float]:
        """
        Ajuste por mínimos quadrados de log y = log c + s·log x.

        Retorna (s, c, r²). Pontos com x ≤ 0 ou y ≤ 0 são descartados.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        keep = (x > 0) & (y > 0) & np.isfinite(x) & np.isfinite(y)
        if np.count_nonzero(keep) < 2:
            raise FitUnavailableError("Pontos insuficientes para o ajuste log-log.")

        lx, ly = np.log(x[keep]), np.log(y[keep])
        slope, intercept = np.polyfit(lx, ly, 1)
        predicted = intercept + slope * lx
        ss_res = float(np.sum((ly - predicted) ** 2))
        ss_tot = float(np.sum((ly - ly.mean()) ** 2))
        r2 = 1.0 if ss_tot == 0.0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
        return float(slope), float(np.exp(intercept)), r2

    @staticmethod
    def distance_from(field: Field, x0) -> np.ndarray:
        X, Y = field.coordinates()
        return np.hypot(X - x0[0], Y - x0[1])

    @staticmethod
    def ball_mask(field: Field, x0, r: float) -> np.ndarray:
        """Nós da grade com |x − x0| ≤ r (pertença exata, sem interpolação)."""
        dist = NumericCalculator.distance_from(field, x0)
        return dist <= r * (1.0 + NumericCalculator.MEMBERSHIP_RTOL)

    @staticmethod
    def dyadic_radii(h: float, r_max: float = 0.3, min_cells: float = 4.0) -> List[float]:
        """Raios 2^{-k} no intervalo [min_cells·h, r_max], em ordem decrescente."""
        radii = []
        k = 0
        while True:
            r = 2.0 ** (-k)
            if r < min_cells * h:
                break
            if r <= r_max:
                radii.append(r)
            k += 1
        return radii
