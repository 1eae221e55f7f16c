# src\deadcore_app\core\analysis\free_boundary.py

"""
Geometria da fronteira livre: magnitude do par, extração da fronteira,
ajustes de crescimento, não degenerescência, densidade e porosidade.
"""

import numpy as np
import pandas as pd
import shapely
from dataclasses import dataclass, field
from shapely.strtree import STRtree
from typing import Dict, List, Optional, Sequence, Tuple

from ..numerics.operators import gradient_field
from ..theory.params import BarrierKind, SystemParams, system_exponents
from ..theory.exact import system_constants
from ..utils.calculus import NumericCalculator
from ..utils.errors import ArgumentError, FitUnavailableError, ResolutionError, ShapeError
from ..utils.state import Field


@dataclass
class FreeBoundaryReport:
    fb_points: np.ndarray
    fitted_exponent: float
    fitted_constant: float
    fit_window: Tuple[float, float]
    r_squared: float
    density_min_ratio: float
    porosity_radius_fraction: float
    expected_exponent: Optional[float] = None
    extras: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, float]:
        """Campos fixos do documento estruturado de cada execução."""
        out = {
            "fitted_exponent": self.fitted_exponent,
            "fitted_constant": self.fitted_constant,
            "r_squared": self.r_squared,
            "density_min_ratio": self.density_min_ratio,
            "porosity_tau": self.porosity_radius_fraction,
            "fit_r_min": self.fit_window[0],
            "fit_r_max": self.fit_window[1],
            "fb_point_count": int(len(self.fb_points)),
        }
        if self.expected_exponent is not None:
            out["expected_exponent"] = self.expected_exponent
        out.update(self.extras)
        return out


def pair_magnitude(u: Field, v: Field, params: SystemParams, combine: str = "sum") -> Field:
    """
    |(u, v)| = u₊^{2/num_α} + v₊^{2/num_β}; combine="max" devolve o maior
    dos dois termos.
    """
    u.require_same_grid(v, "u e v")
    a = NumericCalculator.positive_power(u.values, 2.0 / params.num_alpha)
    b = NumericCalculator.positive_power(v.values, 2.0 / params.num_beta)
    if combine == "sum":
        return u.with_values(a + b)
    if combine == "max":
        return u.with_values(np.maximum(a, b))
    raise ArgumentError(f"Combinação desconhecida: {combine}")


def extract_free_boundary(mag: Field, tol: float) -> np.ndarray:
    """
    Pontos interiores com mag ≤ tol e algum vizinho (4-conexo) com mag > tol.
    Retorna um array (k, 2) de coordenadas físicas (vazio se não houver transição).
    """
    if not tol > 0:
        raise ArgumentError("Tolerância da fronteira livre deve ser positiva.")
    m = mag.values
    positive = m > tol
    neighbour = np.zeros_like(positive)
    neighbour[1:, :] |= positive[:-1, :]
    neighbour[:-1, :] |= positive[1:, :]
    neighbour[:, 1:] |= positive[:, :-1]
    neighbour[:, :-1] |= positive[:, 1:]

    selected = mag.domain_mask & ~positive & neighbour
    i, j = np.nonzero(selected)
    return np.column_stack([mag.origin[0] + i * mag.h, mag.origin[1] + j * mag.h])


def _ball_sups(mag: Field, x0, radii: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    dist = NumericCalculator.distance_from(mag, x0)
    radii = np.asarray(sorted(radii, reverse=True), dtype=float)
    sups = np.array([
        float(np.max(mag.values[dist <= r * (1 + NumericCalculator.MEMBERSHIP_RTOL)], initial=0.0))
        for r in radii
    ])
    return radii, sups


def _usable_radii(mag: Field, radii: Sequence[float]) -> List[float]:
    return [r for r in radii if r >= 4 * mag.h * (1 - 1e-12)]


def growth_table(mag: Field, x0, radii: Sequence[float]) -> pd.DataFrame:
    """Tabela (r, S(r), log r, log S) para gráficos de crescimento."""
    r, S = _ball_sups(mag, x0, _usable_radii(mag, radii))
    with np.errstate(divide="ignore"):
        return pd.DataFrame({"r": r, "S": S, "log_r": np.log(r), "log_S": np.log(S)})


def growth_fit(mag: Field, x0, radii: Sequence[float]) -> Tuple[float, float, float]:
    """
    S(r) = sup_{B_r(x0)} mag e ajuste log S × log r; retorna (slope, constant, r²).
    """
    usable = _usable_radii(mag, radii)
    r, S = _ball_sups(mag, x0, usable)
    keep = S > 0
    if np.count_nonzero(keep) < NumericCalculator.MIN_FIT_POINTS:
        raise FitUnavailableError(
            f"Menos de {NumericCalculator.MIN_FIT_POINTS} raios utilizáveis (≥ 4h e S(r) > 0)."
        )
    return NumericCalculator.loglog_fit(r[keep], S[keep])


def default_c_floor(params: SystemParams) -> float:
    """Metade da constante da sub-barreira, Â^{2/num_α}/2."""
    A_sub, _ = system_constants(params, BarrierKind.SUB)
    return 0.5 * A_sub ** (2.0 / params.num_alpha)


def nondegeneracy_check(mag: Field, x0, radii: Sequence[float], params: SystemParams,
                        c_floor: Optional[float] = None) -> Tuple[float, bool]:
    """min_r S(r)/r^κ e o veredito min_ratio ≥ c_floor."""
    usable = _usable_radii(mag, radii)
    if len(usable) < NumericCalculator.MIN_FIT_POINTS:
        raise FitUnavailableError(f"Menos de {NumericCalculator.MIN_FIT_POINTS} raios ≥ 4h.")
    floor = default_c_floor(params) if c_floor is None else c_floor
    if not floor > 0:
        raise ArgumentError("c_floor deve ser positivo.")

    kappa = system_exponents(params).kappa
    r, S = _ball_sups(mag, x0, usable)
    min_ratio = float(np.min(S / r ** kappa))
    return min_ratio, bool(min_ratio >= floor)


def density_ratio(mag: Field, x0, rho_list: Sequence[float], tol: float) -> np.ndarray:
    """
    Para cada ρ: (#nós em B_ρ(x0) com mag > tol)·h² / (πρ²).
    """
    dist = NumericCalculator.distance_from(mag, x0)
    ratios = []
    for rho in rho_list:
        if rho < 2 * mag.h:
            raise ResolutionError(f"ρ={rho:.4g} abaixo de 2h={2 * mag.h:.4g}.")
        ball = dist <= rho * (1 + NumericCalculator.MEMBERSHIP_RTOL)
        count = np.count_nonzero(ball & (mag.values > tol))
        ratios.append(min(1.0, count * mag.h ** 2 / (np.pi * rho ** 2)))

    ratios = np.asarray(ratios)
    if ratios.size and np.all(ratios == 0):
        print(f"  Aviso: densidade nula em torno de {tuple(np.round(x0, 6))}; ponto fora da fronteira livre.")
    return ratios


def distance_to_points(template: Field, points: np.ndarray) -> np.ndarray:
    """Distância de cada nó da grade ao conjunto de pontos (árvore STR)."""
    tree = STRtree(shapely.points(np.asarray(points, dtype=float)))
    X, Y = template.coordinates()
    queries = shapely.points(np.column_stack([X.ravel(), Y.ravel()]))
    idx, dist = tree.query_nearest(queries, return_distance=True, all_matches=False)
    out = np.full(X.size, np.inf)
    out[idx[0]] = dist
    return out.reshape(X.shape)


def porosity_probe(mag: Field, fb_points: np.ndarray, r_list: Sequence[float],
                   max_points: int = 256) -> float:
    """
    Para cada ponto x da fronteira e raio r procura a maior bola B_{τr}(y) ⊂ B_r(x)
    que evita a fronteira; devolve o menor τ obtido (proxy da constante de porosidade).
    """
    points = np.asarray(fb_points, dtype=float).reshape(-1, 2)
    if points.shape[0] == 0:
        raise ArgumentError("Lista de pontos da fronteira livre vazia.")
    if not r_list:
        raise ArgumentError("Lista de raios vazia.")

    if points.shape[0] > max_points:
        points = points[np.linspace(0, points.shape[0] - 1, max_points).astype(int)]

    dist_fb = distance_to_points(mag, np.asarray(fb_points, dtype=float).reshape(-1, 2))
    X, Y = mag.coordinates()
    tau = np.inf
    for x in points:
        d_x = np.hypot(X - x[0], Y - x[1])
        for r in r_list:
            inside = d_x <= r
            holes = np.minimum(dist_fb[inside], r - d_x[inside])
            tau = min(tau, float(holes.max()) / r)
    return float(tau)


def gradient_magnitude(u: Field) -> Field:
    """|∇u| por diferenças centradas, na mesma grade."""
    ux, uy = gradient_field(u.values, u.h)
    return u.with_values(np.hypot(ux, uy))


def distance_growth_fit(mag: Field, fb_points: np.ndarray, d_min: Optional[float] = None,
                        d_max: float = 0.3, bins: int = 12) -> Tuple[float, float, float]:
    """
    Crescimento em termos da distância à fronteira: em faixas logarítmicas de d,
    o maior valor de mag contra a distância do nó correspondente.
    """
    points = np.asarray(fb_points, dtype=float).reshape(-1, 2)
    if points.shape[0] == 0:
        raise ArgumentError("Lista de pontos da fronteira livre vazia.")
    d = distance_to_points(mag, points)
    lo = 4 * mag.h if d_min is None else d_min
    edges = np.geomspace(lo, d_max, bins + 1)
    xs, ys = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        sel = mag.domain_mask & (d > a) & (d <= b)
        if not np.any(sel):
            continue
        k = np.argmax(np.where(sel, mag.values, -np.inf))
        xs.append(d.ravel()[k])
        ys.append(mag.values.ravel()[k])
    if len(xs) < NumericCalculator.MIN_FIT_POINTS:
        raise FitUnavailableError("Faixas de distância insuficientes para o ajuste.")
    return NumericCalculator.loglog_fit(xs, ys)


class FreeBoundaryAnalyzer:
    """
    Reúne as estimativas num FreeBoundaryReport.
    """
    DEFAULT_R_MAX = 0.3

    def __init__(self, params: SystemParams, tol: float, c_floor: Optional[float] = None):
        self.params = params
        self.tol = tol
        self.c_floor = c_floor

    @staticmethod
    def anchor_point(fb_points: np.ndarray) -> np.ndarray:
        """Ponto da fronteira com maior abscissa (desempate pela menor |y|)."""
        order = np.lexsort((np.abs(fb_points[:, 1]), -fb_points[:, 0]))
        return fb_points[order[0]]

    def build_report(self, mag: Field, radii: Optional[Sequence[float]] = None,
                     density_radii: Optional[Sequence[float]] = None,
                     porosity_radii: Optional[Sequence[float]] = None) -> FreeBoundaryReport:
        fb = extract_free_boundary(mag, self.tol)
        if fb.shape[0] == 0:
            raise FitUnavailableError("Nenhuma fronteira livre encontrada no campo.")
        print(f"  Analysis: {fb.shape[0]} pontos de fronteira livre (tol={self.tol:.2e})")

        x0 = self.anchor_point(fb)
        radii = list(radii) if radii else NumericCalculator.dyadic_radii(mag.h, self.DEFAULT_R_MAX)
        slope, const, r2 = growth_fit(mag, x0, radii)
        usable = _usable_radii(mag, radii)

        rho_list = list(density_radii) if density_radii else [r for r in usable if r >= 2 * mag.h]
        dens = density_ratio(mag, x0, rho_list, self.tol)

        por_radii = list(porosity_radii) if porosity_radii else [r for r in usable if r <= 0.1] or usable[-1:]
        tau = porosity_probe(mag, fb, por_radii)

        min_ratio, passed = nondegeneracy_check(mag, x0, radii, self.params, self.c_floor)
        kappa = system_exponents(self.params).kappa
        print(f"  Analysis: expoente={slope:.4f} (κ={kappa:.4f}), densidade mín={dens.min():.3f}, τ={tau:.3f}")

        return FreeBoundaryReport(
            fb_points=fb,
            fitted_exponent=slope,
            fitted_constant=const,
            fit_window=(min(usable), max(usable)),
            r_squared=r2,
            density_min_ratio=float(dens.min()),
            porosity_radius_fraction=tau,
            expected_exponent=kappa,
            extras={
                "anchor_x": float(x0[0]),
                "anchor_y": float(x0[1]),
                "nondegeneracy_min_ratio": min_ratio,
                "nondegeneracy_pass": float(passed),
            },
        )

    def gradient_growth(self, u: Field, v: Field, fb_points: np.ndarray,
                        d_max: Optional[float] = None) -> Dict[str, float]:
        """
        Ajustes log-log de max|∇u| e max|∇v| contra a distância à fronteira
        livre, com os expoentes de gradiente esperados.
        """
        ex = system_exponents(self.params)
        d_max = self.DEFAULT_R_MAX if d_max is None else d_max
        out: Dict[str, float] = {}
        for name, f, expected in (("u", u, ex.grad_u), ("v", v, ex.grad_v)):
            slope, const, r2 = distance_growth_fit(gradient_magnitude(f), fb_points, d_max=d_max)
            out.update({
                f"grad_{name}_slope": slope,
                f"grad_{name}_constant": const,
                f"grad_{name}_r2": r2,
                f"expected_grad_{name}": expected,
            })
            print(f"  Analysis: |∇{name}| inclinação={slope:.4f} (esperado {expected:.4f}), r²={r2:.4f}")
        return out
