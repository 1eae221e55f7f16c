# src\deadcore_app\core\analysis\scaling.py

import numpy as np
from dataclasses import dataclass, field
from scipy.interpolate import RegularGridInterpolator
from typing import List, Optional, Sequence, Tuple, Union

from ..theory.params import HenonParams, SystemParams, henon_exponents, system_exponents
from ..utils.errors import ArgumentError, DomainError, PreconditionError, ResolutionError
from ..utils.factory import FieldFactory
from ..utils.state import Field


@dataclass
class LiouvilleVerdict:
    ratio: float
    threshold: float
    verdict: str                      # "vanishes" | "above_threshold"
    inner_sup: float
    annuli: List[Tuple[float, float]] = field(default_factory=list)
    origin_value: float = 0.0
    origin_vanishes: bool = True
    # sup_{B_1} da sequência reescalada mag(R_k x)/R_k^κ, R_k = R/2^k
    rescaled_sups: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ratio": self.ratio,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "inner_sup": self.inner_sup,
            "annuli": len(self.annuli),
            "origin_value": self.origin_value,
            "origin_vanishes": self.origin_vanishes,
            "rescaled_sups": list(self.rescaled_sups),
            "rescaled_sup_max": max(self.rescaled_sups, default=0.0),
        }


def _grid_center(f: Field) -> Tuple[np.ndarray, float]:
    half = 0.5 * (f.N - 1) * f.h
    return np.array([f.origin[0] + half, f.origin[1] + half]), half


def _interpolator(f: Field) -> RegularGridInterpolator:
    axis_x = f.origin[0] + np.arange(f.N) * f.h
    axis_y = f.origin[1] + np.arange(f.N) * f.h
    return RegularGridInterpolator((axis_x, axis_y), f.values, method="linear",
                                   bounds_error=False, fill_value=None)


def _rescale_one(f: Field, z0: np.ndarray, tau: float, exponent: float, target: Field) -> Field:
    X, Y = target.coordinates()
    pts = np.column_stack([z0[0] + tau * X.ravel(), z0[1] + tau * Y.ravel()])
    values = _interpolator(f)(pts).reshape(X.shape) / tau ** exponent
    return target.with_values(values)


def blowup_rescale(
    u: Field,
    v: Optional[Field],
    z0,
    tau: float,
    params: Union[SystemParams, HenonParams],
    N_out: Optional[int] = None,
    exponent: Optional[float] = None,
) -> Tuple[Field, Optional[Field]]:
    """
    u_τ(x) = u(z0+τx)/τ^α e v_τ(x) = v(z0+τx)/τ^β, interpolação bilinear numa
    nova grade do disco unitário. Para HenonParams só u é reescalado (expoente β_H).
    `exponent` substitui o expoente de u (por exemplo κ para a magnitude do par).
    """
    if not 0.0 < tau <= 1.0:
        raise ArgumentError(f"τ deve estar em (0, 1], recebido {tau}.")
    z0 = np.asarray(z0, dtype=float)
    center, radius = _grid_center(u)
    if np.hypot(*(z0 - center)) + tau > radius * (1.0 + 1e-12):
        raise DomainError(f"B_τ(z0) com τ={tau} e z0={tuple(z0)} sai do domínio de raio {radius:.4g}.")

    if isinstance(params, HenonParams):
        exp_u, exp_v = henon_exponents(params)[0], None
    else:
        ex = system_exponents(params)
        exp_u, exp_v = ex.alpha_u, ex.beta_v
    if exponent is not None:
        exp_u = exponent

    target = FieldFactory.disk(N_out or u.N, 1.0)
    u_t = _rescale_one(u, z0, tau, exp_u, target)
    v_t = None
    if v is not None:
        if exp_v is None:
            raise ArgumentError("Reescala do par exige SystemParams.")
        u.require_same_grid(v, "u e v")
        v_t = _rescale_one(v, z0, tau, exp_v, target)
    return u_t, v_t


def halfspace_profile_error(u_t: Field, coeff: float, exponent: float, direction,
                            radius: float = 0.5) -> float:
    """sup_{|x| ≤ radius} |u_τ(x) − coeff·(x·e)₊^exponent|."""
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    X, Y = u_t.coordinates()
    s = X * e[0] + Y * e[1]
    profile = coeff * np.where(s > 0, np.abs(s), 0.0) ** exponent
    ball = np.hypot(X, Y) <= radius * (1.0 + 1e-12)
    return float(np.max(np.abs(u_t.values - profile)[ball]))


def liouville_decay_check(mag: Field, params: SystemParams, m: float, tol: float = 1e-12,
                          n_annuli: int = 2) -> LiouvilleVerdict:
    """
    Estima sup mag/r^κ nos anéis diádicos externos R/2^{k+1} < |x| ≤ R/2^k,
    o valor no centro (hipótese de anulamento na origem) e a sequência
    reescalada sup_{B_1} mag(R_k x)/R_k^κ.
    Diagnóstico apenas: nenhuma conclusão teórica é tirada dos dados da grade.
    """
    center, R = _grid_center(mag)
    if R < 4.0:
        raise PreconditionError(f"Domínio de raio {R:.4g} < 4.")
    kappa = system_exponents(params).kappa

    X, Y = mag.coordinates()
    r = np.hypot(X - center[0], Y - center[1])
    annuli: List[Tuple[float, float]] = []
    ratio = 0.0
    for k in range(n_annuli):
        outer = R / 2 ** k
        inner = outer / 2
        if inner < 4 * mag.h:
            break
        sel = (r > inner) & (r <= outer * (1.0 + 1e-12))
        annuli.append((inner, outer))
        ratio = max(ratio, float(np.max(mag.values[sel] / r[sel] ** kappa)))
    if len(annuli) < n_annuli:
        raise ResolutionError(f"Apenas {len(annuli)} anéis resolvidos (≥ 4h); exigidos {n_annuli}.")

    inner_sup = float(np.max(np.abs(mag.values[r <= R / 2])))
    origin_value = float(_interpolator(mag)(center[None, :])[0])
    origin_vanishes = abs(origin_value) <= tol
    rescaled = _rescaled_sups(mag, params, center, R, kappa, len(annuli))

    vanishes = ratio < m and inner_sup <= tol and origin_vanishes
    verdict = "vanishes" if vanishes else "above_threshold"
    print(f"  Analysis: razão de Liouville={ratio:.12g} (m={m:.12g}), mag(0)={origin_value:.3e} → {verdict}")
    return LiouvilleVerdict(ratio, m, verdict, inner_sup, annuli, origin_value, origin_vanishes, rescaled)


def _rescaled_sups(mag: Field, params: SystemParams, center: np.ndarray, R: float, kappa: float,
                   count: int) -> List[float]:
    # Normaliza o domínio para raio 1; a reescala por τ = 2^{-k} dá mag(R_k x)/R_k^κ
    unit = Field(mag.values / R ** kappa, mag.h / R, mag.domain_mask.copy(),
                 (mag.origin[0] / R, mag.origin[1] / R))
    sups = []
    for k in range(count):
        u_k, _ = blowup_rescale(unit, None, center / R, 2.0 ** (-k), params, exponent=kappa)
        X, Y = u_k.coordinates()
        ball = np.hypot(X, Y) <= 1.0 + 1e-12
        sups.append(float(np.max(np.abs(u_k.values[ball]))))
    return sups


def blowup_sequence(u: Field, z0, taus: Sequence[float], params, coeff: float, exponent: float,
                    direction, N_out: Optional[int] = None) -> List[Tuple[float, float]]:
    """Erros contra o perfil de semiespaço ao longo da sequência de τ."""
    out = []
    for tau in taus:
        u_t, _ = blowup_rescale(u, None, z0, tau, params, N_out)
        out.append((float(tau), halfspace_profile_error(u_t, coeff, exponent, direction)))
    return out
