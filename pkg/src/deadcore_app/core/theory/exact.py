# src\deadcore_app\core\theory\exact.py

"""
Soluções radiais explícitas (super/sub-soluções do sistema, soluções de
Hénon e soluções de coordenada) com suas constantes e resíduos exatos.
"""

import numpy as np
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from .params import (
    BarrierKind,
    HenonParams,
    OperatorKind,
    SystemParams,
    henon_exponents,
    system_exponents,
)
from ..utils.errors import (
    ArgumentError,
    DeadCoreEvaluationError,
    DegenerateGeometryError,
    ParameterDomainError,
    UnsupportedRangeError,
)
from ..utils.state import Field
from ..utils.factory import FieldFactory


@dataclass(frozen=True)
class RadialSolution:
    """
    Perfil x ↦ coeff·(|x − center| − offset)₊^exponent.
    A bola fechada de raio `offset` é o núcleo morto.
    """
    coeff: float
    exponent: float
    center: Tuple[float, ...] = (0.0, 0.0)
    offset: float = 0.0

    def __post_init__(self):
        if not self.coeff > 0:
            raise ParameterDomainError(f"Coeficiente deve ser positivo ({self.coeff}).")
        if not self.exponent > 1:
            raise ParameterDomainError(f"Expoente deve ser > 1 ({self.exponent}).")
        if self.offset < 0:
            raise ParameterDomainError("Raio do núcleo morto deve ser ≥ 0.")

    def profile(self, r) -> np.ndarray:
        s = np.maximum(np.asarray(r, dtype=float) - self.offset, 0.0)
        return self.coeff * s ** self.exponent

    def d1(self, r) -> np.ndarray:
        s = np.maximum(np.asarray(r, dtype=float) - self.offset, 0.0)
        return self.coeff * self.exponent * s ** (self.exponent - 1)

    def d2(self, r) -> np.ndarray:
        s = np.maximum(np.asarray(r, dtype=float) - self.offset, 0.0)
        with np.errstate(divide="ignore"):
            return self.coeff * self.exponent * (self.exponent - 1) * s ** (self.exponent - 2)

    def sample(self, template: Field, scale: float = 1.0) -> Field:
        """Amostra o perfil (multiplicado por `scale`) na grade de `template`."""
        center = (self.center[0], self.center[1]) if len(self.center) >= 2 else (self.center[0], 0.0)
        return FieldFactory.radial(template, lambda r: scale * self.profile(r), center)


@dataclass(frozen=True)
class CoordinateProfile:
    """Solução de uma variável u(x) = coeff·|x_axis|^exponent."""
    coeff: float
    exponent: float
    axis: int
    variant: str = "corrected"

    def value(self, t) -> np.ndarray:
        return self.coeff * np.abs(np.asarray(t, dtype=float)) ** self.exponent


def _operator_scale(params: Union[SystemParams, HenonParams], kind: OperatorKind) -> float:
    kind = OperatorKind(kind)
    if kind is OperatorKind.TRACE:
        return 1.0
    if kind is OperatorKind.PUCCI_PLUS:
        return params.ell_hi
    return params.ell_lo


def system_constants(params: SystemParams, kind: BarrierKind = BarrierKind.SUPER) -> Tuple[float, float]:
    """
    Constantes (A, B) das soluções radiais (A r^α, B r^β).

    São a solução de Λ(n+α−2)(Aα)^{1+p} = B^{λ₁} e Λ(n+β−2)(Bβ)^{1+q} = A^{λ₂};
    para kind=sub usa-se λ no lugar de Λ.
    """
    ex = system_exponents(params)
    scale = params.ell_hi if BarrierKind(kind) is BarrierKind.SUPER else params.ell_lo
    return _constants_for(params, ex.alpha_u, ex.beta_v, scale, params.n)


def _constants_for(params: SystemParams, alpha: float, beta: float, scale: float, geom_n: float) -> Tuple[float, float]:
    geo_a = geom_n + alpha - 2
    geo_b = geom_n + beta - 2
    if geo_a <= 0 or geo_b <= 0:
        raise DegenerateGeometryError(f"n+α−2={geo_a}, n+β−2={geo_b}: constantes indefinidas.")

    pa = scale * geo_a * alpha ** (1 + params.p)
    pb = scale * geo_b * beta ** (1 + params.q)
    E = params.lambda1 * params.lambda2 - (1 + params.p) * (1 + params.q)

    A = pb ** (params.lambda1 / E) * pa ** ((1 + params.q) / E)
    B = pa ** (params.lambda2 / E) * pb ** ((1 + params.p) / E)
    return float(A), float(B)


def radial_pair(
    params: SystemParams,
    kind: BarrierKind = BarrierKind.SUPER,
    center: Tuple[float, ...] = (0.0, 0.0),
    offset: float = 0.0,
) -> Tuple[RadialSolution, RadialSolution]:
    """Par (A(|x|−ρ)₊^α, B(|x|−ρ)₊^β) com as constantes do tipo pedido."""
    ex = system_exponents(params)
    A, B = system_constants(params, kind)
    return (
        RadialSolution(A, ex.alpha_u, tuple(center), offset),
        RadialSolution(B, ex.beta_v, tuple(center), offset),
    )


def residual_radial(
    sol_u: RadialSolution,
    sol_v: RadialSolution,
    params: SystemParams,
    operator_kind: OperatorKind,
    r: float,
) -> Tuple[float, float]:
    """
    Resíduos (res1, res2) do sistema avaliados em forma fechada no raio r.

    Para potências radiais com expoente > 1 os autovalores da Hessiana são
    {w″, w′/r (multiplicidade n−1)}, ambos ≥ 0; Pucci reduz-se a Laplacianos escalados.
    """
    if r <= sol_u.offset and r <= sol_v.offset:
        return 0.0, 0.0
    if r <= sol_u.offset or r <= sol_v.offset:
        raise DeadCoreEvaluationError(
            f"r={r} dentro do núcleo morto de apenas uma das componentes."
        )

    coeff_op = _operator_scale(params, operator_kind)
    n = params.n

    def lhs(sol: RadialSolution, power: float) -> float:
        d1 = float(sol.d1(r))
        d2 = float(sol.d2(r))
        return abs(d1) ** power * coeff_op * (d2 + (n - 1) * d1 / r)

    u_r = float(sol_u.profile(r))
    v_r = float(sol_v.profile(r))
    res1 = lhs(sol_u, params.p) - v_r ** params.lambda1
    res2 = lhs(sol_v, params.q) - u_r ** params.lambda2
    return res1, res2


def relative_residual_radial(
    sol_u: RadialSolution,
    sol_v: RadialSolution,
    params: SystemParams,
    operator_kind: OperatorKind,
    r: float,
) -> Tuple[float, float]:
    """Resíduos divididos pelos respectivos lados direitos."""
    res1, res2 = residual_radial(sol_u, sol_v, params, operator_kind, r)
    rhs1 = float(sol_v.profile(r)) ** params.lambda1
    rhs2 = float(sol_u.profile(r)) ** params.lambda2
    return abs(res1) / max(rhs1, 1e-300), abs(res2) / max(rhs2, 1e-300)


def henon_constant(params: HenonParams) -> float:
    """Constante C₁ da solução radial C₁|x|^{β_H} da equação de Hénon."""
    p, mu, alpha, n = params.p, params.mu, params.alpha, params.n
    gap = 1 + p - mu
    if not gap > 0:
        raise ParameterDomainError("μ ≥ 1+p: constante de Hénon indefinida.")
    geometry = n * gap + (2 * mu + alpha - p)
    if geometry <= 0:
        raise DegenerateGeometryError(f"n(1+p−μ)+(2μ+α−p) = {geometry} ≤ 0.")

    base = gap ** (2 + p) / (params.ell_hi * (2 + p + alpha) ** (1 + p) * geometry)
    return float(base ** (1.0 / gap))


def henon_radial_solution(params: HenonParams, center: Tuple[float, ...] = (0.0, 0.0)) -> RadialSolution:
    beta_h, _ = henon_exponents(params)
    return RadialSolution(henon_constant(params), beta_h, tuple(center), 0.0)


def henon_residual(sol: RadialSolution, params: HenonParams, r: float) -> float:
    """Λ|u′|^p(u″ + (n−1)u′/r) − r^α u₊^μ em forma fechada."""
    if r <= 0:
        raise ArgumentError("Resíduo de Hénon avaliado apenas para r > 0.")
    d1 = float(sol.d1(r))
    d2 = float(sol.d2(r))
    lhs = abs(d1) ** params.p * params.ell_hi * (d2 + (params.n - 1) * d1 / r)
    return lhs - r ** params.alpha * float(sol.profile(r)) ** params.mu


def coordinate_solution(params: HenonParams, axis: int, variant: str = "corrected") -> CoordinateProfile:
    """
    Solução dependente de uma coordenada, c·|x_axis|^{(2+p+α)/(1+p−μ)}.

    variant="corrected": c = [(1+p−μ)^{2+p}/((1+α+μ)(2+p+α)^{1+p})]^{1/(1+p−μ)}
    (coincide com a expressão com (n−2)(1+p−μ)+(2+p+α) quando n = 1).
    variant="literal": a expressão com n, sem o expoente externo.
    """
    if not 1 <= axis <= params.n:
        raise ArgumentError(f"Eixo {axis} fora de 1..{params.n}.")
    p, mu, alpha, n = params.p, params.mu, params.alpha, params.n
    gap = 1 + p - mu
    if not gap > 0:
        raise ParameterDomainError("μ ≥ 1+p: solução de coordenada indefinida.")
    geometry = (n - 2) * gap + (2 + p + alpha)
    if geometry <= 0:
        raise DegenerateGeometryError(f"(n−2)(1+p−μ)+(2+p+α) = {geometry} ≤ 0.")

    exponent = (2 + p + alpha) / gap
    if variant == "corrected":
        coeff = (gap ** (2 + p) / ((1 + alpha + mu) * (2 + p + alpha) ** (1 + p))) ** (1.0 / gap)
    elif variant == "literal":
        coeff = gap ** (2 + p) / (geometry * (p + 2 + alpha) ** (1 + p))
    else:
        raise ArgumentError(f"Variante desconhecida: {variant}")
    return CoordinateProfile(float(coeff), float(exponent), axis, variant)


def coordinate_residual(profile: CoordinateProfile, params: HenonParams, t: float) -> float:
    """
    Resíduo relativo de |u′|^p u″ = |t|^α u₊^μ na variável t = x_axis (t ≠ 0).
    """
    if t == 0:
        raise ArgumentError("Resíduo de coordenada avaliado apenas para t ≠ 0.")
    c, g = profile.coeff, profile.exponent
    at = abs(t)
    d1 = c * g * at ** (g - 1)
    d2 = c * g * (g - 1) * at ** (g - 2)
    lhs = d1 ** params.p * d2
    rhs = at ** params.alpha * (c * at ** g) ** params.mu
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def liouville_threshold(params: SystemParams) -> float:
    """m = min{A^{2/num_α}, B^{2/num_β}} (apenas para p, q ≥ 0)."""
    if params.p < 0 or params.q < 0:
        raise UnsupportedRangeError("Limiar de Liouville disponível somente para p, q ≥ 0.")
    A, B = system_constants(params, BarrierKind.SUPER)
    return float(min(A ** (2.0 / params.num_alpha), B ** (2.0 / params.num_beta)))


def exact_growth_ratio(params: SystemParams, combine: str = "max") -> float:
    """
    |x|^{−κ}·|(u,v)| da solução inteira exata: combinação 'max' ou 'sum'
    de A^{2/num_α} e B^{2/num_β}.
    """
    A, B = system_constants(params, BarrierKind.SUPER)
    a, b = A ** (2.0 / params.num_alpha), B ** (2.0 / params.num_beta)
    if combine == "max":
        return float(max(a, b))
    if combine == "sum":
        return float(a + b)
    raise ArgumentError(f"Combinação desconhecida: {combine}")


def barrier_offset(params: SystemParams, R: float, S_R: float, m: Optional[float] = None) -> float:
    """ρ = R − (S_R/m)^{D/2}: raio do núcleo da barreira de comparação em B_R."""
    if m is None:
        m = liouville_threshold(params)
    if S_R < 0 or m <= 0:
        raise ArgumentError("Exige S_R ≥ 0 e m > 0.")
    return float(R - (S_R / m) ** (params.denom / 2.0))


def dead_core_bracket(params: SystemParams, R: float, bc: Sequence[float]) -> Tuple[float, float]:
    """
    Raios (ρ_inf, ρ_sup) implicados pelas barreiras deslocadas com dado bc em R.

    A super-barreira usa as constantes com (n+α−2) e Λ; a sub-barreira,
    válida para o perfil deslocado, usa a geometria unidimensional e λ.
    O núcleo morto numérico deve ficar em [ρ_inf, ρ_sup] (ambos truncados em 0).
    """
    bc_u, bc_v = float(bc[0]), float(bc[1])
    if bc_u < 0 or bc_v < 0:
        raise ArgumentError("Dado de fronteira negativo.")
    ex = system_exponents(params)
    A, B = _constants_for(params, ex.alpha_u, ex.beta_v, params.ell_hi, params.n)
    A1, B1 = _constants_for(params, ex.alpha_u, ex.beta_v, params.ell_lo, 1)

    reach_super = max((bc_u / A) ** (1 / ex.alpha_u), (bc_v / B) ** (1 / ex.beta_v))
    reach_sub = min((bc_u / A1) ** (1 / ex.alpha_u), (bc_v / B1) ** (1 / ex.beta_v))
    return max(R - reach_super, 0.0), max(R - reach_sub, 0.0)
