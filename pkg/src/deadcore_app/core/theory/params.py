# src\deadcore_app\core\theory\params.py

"""
Validação de parâmetros e toda a álgebra fechada de expoentes.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

from ..utils.errors import AdmissibilityWarning, ArgumentError, ParameterDomainError


@dataclass(frozen=True)
class SystemParams:
    """
    Parâmetros do sistema |Du|^p F(D²u) = v₊^λ₁, |Dv|^q G(D²v) = u₊^λ₂.
    """
    p: float
    q: float
    lambda1: float
    lambda2: float
    ell_lo: float = 1.0
    ell_hi: float = 1.0
    n: int = 2

    def __post_init__(self):
        if not (self.p > -1 and self.q > -1):
            raise ParameterDomainError(f"Exige p > -1 e q > -1 (p={self.p}, q={self.q}).")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ParameterDomainError("Ordens de reação λ₁, λ₂ devem ser ≥ 0.")
        if not (self.lambda1 * self.lambda2 < (1 + self.p) * (1 + self.q)):
            raise ParameterDomainError(
                f"Exige λ₁λ₂ < (1+p)(1+q): {self.lambda1 * self.lambda2} ≥ {(1 + self.p) * (1 + self.q)}."
            )
        _check_ellipticity(self.ell_lo, self.ell_hi)
        _check_dimension(self.n)

    @property
    def denom(self) -> float:
        return (1 + self.p) * (1 + self.q) - self.lambda1 * self.lambda2

    @property
    def num_alpha(self) -> float:
        return (1 + self.q) * (2 + self.p) + self.lambda1 * (2 + self.q)

    @property
    def num_beta(self) -> float:
        return (1 + self.p) * (2 + self.q) + self.lambda2 * (2 + self.p)


@dataclass(frozen=True)
class HenonParams:
    """
    Parâmetros da equação de Hénon |Du|^p F(D²u) = |x|^α u₊^μ.

    critical=True admite μ = 1+p (apenas para o princípio do máximo forte).
    """
    p: float
    mu: float
    alpha: float
    ell_lo: float = 1.0
    ell_hi: float = 1.0
    n: int = 2
    critical: bool = False

    def __post_init__(self):
        if self.p < 0:
            raise ParameterDomainError(f"Hénon exige p ≥ 0 (p={self.p}).")
        if self.mu < 0:
            raise ParameterDomainError("Ordem de absorção μ deve ser ≥ 0.")
        if self.critical:
            if self.mu > 1 + self.p:
                raise ParameterDomainError("Caso crítico exige μ ≤ 1+p.")
        elif not (self.mu < 1 + self.p):
            raise ParameterDomainError(f"Exige μ < 1+p (μ={self.mu}, p={self.p}).")
        if self.alpha < 0:
            raise ParameterDomainError("Expoente do peso α deve ser ≥ 0.")
        if self.alpha == 0:
            warnings.warn(
                "α = 0 admitido apenas para testes de degeneração (hipótese exige α > 0).",
                AdmissibilityWarning,
                stacklevel=3,
            )
        _check_ellipticity(self.ell_lo, self.ell_hi)
        _check_dimension(self.n)

    @property
    def is_critical(self) -> bool:
        return self.mu == 1 + self.p


@dataclass(frozen=True)
class ExponentBundle:
    alpha_u: float
    beta_v: float
    kappa: float
    grad_u: float
    grad_v: float
    denom: float


def _check_ellipticity(ell_lo: float, ell_hi: float):
    if not (0 < ell_lo <= ell_hi):
        raise ParameterDomainError(f"Exige 0 < λ ≤ Λ (λ={ell_lo}, Λ={ell_hi}).")


def _check_dimension(n: int):
    if int(n) != n or n < 1:
        raise ParameterDomainError(f"Dimensão n deve ser inteiro ≥ 1 (n={n}).")


def system_exponents(params: SystemParams) -> ExponentBundle:
    """Expoentes ótimos α, β, κ e os expoentes de gradiente do sistema."""
    p, q, l1, l2 = params.p, params.q, params.lambda1, params.lambda2
    D = params.denom
    if not D > 0:
        raise ParameterDomainError("D = (1+p)(1+q) − λ₁λ₂ deve ser positivo.")

    return ExponentBundle(
        alpha_u=params.num_alpha / D,
        beta_v=params.num_beta / D,
        kappa=2.0 / D,
        grad_u=((1 + q) + l1 * (2 + q + l2)) / D,
        grad_v=((1 + p) + l2 * (2 + p + l1)) / D,
        denom=D,
    )


def henon_exponents(params: HenonParams) -> Tuple[float, float]:
    """Retorna (β_H, expoente de gradiente) da equação de Hénon."""
    gap = 1 + params.p - params.mu
    if not gap > 0:
        raise ParameterDomainError("μ ≥ 1+p: expoentes de Hénon indefinidos.")
    beta_h = (2 + params.p + params.alpha) / gap
    grad_h = (1 + params.alpha + params.mu) / gap
    return beta_h, grad_h


def multi_term_regularity(terms: Sequence[Tuple[float, float]], g_terms: Sequence[float], p: float) -> float:
    """
    Regularidade prevista para o modelo com vários termos:
    min_i {(2+p+α_i)/(1+p−μ_i)} ∪ {(2+p+l_i)/(1+p)}.
    """
    if not terms:
        raise ArgumentError("Lista de termos vazia.")
    if p < 0:
        raise ParameterDomainError("Exige p ≥ 0.")

    candidates = []
    for alpha_i, mu_i in terms:
        if alpha_i < 0 or not (0 <= mu_i < 1 + p):
            raise ParameterDomainError(f"Termo inválido (α={alpha_i}, μ={mu_i}).")
        candidates.append((2 + p + alpha_i) / (1 + p - mu_i))
    for l_i in g_terms:
        if l_i < 0:
            raise ParameterDomainError(f"Expoente l_i inválido ({l_i}).")
        candidates.append((2 + p + l_i) / (1 + p))

    return min(candidates)


def critical_decay_regime(params: HenonParams) -> Tuple[float, str]:
    """
    τ = (1+α+μ)/(1+p−μ) e o regime de decaimento nos pontos críticos:
    'sublinear' (τ<1), 'linear' (τ=1) ou 'superlinear' (τ>1).
    """
    _, tau = henon_exponents(params)
    if math.isclose(tau, 1.0, rel_tol=1e-12, abs_tol=1e-14):
        return tau, "linear"
    return tau, ("sublinear" if tau < 1 else "superlinear")


class OperatorKind(str, Enum):
    """Operadores elípticos modelados."""
    TRACE = "trace"
    PUCCI_PLUS = "pucci_plus"
    PUCCI_MINUS = "pucci_minus"


class BarrierKind(str, Enum):
    """Constantes de super-solução (Λ) ou sub-solução (λ)."""
    SUPER = "super"
    SUB = "sub"
