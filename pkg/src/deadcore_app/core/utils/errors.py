# src\deadcore_app\core\utils\errors.py

"""
Hierarquia de erros do laboratório.

Erros de uso/validação herdam de ValueError (código de saída 2);
falhas numéricas herdam de RuntimeError via NumericalFailure (código 1).
"""

from typing import List, Optional


class AdmissibilityWarning(UserWarning):
    """Parâmetro aceito fora da hipótese estrita do modelo (ex.: α = 0)."""


# --- Erros de uso / validação ---

class ParameterDomainError(ValueError):
    pass


class ArgumentError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class StencilUnavailableError(ValueError):
    pass


class DegenerateGeometryError(ValueError):
    pass


class UnsupportedRangeError(ValueError):
    pass


class ResolutionError(ValueError):
    pass


class DomainError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class DeadCoreEvaluationError(ValueError):
    pass


# --- Falhas numéricas ---

class NumericalFailure(RuntimeError):
    pass


class NonConvergenceError(NumericalFailure):
    """Limite de iterações atingido; carrega o último resíduo."""

    def __init__(self, message: str, last_residual: float, history: Optional[List[float]] = None):
        super().__init__(f"{message} (último resíduo = {last_residual:.3e})")
        self.last_residual = last_residual
        self.history = history or []


class InstabilityError(NumericalFailure):
    pass


class FitUnavailableError(NumericalFailure):
    pass


class ComparisonViolationError(NumericalFailure):
    pass


class ResidualCheckError(NumericalFailure):
    pass
