# src\deadcore_app\core\numerics\operators.py

"""
Operadores discretos sobre campos: gradiente, Hessiana por diferenças
centradas, operadores extremais de Pucci, operador traço e a lei de
degenerescência regularizada (|∇u|² + δ²)^{p/2}.
"""

import numpy as np
import scipy.sparse as sp
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

from ..theory.params import OperatorKind
from ..utils.errors import ParameterDomainError, ShapeError, StencilUnavailableError
from ..utils.state import Field

CoefficientField = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class OperatorSpec:
    """
    Operador uniformemente elíptico com constantes [λ, Λ].

    coefficient_field (apenas para kind=trace) recebe X, Y e devolve um array
    com formato X.shape + (2, 2); ausente significa a identidade.
    """
    kind: OperatorKind = OperatorKind.TRACE
    ell_lo: float = 1.0
    ell_hi: float = 1.0
    coefficient_field: Optional[CoefficientField] = None

    # Tolerância na verificação do espectro dos coeficientes
    SPECTRUM_TOL = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        if not (0 < self.ell_lo <= self.ell_hi):
            raise ParameterDomainError(f"Exige 0 < λ ≤ Λ (λ={self.ell_lo}, Λ={self.ell_hi}).")
        if self.coefficient_field is not None and self.kind is not OperatorKind.TRACE:
            raise ParameterDomainError("Campo de coeficientes só se aplica ao operador traço.")

    def sample_coefficients(self, X: np.ndarray, Y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Retorna (a11, a12, a22) amostrados por ponto, com espectro validado."""
        if self.coefficient_field is None:
            ones = np.ones_like(X, dtype=float)
            return ones, np.zeros_like(ones), ones.copy()

        A = np.asarray(self.coefficient_field(X, Y), dtype=float)
        if A.shape != X.shape + (2, 2):
            raise ShapeError(f"Campo de coeficientes deve ter formato {X.shape + (2, 2)}, recebido {A.shape}.")
        if not np.allclose(A[..., 0, 1], A[..., 1, 0], rtol=0.0, atol=self.SPECTRUM_TOL):
            raise ParameterDomainError("Matriz de coeficientes não simétrica.")

        eig = np.linalg.eigvalsh(A)
        slack = self.SPECTRUM_TOL * self.ell_hi
        if eig.min() < self.ell_lo - slack or eig.max() > self.ell_hi + slack:
            raise ParameterDomainError(
                f"Espectro dos coeficientes [{eig.min():.4g}, {eig.max():.4g}] fora de [λ, Λ]."
            )
        return A[..., 0, 0], A[..., 0, 1], A[..., 1, 1]


# --- Diferenças finitas ---

def hessian(field: Field, idx: Tuple[int, int]) -> np.ndarray:
    """Hessiana 2×2 por diferenças centradas no índice `idx`."""
    i, j = idx
    N = field.N
    if not (1 <= i <= N - 2 and 1 <= j <= N - 2):
        raise StencilUnavailableError(f"Índice {idx} sem vizinhança 3×3 completa.")

    u = field.values
    h2 = field.h ** 2
    uxx = (u[i + 1, j] - 2 * u[i, j] + u[i - 1, j]) / h2
    uyy = (u[i, j + 1] - 2 * u[i, j] + u[i, j - 1]) / h2
    uxy = (u[i + 1, j + 1] - u[i + 1, j - 1] - u[i - 1, j + 1] + u[i - 1, j - 1]) / (4 * h2)
    return np.array([[uxx, uxy], [uxy, uyy]])


def hessian_field(values: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(uxx, uxy, uyy) em toda a grade; o anel externo recebe 0."""
    u = values
    h2 = h * h
    uxx = np.zeros_like(u)
    uxy = np.zeros_like(u)
    uyy = np.zeros_like(u)
    uxx[1:-1, 1:-1] = (u[2:, 1:-1] - 2 * u[1:-1, 1:-1] + u[:-2, 1:-1]) / h2
    uyy[1:-1, 1:-1] = (u[1:-1, 2:] - 2 * u[1:-1, 1:-1] + u[1:-1, :-2]) / h2
    uxy[1:-1, 1:-1] = (u[2:, 2:] - u[2:, :-2] - u[:-2, 2:] + u[:-2, :-2]) / (4 * h2)
    return uxx, uxy, uyy


def gradient_field(values: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
    """Gradiente por diferenças centradas; o anel externo recebe 0."""
    u = values
    ux = np.zeros_like(u)
    uy = np.zeros_like(u)
    ux[1:-1, 1:-1] = (u[2:, 1:-1] - u[:-2, 1:-1]) / (2 * h)
    uy[1:-1, 1:-1] = (u[1:-1, 2:] - u[1:-1, :-2]) / (2 * h)
    return ux, uy


# --- Operadores ---

def policy_coefficients(
    spec: OperatorSpec,
    uxx: np.ndarray,
    uxy: np.ndarray,
    uyy: np.ndarray,
    X: Optional[np.ndarray] = None,
    Y: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Coeficientes (a11, a12, a22) do operador linear que coincide com F na
    Hessiana dada: F(M) = a11·Mxx + 2·a12·Mxy + a22·Myy. Para Pucci é a
    matriz ótima da envoltória (derivada de F em M).
    """
    if spec.kind is OperatorKind.TRACE:
        if X is None or Y is None:
            if spec.coefficient_field is not None:
                raise ShapeError("Operador com coeficientes variáveis exige as coordenadas.")
            ones = np.ones_like(np.asarray(uxx, dtype=float))
            return ones, np.zeros_like(ones), ones.copy()
        return spec.sample_coefficients(X, Y)

    uxx = np.asarray(uxx, dtype=float)
    uxy = np.asarray(uxy, dtype=float)
    uyy = np.asarray(uyy, dtype=float)

    mean = 0.5 * (uxx + uyy)
    radius = np.hypot(0.5 * (uxx - uyy), uxy)
    e1, e2 = mean + radius, mean - radius
    theta = 0.5 * np.arctan2(2 * uxy, uxx - uyy)
    c, s = np.cos(theta), np.sin(theta)

    if spec.kind is OperatorKind.PUCCI_PLUS:
        w1 = np.where(e1 > 0, spec.ell_hi, spec.ell_lo)
        w2 = np.where(e2 > 0, spec.ell_hi, spec.ell_lo)
    else:
        w1 = np.where(e1 > 0, spec.ell_lo, spec.ell_hi)
        w2 = np.where(e2 > 0, spec.ell_lo, spec.ell_hi)

    a11 = w1 * c * c + w2 * s * s
    a22 = w1 * s * s + w2 * c * c
    a12 = (w1 - w2) * c * s
    return a11, a12, a22


def _pucci_value(spec: OperatorSpec, uxx, uxy, uyy) -> np.ndarray:
    mean = 0.5 * (uxx + uyy)
    radius = np.hypot(0.5 * (uxx - uyy), uxy)
    eigs = (mean + radius, mean - radius)
    hi, lo = (spec.ell_hi, spec.ell_lo) if spec.kind is OperatorKind.PUCCI_PLUS else (spec.ell_lo, spec.ell_hi)
    total = np.zeros_like(mean)
    for e in eigs:
        total = total + np.where(e > 0, hi * e, lo * e)
    return total


def apply_operator(spec: OperatorSpec, hess: np.ndarray, x=None) -> float:
    """Avalia F(hess, x): Pucci por autovalores, traço como tr(A(x)·hess)."""
    hess = np.asarray(hess, dtype=float)
    uxx, uxy, uyy = hess[0, 0], 0.5 * (hess[0, 1] + hess[1, 0]), hess[1, 1]

    if spec.kind is OperatorKind.TRACE:
        if spec.coefficient_field is None:
            return float(uxx + uyy)
        point = np.zeros(2) if x is None else np.asarray(x, dtype=float)
        a11, a12, a22 = spec.sample_coefficients(np.array([point[0]]), np.array([point[1]]))
        return float(a11[0] * uxx + 2 * a12[0] * uxy + a22[0] * uyy)

    return float(_pucci_value(spec, np.array(uxx), np.array(uxy), np.array(uyy)))


def operator_field(field: Field, spec: OperatorSpec) -> np.ndarray:
    """F(D²u, x) em toda a grade (anel externo com 0)."""
    uxx, uxy, uyy = hessian_field(field.values, field.h)
    if spec.kind is OperatorKind.TRACE:
        X, Y = field.coordinates() if spec.coefficient_field is not None else (None, None)
        a11, a12, a22 = policy_coefficients(spec, uxx, uxy, uyy, X, Y)
        return a11 * uxx + 2 * a12 * uxy + a22 * uyy
    return _pucci_value(spec, uxx, uxy, uyy)


def degeneracy_factor(ux: np.ndarray, uy: np.ndarray, p: float, delta: float) -> np.ndarray:
    """(|∇u|² + δ²)^{p/2}; identicamente 1 quando p = 0."""
    if p == 0:
        return np.ones_like(ux)
    return (ux * ux + uy * uy + delta * delta) ** (0.5 * p)


def degenerate_residual(
    field: Field,
    spec: OperatorSpec,
    p: float,
    delta: float,
    rhs: Union[Field, np.ndarray],
) -> Field:
    """
    (|∇u|² + δ²)^{p/2}·F(D²u, x) − rhs nos pontos interiores; 0 na fronteira.
    """
    if p < 0 and not delta > 0:
        raise ParameterDomainError("Lei singular (p < 0) exige δ > 0.")

    if isinstance(rhs, Field):
        field.require_same_grid(rhs, "campo e lado direito")
        rhs_values = rhs.values
    else:
        rhs_values = np.asarray(rhs, dtype=float)
        if rhs_values.shape != field.values.shape:
            raise ShapeError("Lado direito com formato diferente do campo.")

    ux, uy = gradient_field(field.values, field.h)
    residual = degeneracy_factor(ux, uy, p, delta) * operator_field(field, spec) - rhs_values
    residual[~field.domain_mask] = 0.0
    return field.with_values(residual)


# --- Montagem esparsa (Jacobianos) ---

def interior_indices(template: Field) -> np.ndarray:
    """Índices lineares (i·N + j) dos pontos interiores."""
    return np.flatnonzero(template.domain_mask.ravel())


def assemble_second_order(
    template: Field,
    a11: np.ndarray,
    a12: np.ndarray,
    a22: np.ndarray,
    row_scale: np.ndarray,
) -> sp.csr_matrix:
    """
    Matriz M×M (M = N²) de u ↦ s·(a11·uxx + 2·a12·uxy + a22·uyy) nas linhas
    interiores; linhas da fronteira nulas.
    """
    N = template.N
    h2 = template.h ** 2
    k = interior_indices(template)
    s = row_scale.ravel()[k]
    c11, c12, c22 = a11.ravel()[k] * s, a12.ravel()[k] * s, a22.ravel()[k] * s

    offsets_weights = [
        (0, -2 * (c11 + c22) / h2),
        (N, c11 / h2),
        (-N, c11 / h2),
        (1, c22 / h2),
        (-1, c22 / h2),
        (N + 1, c12 / (2 * h2)),
        (-N - 1, c12 / (2 * h2)),
        (N - 1, -c12 / (2 * h2)),
        (-N + 1, -c12 / (2 * h2)),
    ]
    return _stencil_matrix(k, offsets_weights, N * N)


def assemble_first_order(template: Field, bx: np.ndarray, by: np.ndarray) -> sp.csr_matrix:
    """Matriz de u ↦ bx·ux + by·uy (diferenças centradas) nas linhas interiores."""
    N = template.N
    h = template.h
    k = interior_indices(template)
    cx, cy = bx.ravel()[k], by.ravel()[k]
    offsets_weights = [
        (N, cx / (2 * h)),
        (-N, -cx / (2 * h)),
        (1, cy / (2 * h)),
        (-1, -cy / (2 * h)),
    ]
    return _stencil_matrix(k, offsets_weights, N * N)


def _stencil_matrix(rows: np.ndarray, offsets_weights, size: int) -> sp.csr_matrix:
    row_parts, col_parts, data_parts = [], [], []
    for offset, weights in offsets_weights:
        row_parts.append(rows)
        col_parts.append(rows + offset)
        data_parts.append(np.broadcast_to(weights, rows.shape))
    return sp.coo_matrix(
        (np.concatenate(data_parts), (np.concatenate(row_parts), np.concatenate(col_parts))),
        shape=(size, size),
    ).tocsr()
