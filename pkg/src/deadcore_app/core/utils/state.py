# src\deadcore_app\core\utils\state.py

import numpy as np
from dataclasses import dataclass
from typing import Tuple

from .errors import ShapeError


@dataclass
class Field:
    """
    Função escalar amostrada numa grade uniforme N×N.

    values[i, j] corresponde ao ponto (origin[0] + i*h, origin[1] + j*h).
    domain_mask marca o interior do disco/caixa; o complemento é a camada
    de fronteira onde o dado de Dirichlet é imposto.
    """
    values: np.ndarray
    h: float
    domain_mask: np.ndarray
    origin: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.domain_mask = np.asarray(self.domain_mask, dtype=bool)

        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ShapeError(f"Campo deve ser N×N, recebido {self.values.shape}.")
        if self.values.shape[0] < 5:
            raise ShapeError("Campo precisa de N ≥ 5.")
        if self.domain_mask.shape != self.values.shape:
            raise ShapeError("Máscara de domínio com formato diferente dos valores.")
        if self.h <= 0:
            raise ShapeError("Espaçamento h deve ser positivo.")

        # Interior com vizinhança 3×3 completa: anel externo fora do domínio
        ring = np.zeros_like(self.domain_mask)
        ring[0, :] = ring[-1, :] = ring[:, 0] = ring[:, -1] = True
        if np.any(self.domain_mask & ring):
            raise ShapeError("Pontos do domínio no anel externo da grade (sem vizinhos).")

        self.origin = (float(self.origin[0]), float(self.origin[1]))

    @property
    def N(self) -> int:
        return self.values.shape[0]

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """Retorna as malhas X, Y (indexação 'ij')."""
        axis = np.arange(self.N) * self.h
        return np.meshgrid(self.origin[0] + axis, self.origin[1] + axis, indexing="ij")

    def point(self, idx: Tuple[int, int]) -> np.ndarray:
        i, j = idx
        return np.array([self.origin[0] + i * self.h, self.origin[1] + j * self.h])

    def same_grid(self, other: "Field") -> bool:
        return (
            self.values.shape == other.values.shape
            and np.isclose(self.h, other.h, rtol=1e-12, atol=0.0)
            and np.allclose(self.origin, other.origin, rtol=0.0, atol=1e-12)
            and np.array_equal(self.domain_mask, other.domain_mask)
        )

    def require_same_grid(self, other: "Field", what: str = "campos"):
        if not self.same_grid(other):
            raise ShapeError(f"Grades incompatíveis entre {what}.")

    def with_values(self, values: np.ndarray) -> "Field":
        """Novo Field na mesma grade com outros valores."""
        return Field(np.array(values, dtype=float), self.h, self.domain_mask.copy(), self.origin)

    def copy(self) -> "Field":
        return Field(self.values.copy(), self.h, self.domain_mask.copy(), self.origin)
