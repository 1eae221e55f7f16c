# src\deadcore_app\core\utils\factory.py

import numpy as np
from typing import Callable, Optional, Union

from .state import Field
from .errors import ArgumentError, ShapeError

BoundaryData = Union[float, Callable[[np.ndarray, np.ndarray], np.ndarray], Field]


class FieldFactory:
    """
    Classe utilitária para criar campos em grades sobre discos.
    """
    DEFAULT_N = 257

    @staticmethod
    def disk(N: int = DEFAULT_N, radius: float = 1.0, center=(0.0, 0.0)) -> Field:
        """
        Grade N×N sobre a caixa [c-R, c+R]² com máscara do disco aberto
        (pontos do anel externo nunca são interiores).
        """
        if N < 5:
            raise ShapeError("A grade precisa de N ≥ 5.")
        if radius <= 0:
            raise ArgumentError("Raio do domínio deve ser positivo.")

        h = 2.0 * radius / (N - 1)
        origin = (center[0] - radius, center[1] - radius)
        axis = np.arange(N) * h
        X, Y = np.meshgrid(origin[0] + axis, origin[1] + axis, indexing="ij")
        mask = (X - center[0]) ** 2 + (Y - center[1]) ** 2 < radius ** 2 * (1.0 - 1e-12)
        mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = False

        return Field(np.zeros((N, N)), h, mask, origin)

    @staticmethod
    def box(N: int, half_width: float = 1.0) -> Field:
        """Grade sobre a caixa com o anel externo como fronteira."""
        h = 2.0 * half_width / (N - 1)
        mask = np.zeros((N, N), dtype=bool)
        mask[1:-1, 1:-1] = True
        return Field(np.zeros((N, N)), h, mask, (-half_width, -half_width))

    @staticmethod
    def sample(template: Field, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> Field:
        """Amostra fn(X, Y) (vetorizada) em todos os nós da grade."""
        X, Y = template.coordinates()
        values = np.broadcast_to(np.asarray(fn(X, Y), dtype=float), X.shape)
        return template.with_values(values)

    @staticmethod
    def radial(template: Field, profile: Callable[[np.ndarray], np.ndarray], center=(0.0, 0.0)) -> Field:
        """Amostra um perfil radial r ↦ profile(r) centrado em `center`."""
        X, Y = template.coordinates()
        r = np.hypot(X - center[0], Y - center[1])
        return template.with_values(profile(r))

    @staticmethod
    def boundary_values(template: Field, bc: BoundaryData) -> np.ndarray:
        """
        Converte o dado de fronteira (constante, função ou Field) em um array
        N×N; somente os nós fora da máscara são usados pelos solvers.
        """
        if isinstance(bc, Field):
            template.require_same_grid(bc, "dado de fronteira e grade")
            return bc.values.copy()
        if callable(bc):
            X, Y = template.coordinates()
            return np.broadcast_to(np.asarray(bc(X, Y), dtype=float), X.shape).copy()
        return np.full(template.values.shape, float(bc))

    @staticmethod
    def initial_guess(template: Field, boundary: np.ndarray, radius: Optional[float] = None) -> np.ndarray:
        """
        Iterado inicial: interpolação linear em |x| entre 0 no centro e o dado
        de fronteira, mantendo os valores de Dirichlet na camada externa.
        """
        X, Y = template.coordinates()
        center = (template.origin[0] + 0.5 * (template.N - 1) * template.h,
                  template.origin[1] + 0.5 * (template.N - 1) * template.h)
        R = radius if radius is not None else 0.5 * (template.N - 1) * template.h
        r = np.hypot(X - center[0], Y - center[1])
        guess = np.clip(r / R, 0.0, 1.0) * boundary
        guess[~template.domain_mask] = boundary[~template.domain_mask]
        return guess
