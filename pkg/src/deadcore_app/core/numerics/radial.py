# src\deadcore_app\core\numerics\radial.py

"""
Solver 1D de alta precisão para problemas radiais (sistema de núcleo morto e
Hénon) em qualquer dimensão n. Serve de oráculo para o solver 2D.
"""

import numpy as np
import scipy.sparse as sp
from dataclasses import dataclass, field
from scipy.linalg import solve_banded
from scipy.sparse.linalg import spsolve
from typing import Callable, List, Optional, Sequence, Tuple, Union

from ..theory.params import HenonParams, SystemParams
from ..utils.calculus import NumericCalculator
from ..utils.errors import ArgumentError, FitUnavailableError, NonConvergenceError, ParameterDomainError


@dataclass
class RadialDiagnostics:
    iterations: int = 0
    residual: float = float("inf")
    residual_history: List[float] = field(default_factory=list)
    method: str = "newton"
    converged: bool = False


@dataclass
class RadialProfile:
    """Perfil radial discreto; v_vals é None nas execuções de Hénon."""
    r_nodes: np.ndarray
    u_vals: np.ndarray
    v_vals: Optional[np.ndarray]
    params: Union[SystemParams, HenonParams]
    diagnostics: RadialDiagnostics = field(default_factory=RadialDiagnostics)

    @property
    def R(self) -> float:
        return float(self.r_nodes[-1])

    @property
    def h(self) -> float:
        return float(self.r_nodes[1] - self.r_nodes[0])

    def magnitude(self) -> np.ndarray:
        """Maior das componentes; a própria u para Hénon."""
        if self.v_vals is None:
            return self.u_vals
        return np.maximum(self.u_vals, self.v_vals)


@dataclass
class RadialSolverConfig:
    method: str = "newton"              # "newton" ou "picard"
    damping: Optional[float] = None     # None: 1.0 (newton) / 0.7 (picard)
    delta: Optional[float] = None       # None: δ = h
    fb_factor: float = 10.0             # limiar do núcleo morto: fb_factor·eps·escala
    jacobian_floor: float = 1e-12       # piso relativo da derivada da reação
    line_search_steps: int = 8
    log_every: int = 10

    def resolved_damping(self) -> float:
        if self.damping is not None:
            if not 0 < self.damping <= 1:
                raise ArgumentError("Amortecimento deve estar em (0, 1].")
            return self.damping
        return 1.0 if self.method == "newton" else 0.7


class RadialSolver:
    """
    Resolve, em r ∈ [0, R] com u′(0) = 0 e Dirichlet em R,
        Λ|u′|_δ^p (u″ + (n−1)u′/r) = reação,
    por Newton amortecido (acoplado) ou Picard em blocos com sistemas tridiagonais.
    Na origem usa-se o limite u″ + (n−1)u′/r → n·u″.
    """
    MIN_NODES = 100

    def __init__(self, config: Optional[RadialSolverConfig] = None):
        self.config = config or RadialSolverConfig()
        if self.config.method not in ("newton", "picard"):
            raise ArgumentError(f"Método radial desconhecido: {self.config.method}")

    # --- Discretização ---

    @staticmethod
    def _grid(R: float, N: int) -> np.ndarray:
        if R <= 0:
            raise ArgumentError("Raio R deve ser positivo.")
        if N < RadialSolver.MIN_NODES:
            raise ArgumentError(f"Exige N ≥ {RadialSolver.MIN_NODES} nós.")
        return np.linspace(0.0, R, N)

    @staticmethod
    def _operator_matrices(r: np.ndarray, n: int) -> Tuple[sp.csr_matrix, sp.csr_matrix]:
        """
        L (Laplaciano radial) e D (derivada centrada) nas linhas 0..N−2;
        a última linha (Dirichlet) fica nula.
        """
        N = r.size
        h = r[1] - r[0]
        lower = np.zeros(N - 1)
        diag = np.zeros(N)
        upper = np.zeros(N - 1)

        # origem: n·u″(0) com u_{-1} = u_1
        diag[0] = -2.0 * n / h ** 2
        upper[0] = 2.0 * n / h ** 2

        i = np.arange(1, N - 1)
        drift = (n - 1) / (2.0 * h * r[i])
        lower[i - 1] = 1.0 / h ** 2 - drift
        diag[i] = -2.0 / h ** 2
        upper[i] = 1.0 / h ** 2 + drift
        L = sp.diags([lower, diag, upper], [-1, 0, 1], format="csr")

        d_lower = np.zeros(N - 1)
        d_upper = np.zeros(N - 1)
        d_lower[i - 1] = -1.0 / (2.0 * h)
        d_upper[i] = 1.0 / (2.0 * h)
        D = sp.diags([d_lower, d_upper], [-1, 1], format="csr")
        return L, D

    def _delta(self, h: float, power: float) -> float:
        delta = self.config.delta if self.config.delta is not None else h
        if power < 0 and delta < h:
            raise ParameterDomainError("Regime singular exige δ ≥ h.")
        return delta

    @staticmethod
    def _factor(g: np.ndarray, power: float, delta: float) -> Tuple[np.ndarray, np.ndarray]:
        """(g² + δ²)^{p/2} e sua derivada em relação a g."""
        if power == 0:
            return np.ones_like(g), np.zeros_like(g)
        base = g * g + delta * delta
        return base ** (0.5 * power), power * base ** (0.5 * power - 1.0) * g

    # --- Sistema ---

    def solve_system(self, params: SystemParams, R: float, bc: Sequence[float], N: int,
                     tol: float, max_iter: int) -> RadialProfile:
        bc_u, bc_v = float(bc[0]), float(bc[1])
        if bc_u < 0 or bc_v < 0:
            raise ArgumentError("Dado de fronteira negativo.")

        r = self._grid(R, N)
        L, D = self._operator_matrices(r, params.n)
        h = r[1] - r[0]
        delta_u = self._delta(h, params.p)
        delta_v = self._delta(h, params.q)
        scale = params.ell_hi
        floor = self.config.jacobian_floor * max(bc_u, bc_v, np.finfo(float).tiny)
        pw = NumericCalculator.positive_power
        dpw = NumericCalculator.positive_power_derivative

        def residuals(u, v):
            au, _ = self._factor(D @ u, params.p, delta_u)
            av, _ = self._factor(D @ v, params.q, delta_v)
            ru = scale * au * (L @ u) - pw(v, params.lambda1)
            rv = scale * av * (L @ v) - pw(u, params.lambda2)
            ru[-1] = rv[-1] = 0.0
            return ru, rv

        u = bc_u * r / R
        v = bc_v * r / R
        print(f"  Radial: sistema n={params.n}, N={N}, método={self.config.method}")

        if self.config.method == "picard":
            return self._picard_system(params, r, L, D, u, v, residuals, (delta_u, delta_v),
                                       scale, tol, max_iter)

        def jacobian(u, v):
            Lu, Lv = L @ u, L @ v
            au, dau = self._factor(D @ u, params.p, delta_u)
            av, dav = self._factor(D @ v, params.q, delta_v)
            Juu = scale * (sp.diags(au) @ L + sp.diags(Lu * dau) @ D)
            Jvv = scale * (sp.diags(av) @ L + sp.diags(Lv * dav) @ D)
            Juv = -sp.diags(dpw(v, params.lambda1, floor))
            Jvu = -sp.diags(dpw(u, params.lambda2, floor))
            J = sp.bmat([[Juu, Juv], [Jvu, Jvv]], format="lil")
            for row in (N - 1, 2 * N - 1):
                J.rows[row] = [row]
                J.data[row] = [1.0]
            return J.tocsc()

        def stack_residual(w):
            ru, rv = residuals(w[:N], w[N:])
            return np.concatenate([ru, rv])

        w, diag = self._newton(np.concatenate([u, v]), stack_residual,
                               lambda w: jacobian(w[:N], w[N:]), tol, max_iter, project=True)
        return RadialProfile(r, w[:N], w[N:], params, diag)

    def _picard_system(self, params, r, L, D, u, v, residuals, deltas, scale, tol, max_iter):
        theta = self.config.resolved_damping()
        pw = NumericCalculator.positive_power
        diag = RadialDiagnostics(method="picard")
        bc_u, bc_v = u[-1], v[-1]

        for it in range(max_iter + 1):
            ru, rv = residuals(u, v)
            res = float(max(np.abs(ru).max(), np.abs(rv).max()))
            diag.residual_history.append(res)
            diag.iterations, diag.residual = it, res
            if it % self.config.log_every == 0:
                print(f"  Radial: iteração {it}, resíduo={res:.3e}")
            if res <= tol:
                diag.converged = True
                break
            if it == max_iter:
                break

            au, _ = self._factor(D @ u, params.p, deltas[0])
            u_new = self._tridiagonal_solve(scale * au, L, pw(v, params.lambda1), bc_u)
            u = np.maximum((1 - theta) * u + theta * u_new, 0.0)

            av, _ = self._factor(D @ v, params.q, deltas[1])
            v_new = self._tridiagonal_solve(scale * av, L, pw(u, params.lambda2), bc_v)
            v = np.maximum((1 - theta) * v + theta * v_new, 0.0)

        if not diag.converged:
            raise NonConvergenceError("Picard radial não convergiu", diag.residual, diag.residual_history)
        print(f"  Radial: convergiu em {diag.iterations} iterações (resíduo={diag.residual:.3e})")
        return RadialProfile(r, u, v, params, diag)

    @staticmethod
    def _tridiagonal_solve(row_scale: np.ndarray, L: sp.csr_matrix, rhs: np.ndarray, bc: float) -> np.ndarray:
        """Resolve diag(row_scale)·L·w = rhs com w(R) = bc (forma em banda)."""
        N = rhs.size
        M = sp.diags(row_scale) @ L
        ab = np.zeros((3, N))
        ab[0, 1:] = M.diagonal(1)
        ab[1, :] = M.diagonal(0)
        ab[2, :-1] = M.diagonal(-1)
        b = rhs.copy()
        ab[1, -1], ab[2, -2], b[-1] = 1.0, 0.0, bc
        return solve_banded((1, 1), ab, b)

    # --- Hénon ---

    def solve_henon(self, params: HenonParams, R: float, bc: float, N: int, tol: float,
                    max_iter: int, epsilon: float = 0.0) -> RadialProfile:
        if not params.mu < 1 + params.p:
            raise ParameterDomainError("Solver radial de Hénon exige μ < 1+p.")
        if bc < 0:
            raise ArgumentError("Dado de fronteira negativo.")

        r = self._grid(R, N)
        L, D = self._operator_matrices(r, params.n)
        h = r[1] - r[0]
        delta = self._delta(h, params.p)
        scale = params.ell_hi
        weight = r ** params.alpha
        floor = self.config.jacobian_floor * max(bc, np.finfo(float).tiny)
        pw = NumericCalculator.positive_power
        dpw = NumericCalculator.positive_power_derivative
        print(f"  Radial: Hénon n={params.n}, N={N}, método={self.config.method}")

        def residual(u):
            a, _ = self._factor(D @ u, params.p, delta)
            res = scale * a * (L @ u) - weight * pw(u, params.mu) - epsilon
            res[-1] = 0.0
            return res

        def jacobian(u):
            a, da = self._factor(D @ u, params.p, delta)
            J = scale * (sp.diags(a) @ L + sp.diags((L @ u) * da) @ D) - sp.diags(weight * dpw(u, params.mu, floor))
            J = J.tolil()
            J.rows[N - 1] = [N - 1]
            J.data[N - 1] = [1.0]
            return J.tocsc()

        u0 = bc * r / R
        if self.config.method == "picard":
            u, diag = self._picard_scalar(u0, residual, D, L, params, delta, scale, weight, epsilon, tol, max_iter)
        else:
            u, diag = self._newton(u0, residual, jacobian, tol, max_iter, project=(epsilon == 0.0))
        return RadialProfile(r, u, None, params, diag)

    def _picard_scalar(self, u, residual, D, L, params, delta, scale, weight, epsilon, tol, max_iter):
        theta = self.config.resolved_damping()
        diag = RadialDiagnostics(method="picard")
        bc = u[-1]
        for it in range(max_iter + 1):
            res = float(np.abs(residual(u)).max())
            diag.residual_history.append(res)
            diag.iterations, diag.residual = it, res
            if res <= tol:
                diag.converged = True
                break
            if it == max_iter:
                break
            a, _ = self._factor(D @ u, params.p, delta)
            rhs = weight * NumericCalculator.positive_power(u, params.mu) + epsilon
            u_new = self._tridiagonal_solve(scale * a, L, rhs, bc)
            u = (1 - theta) * u + theta * u_new
            if epsilon == 0.0:
                u = np.maximum(u, 0.0)
        if not diag.converged:
            raise NonConvergenceError("Picard radial não convergiu", diag.residual, diag.residual_history)
        return u, diag

    # --- Newton amortecido ---

    def _newton(self, w: np.ndarray, residual: Callable, jacobian: Callable, tol: float,
                max_iter: int, project: bool) -> Tuple[np.ndarray, RadialDiagnostics]:
        theta = self.config.resolved_damping()
        diag = RadialDiagnostics(method="newton")
        R = residual(w)
        res = float(np.abs(R).max())

        for it in range(max_iter + 1):
            diag.residual_history.append(res)
            diag.iterations, diag.residual = it, res
            if it % self.config.log_every == 0:
                print(f"  Radial: iteração {it}, resíduo={res:.3e}")
            if res <= tol:
                diag.converged = True
                break
            if it == max_iter:
                break

            step = spsolve(jacobian(w), -R)
            best = None
            t = theta
            for _ in range(self.config.line_search_steps):
                trial = w + t * step
                if project:
                    trial = np.maximum(trial, 0.0)
                trial_R = residual(trial)
                trial_res = float(np.abs(trial_R).max())
                if best is None or trial_res < best[2]:
                    best = (trial, trial_R, trial_res)
                if trial_res < res:
                    break
                t *= 0.5
            w, R, res = best

        if not diag.converged:
            raise NonConvergenceError("Newton radial não convergiu", diag.residual, diag.residual_history)
        print(f"  Radial: convergiu em {diag.iterations} iterações (resíduo={diag.residual:.3e})")
        return w, diag


def solve_radial_system(params: SystemParams, R: float, bc: Sequence[float], N: int, tol: float = 1e-10,
                        max_iter: int = 100, config: Optional[RadialSolverConfig] = None) -> RadialProfile:
    return RadialSolver(config).solve_system(params, R, bc, N, tol, max_iter)


def solve_radial_henon(params: HenonParams, R: float, bc: float, N: int, tol: float = 1e-10,
                       max_iter: int = 100, config: Optional[RadialSolverConfig] = None) -> RadialProfile:
    return RadialSolver(config).solve_henon(params, R, bc, N, tol, max_iter)


def detect_free_boundary(profile: RadialProfile, fb_factor: float = 10.0) -> Optional[float]:
    """
    Raio ρ do núcleo morto: primeiro nó (de R para dentro) em que a magnitude
    fica abaixo de fb_factor·eps·escala. None se o perfil for estritamente positivo.
    """
    mag = profile.magnitude()
    scale = float(np.max(np.abs(mag))) if mag.size else 0.0
    threshold = fb_factor * NumericCalculator.MACHINE_EPS * scale
    below = np.flatnonzero(mag < threshold)
    if below.size == 0:
        return None
    return float(profile.r_nodes[below.max()])


def fit_growth_radial(profile: RadialProfile, expected: float, fb_factor: float = 10.0,
                      min_nodes: int = 8) -> Tuple[float, float]:
    """
    Inclinação de log u × log(r − ρ) na janela (ρ, 2ρ]; retorna (slope, r²).
    """
    rho = detect_free_boundary(profile, fb_factor)
    if rho is None:
        raise FitUnavailableError("Nenhuma fronteira livre detectada (perfil estritamente positivo).")

    r = profile.r_nodes
    u = profile.magnitude()
    window = (r > rho) & (r <= 2 * rho) & (u > 0)
    if np.count_nonzero(window) < min_nodes:
        raise FitUnavailableError(
            f"Janela (ρ, 2ρ] com ρ={rho:.4g} tem menos de {min_nodes} nós utilizáveis."
        )
    slope, _, r2 = NumericCalculator.loglog_fit(r[window] - rho, u[window])
    print(f"  Radial: inclinação={slope:.5f} (esperado {expected:.5f}, desvio {slope - expected:+.2e}), r²={r2:.6f}")
    return slope, r2
