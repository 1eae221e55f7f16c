# src\deadcore_app\core\numerics\gridsolver.py

"""
Solver 2D no disco para o sistema de núcleo morto e para a equação de Hénon,
incluindo a família penalizada (P_ε), a continuação em ε e as verificações de
comparação e de limitação a priori.
"""

import numpy as np
import scipy.sparse as sp
from dataclasses import dataclass, field
from scipy.sparse.linalg import spsolve
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .operators import (
    OperatorSpec,
    assemble_first_order,
    assemble_second_order,
    degenerate_residual,
    gradient_field,
    hessian_field,
    policy_coefficients,
)
from ..theory.params import HenonParams, SystemParams
from ..utils.calculus import NumericCalculator
from ..utils.errors import (
    ArgumentError,
    ComparisonViolationError,
    InstabilityError,
    NonConvergenceError,
    ParameterDomainError,
    ShapeError,
)
from ..utils.factory import BoundaryData, FieldFactory
from ..utils.state import Field


@dataclass
class SolveConfig:
    """
    Configuração dos solvers em grade.

    scheme="newton": passo pseudo-temporal implícito de tamanho infinito
    (Newton amortecido com Jacobiano completo); scheme="explicit": marcha
    pseudo-temporal explícita com passo `pseudo_dt` ("auto" = 0.2·h²/(n·Λ·max(1, max a))).
    """
    epsilon: float = 0.0
    delta: Optional[float] = None
    tol: float = 1e-9
    max_iter: int = 60
    damping: float = 1.0
    pseudo_dt: Union[float, str] = "auto"
    scheme: str = "newton"
    jacobian_floor: float = 1e-12
    line_search_steps: int = 8
    project: Optional[bool] = None
    monotonicity_tol: Optional[float] = None
    dt_refresh: int = 100
    instability_window: int = 50
    log_every: int = 5

    def __post_init__(self):
        if not self.tol > 0:
            raise ArgumentError("Tolerância deve ser positiva.")
        if not 0 < self.damping <= 1:
            raise ArgumentError("Amortecimento deve estar em (0, 1].")
        if self.epsilon < 0:
            raise ArgumentError("Penalização ε deve ser ≥ 0.")
        if self.pseudo_dt != "auto" and not (isinstance(self.pseudo_dt, (int, float)) and self.pseudo_dt > 0):
            raise ArgumentError("pseudo_dt deve ser positivo ou 'auto'.")
        if self.scheme not in ("newton", "explicit"):
            raise ArgumentError(f"Esquema desconhecido: {self.scheme}")
        if self.max_iter < 1:
            raise ArgumentError("max_iter deve ser ≥ 1.")

    @property
    def projects(self) -> bool:
        """Projeção no cone não negativo: por padrão apenas quando ε = 0."""
        return self.epsilon == 0.0 if self.project is None else self.project

    def with_epsilon(self, epsilon: float) -> "SolveConfig":
        values = dict(self.__dict__)
        values["epsilon"] = float(epsilon)
        return SolveConfig(**values)


@dataclass
class SolveDiagnostics:
    converged: bool = False
    iterations: int = 0
    residual: float = float("inf")
    residual_history: List[float] = field(default_factory=list)
    epsilon: float = 0.0
    scheme: str = "newton"
    verified_residual: Optional[float] = None
    stages: List[Dict] = field(default_factory=list)


@dataclass
class GridSolution:
    u: Field
    v: Optional[Field]
    diagnostics: SolveDiagnostics
    stage_fields: List[Tuple[float, Field, Optional[Field]]] = field(default_factory=list)


@dataclass(frozen=True)
class HenonTerm:
    """Termo c·|x|^α·u₊^μ do lado direito de Hénon."""
    coeff: float
    alpha: float
    mu: float


@dataclass
class _Block:
    """Uma equação |∇w_k|_δ^p F_k(D²w_k) = reação_k(W)."""
    spec: OperatorSpec
    power: float
    reaction: Callable[[List[np.ndarray]], np.ndarray]
    reaction_derivatives: Callable[[List[np.ndarray], float], Dict[int, np.ndarray]]


class DeadCoreGridSolver:
    """
    Orquestra as resoluções na grade `template` (disco com camada de
    fronteira de Dirichlet fora da máscara).
    """
    GRID_DIMENSION = 2

    def __init__(self, template: Field):
        self.template = template
        self.mask = template.domain_mask
        self.X, self.Y = template.coordinates()
        self.radius = np.hypot(self.X, self.Y)

    # --- API pública ---

    def solve_penalized(
        self,
        params: SystemParams,
        spec_pair: Tuple[OperatorSpec, OperatorSpec],
        bc: Tuple[BoundaryData, BoundaryData],
        cfg: SolveConfig,
        initial: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    ) -> GridSolution:
        """Estado estacionário do problema penalizado com ε = cfg.epsilon."""
        boundary = [FieldFactory.boundary_values(self.template, b) for b in bc]
        self._check_boundary(boundary)
        delta = self._delta(cfg, min(params.p, params.q))
        eps = cfg.epsilon
        pw = NumericCalculator.positive_power
        dpw = NumericCalculator.positive_power_derivative

        blocks = [
            _Block(
                spec_pair[0], params.p,
                lambda W: pw(W[1], params.lambda1) + eps,
                lambda W, floor: {1: dpw(W[1], params.lambda1, floor)},
            ),
            _Block(
                spec_pair[1], params.q,
                lambda W: pw(W[0], params.lambda2) + eps,
                lambda W, floor: {0: dpw(W[0], params.lambda2, floor)},
            ),
        ]

        if initial is None:
            W = [FieldFactory.initial_guess(self.template, b) for b in boundary]
        else:
            W = [np.array(w, dtype=float) for w in initial]
        W = [self._impose(w, b) for w, b in zip(W, boundary)]

        print(f"  Grid: sistema N={self.template.N}, ε={eps:g}, esquema={cfg.scheme}")
        W, diag = self._solve(blocks, W, boundary, cfg, delta)
        return GridSolution(self.template.with_values(W[0]), self.template.with_values(W[1]), diag)

    def solve_deadcore(
        self,
        params: SystemParams,
        spec_pair: Tuple[OperatorSpec, OperatorSpec],
        bc: Tuple[BoundaryData, BoundaryData],
        cfg: SolveConfig,
        eps_schedule: Sequence[float] = (1.0, 0.1, 0.01, 0.0),
    ) -> GridSolution:
        """
        Continuação em ε com partida a quente. Entre estágios verifica-se
        u_{ε_k} ≥ u_{ε_{k−1}} − tol (idem para v).
        """
        schedule = self._check_schedule(eps_schedule)
        mono_tol = cfg.monotonicity_tol if cfg.monotonicity_tol is not None else 10 * cfg.tol

        previous: Optional[GridSolution] = None
        stages: List[Tuple[float, Field, Optional[Field]]] = []
        stage_log: List[Dict] = []

        for k, eps in enumerate(schedule):
            print(f"  Grid: estágio {k + 1}/{len(schedule)} da continuação (ε={eps:g})")
            initial = None if previous is None else (previous.u.values, previous.v.values)
            current = self.solve_penalized(params, spec_pair, bc, cfg.with_epsilon(eps), initial)

            if previous is not None:
                for name, a, b in (("u", previous.u, current.u), ("v", previous.v, current.v)):
                    gap = float(np.max((a.values - b.values)[self.mask]))
                    if gap > mono_tol:
                        raise ComparisonViolationError(
                            f"Monotonicidade em ε violada para {name}: excesso {gap:.3e} > {mono_tol:.3e}."
                        )

            stages.append((eps, current.u, current.v))
            stage_log.append({
                "epsilon": eps,
                "iterations": current.diagnostics.iterations,
                "residual": current.diagnostics.residual,
            })
            previous = current

        previous.diagnostics.stages = stage_log
        previous.stage_fields = stages
        return previous

    def solve_henon(
        self,
        params: HenonParams,
        spec: OperatorSpec,
        rhs_terms: Optional[Sequence[HenonTerm]],
        bc: BoundaryData,
        cfg: SolveConfig,
        initial: Optional[np.ndarray] = None,
    ) -> GridSolution:
        """Estado estacionário de |∇u|_δ^p F(D²u) = Σ c_i|x|^{α_i}u₊^{μ_i} + ε."""
        terms = list(rhs_terms) if rhs_terms else [HenonTerm(1.0, params.alpha, params.mu)]
        for term in terms:
            if term.coeff < 0 or term.alpha < 0:
                raise ParameterDomainError(f"Termo inválido: {term}.")
            if term.mu < 0 or term.mu > 1 + params.p or (term.mu == 1 + params.p and not params.critical):
                raise ParameterDomainError(f"Ordem μ={term.mu} fora de [0, 1+p).")

        boundary = FieldFactory.boundary_values(self.template, bc)
        self._check_boundary([boundary])
        delta = self._delta(cfg, params.p)
        eps = cfg.epsilon
        weights = [(t.coeff * self.radius ** t.alpha, t.mu) for t in terms]
        pw = NumericCalculator.positive_power
        dpw = NumericCalculator.positive_power_derivative

        def reaction(W):
            total = np.full_like(W[0], eps)
            for weight, mu in weights:
                total += weight * pw(W[0], mu)
            return total

        def derivatives(W, floor):
            total = np.zeros_like(W[0])
            for weight, mu in weights:
                total += weight * dpw(W[0], mu, floor)
            return {0: total}

        block = _Block(spec, params.p, reaction, derivatives)
        w0 = FieldFactory.initial_guess(self.template, boundary) if initial is None else np.array(initial, dtype=float)
        W = [self._impose(w0, boundary)]

        print(f"  Grid: Hénon N={self.template.N}, termos={len(terms)}, ε={eps:g}, esquema={cfg.scheme}")
        W, diag = self._solve([block], W, [boundary], cfg, delta)
        return GridSolution(self.template.with_values(W[0]), None, diag)

    def solve_henon_limiting(
        self,
        params: HenonParams,
        spec: OperatorSpec,
        rhs_terms: Optional[Sequence[HenonTerm]],
        bc: BoundaryData,
        cfg: SolveConfig,
        eps_schedule: Sequence[float] = (1.0, 0.1, 0.01, 0.0),
    ) -> GridSolution:
        """Solução limite de Hénon por continuação em ε (cadeia monótona verificada)."""
        schedule = self._check_schedule(eps_schedule)
        mono_tol = cfg.monotonicity_tol if cfg.monotonicity_tol is not None else 10 * cfg.tol
        previous: Optional[GridSolution] = None
        stages = []
        for eps in schedule:
            initial = None if previous is None else previous.u.values
            current = self.solve_henon(params, spec, rhs_terms, bc, cfg.with_epsilon(eps), initial)
            if previous is not None:
                gap = float(np.max((previous.u.values - current.u.values)[self.mask]))
                if gap > mono_tol:
                    raise ComparisonViolationError(f"Monotonicidade em ε violada: excesso {gap:.3e}.")
            stages.append((eps, current.u, None))
            previous = current
        previous.stage_fields = stages
        previous.diagnostics.stages = [{"epsilon": e, "max_u": float(u.values.max())} for e, u, _ in stages]
        return previous

    # --- Núcleo numérico ---

    def _solve(self, blocks: List[_Block], W: List[np.ndarray], boundary: List[np.ndarray],
               cfg: SolveConfig, delta: float) -> Tuple[List[np.ndarray], SolveDiagnostics]:
        if cfg.scheme == "explicit":
            W, diag = self._march(blocks, W, boundary, cfg, delta)
        else:
            W, diag = self._newton(blocks, W, cfg, delta)
        diag.epsilon = cfg.epsilon
        diag.verified_residual = self._verified_residual(blocks, W, delta)
        print(f"  Grid: resíduo verificado={diag.verified_residual:.3e}")
        return W, diag

    def _residuals(self, blocks: List[_Block], W: List[np.ndarray], delta: float) -> List[np.ndarray]:
        out = []
        for k, block in enumerate(blocks):
            rhs = block.reaction(W)
            res = degenerate_residual(self.template.with_values(W[k]), block.spec, block.power, delta, rhs)
            out.append(res.values)
        return out

    def _verified_residual(self, blocks, W, delta) -> float:
        return max(float(np.max(np.abs(r))) for r in self._residuals(blocks, W, delta))

    def _jacobian(self, blocks: List[_Block], W: List[np.ndarray], delta: float, floor: float) -> sp.csc_matrix:
        size = self.template.N ** 2
        m = len(blocks)
        interior = self.mask.ravel().astype(float)
        dirichlet = sp.diags(1.0 - interior)
        grid = [[None] * m for _ in range(m)]

        for k, block in enumerate(blocks):
            w = W[k]
            ux, uy = gradient_field(w, self.template.h)
            uxx, uxy, uyy = hessian_field(w, self.template.h)
            a11, a12, a22 = policy_coefficients(block.spec, uxx, uxy, uyy, self.X, self.Y)
            F = a11 * uxx + 2 * a12 * uxy + a22 * uyy

            if block.power == 0:
                factor = np.ones_like(w)
                dfx = dfy = np.zeros_like(w)
            else:
                base = ux * ux + uy * uy + delta * delta
                factor = base ** (0.5 * block.power)
                dfx = block.power * base ** (0.5 * block.power - 1.0) * ux
                dfy = block.power * base ** (0.5 * block.power - 1.0) * uy

            diag_block = assemble_second_order(self.template, a11, a12, a22, factor)
            if block.power != 0:
                diag_block = diag_block + assemble_first_order(self.template, F * dfx, F * dfy)
            grid[k][k] = diag_block + dirichlet

            for j, deriv in block.reaction_derivatives(W, floor).items():
                coupling = sp.diags(-deriv.ravel() * interior)
                grid[k][j] = coupling if grid[k][j] is None else grid[k][j] + coupling

        for k in range(m):
            for j in range(m):
                if grid[k][j] is None:
                    grid[k][j] = sp.csr_matrix((size, size))
        return sp.bmat(grid, format="csc")

    def _newton(self, blocks, W, cfg: SolveConfig, delta: float):
        diag = SolveDiagnostics(scheme="newton")
        size = self.template.N ** 2
        scale = max(max(float(np.max(np.abs(w))) for w in W), np.finfo(float).tiny)
        floor = cfg.jacobian_floor * scale

        R = np.concatenate([r.ravel() for r in self._residuals(blocks, W, delta)])
        res = float(np.max(np.abs(R)))

        for it in range(cfg.max_iter + 1):
            diag.residual_history.append(res)
            diag.iterations, diag.residual = it, res
            if it % cfg.log_every == 0:
                print(f"  Grid: iteração {it}, resíduo={res:.3e}")
            if not np.isfinite(res):
                raise InstabilityError("Resíduo não finito durante Newton; reduza o amortecimento.")
            if res <= cfg.tol:
                diag.converged = True
                break
            if it == cfg.max_iter:
                break

            step = spsolve(self._jacobian(blocks, W, delta, floor), -R)
            best = None
            t = cfg.damping
            for _ in range(cfg.line_search_steps):
                trial = [W[k] + t * step[k * size:(k + 1) * size].reshape(W[k].shape) for k in range(len(W))]
                if cfg.projects:
                    trial = [np.maximum(w, 0.0) for w in trial]
                trial_R = np.concatenate([r.ravel() for r in self._residuals(blocks, trial, delta)])
                trial_res = float(np.max(np.abs(trial_R)))
                if best is None or trial_res < best[2]:
                    best = (trial, trial_R, trial_res)
                if trial_res < res:
                    break
                t *= 0.5
            W, R, res = best

        if not diag.converged:
            raise NonConvergenceError("Newton em grade não convergiu", diag.residual, diag.residual_history)
        print(f"  Grid: convergiu em {diag.iterations} iterações (resíduo={diag.residual:.3e})")
        return W, diag

    def _auto_dt(self, blocks, W, delta) -> float:
        ell_hi = max(b.spec.ell_hi for b in blocks)
        a_max = 1.0
        for k, block in enumerate(blocks):
            if block.power != 0:
                ux, uy = gradient_field(W[k], self.template.h)
                a = (ux * ux + uy * uy + delta * delta) ** (0.5 * block.power)
                a_max = max(a_max, float(np.max(a[self.mask])))
        return 0.2 * self.template.h ** 2 / (self.GRID_DIMENSION * ell_hi * a_max)

    def _march(self, blocks, W, boundary, cfg: SolveConfig, delta: float):
        """
        Marcha pseudo-temporal explícita em blocos (varredura completa de u,
        depois de v com u atualizado).
        """
        diag = SolveDiagnostics(scheme="explicit")
        auto = cfg.pseudo_dt == "auto"
        dt = self._auto_dt(blocks, W, delta) if auto else float(cfg.pseudo_dt)
        growth_streak = 0
        W = [w.copy() for w in W]

        for sweep in range(cfg.max_iter + 1):
            res = max(float(np.max(np.abs(r))) for r in self._residuals(blocks, W, delta))
            if diag.residual_history and res > diag.residual_history[-1]:
                growth_streak += 1
            else:
                growth_streak = 0
            diag.residual_history.append(res)
            diag.iterations, diag.residual = sweep, res

            if sweep % (cfg.log_every * 100) == 0:
                print(f"  Grid: varredura {sweep}, dt={dt:.3e}, resíduo={res:.3e}")
            if not np.isfinite(res) or growth_streak >= cfg.instability_window:
                raise InstabilityError(
                    f"Resíduo crescente por {growth_streak} passos (dt={dt:.3e}); reduza pseudo_dt."
                )
            if res <= cfg.tol:
                diag.converged = True
                break
            if sweep == cfg.max_iter:
                break

            for k, block in enumerate(blocks):
                rhs = block.reaction(W)
                r_k = degenerate_residual(self.template.with_values(W[k]), block.spec, block.power, delta, rhs).values
                W[k] = W[k] + dt * r_k
                if cfg.projects:
                    W[k] = np.maximum(W[k], 0.0)
                W[k] = self._impose(W[k], boundary[k])

            if auto and (sweep + 1) % cfg.dt_refresh == 0:
                dt = self._auto_dt(blocks, W, delta)

        if not diag.converged:
            raise NonConvergenceError("Marcha explícita não convergiu", diag.residual, diag.residual_history)
        print(f"  Grid: convergiu em {diag.iterations} varreduras (resíduo={diag.residual:.3e})")
        return W, diag

    # --- Auxiliares ---

    def _impose(self, w: np.ndarray, boundary: np.ndarray) -> np.ndarray:
        out = np.array(w, dtype=float)
        out[~self.mask] = boundary[~self.mask]
        return out

    def _check_boundary(self, boundary: List[np.ndarray]):
        for b in boundary:
            if np.any(b[~self.mask] < 0):
                raise ArgumentError("Dado de fronteira negativo.")

    def _delta(self, cfg: SolveConfig, min_power: float) -> float:
        h = self.template.h
        delta = cfg.delta if cfg.delta is not None else h
        if min_power < 0 and delta < h:
            raise ParameterDomainError("Regime singular (p < 0) exige δ ≥ h.")
        return delta

    @staticmethod
    def _check_schedule(eps_schedule: Sequence[float]) -> List[float]:
        schedule = [float(e) for e in eps_schedule]
        if not schedule:
            raise ArgumentError("Cronograma de ε vazio.")
        if schedule[-1] < 0:
            raise ArgumentError("Cronograma de ε deve terminar em valor ≥ 0.")
        if any(b >= a for a, b in zip(schedule, schedule[1:])):
            raise ArgumentError("Cronograma de ε deve ser estritamente decrescente.")
        return schedule


# --- Funções de conveniência ---

def solve_penalized(params, spec_pair, bc, cfg: SolveConfig, template: Optional[Field] = None) -> GridSolution:
    grid = template if template is not None else FieldFactory.disk()
    return DeadCoreGridSolver(grid).solve_penalized(params, spec_pair, bc, cfg)


def solve_deadcore(params, spec_pair, bc, cfg: SolveConfig, eps_schedule=(1.0, 0.1, 0.01, 0.0),
                   template: Optional[Field] = None) -> GridSolution:
    grid = template if template is not None else FieldFactory.disk()
    return DeadCoreGridSolver(grid).solve_deadcore(params, spec_pair, bc, cfg, eps_schedule)


def solve_henon_grid(params, spec, rhs_terms, bc, cfg: SolveConfig, template: Optional[Field] = None) -> GridSolution:
    grid = template if template is not None else FieldFactory.disk()
    return DeadCoreGridSolver(grid).solve_henon(params, spec, rhs_terms, bc, cfg)


def check_comparison(a: Field, b: Field, tol: float) -> bool:
    """Verdadeiro sse a ≤ b + tol em todo ponto do domínio."""
    if a.values.shape != b.values.shape or not a.same_grid(b):
        raise ShapeError("Campos em grades diferentes.")
    mask = a.domain_mask
    return bool(np.all(a.values[mask] <= b.values[mask] + tol))


def apriori_bound_check(u: Field, bc_sup: float, rhs_sup: float, p: float, diam: float,
                        c_abp: float = 1.0) -> float:
    """
    Margem bc_sup + C_abp·diam²·rhs_sup^{1/(1+p)} − max|u|; não negativa
    quando a cota L^∞ é respeitada.
    """
    if p <= -1:
        raise ParameterDomainError("Exige p > −1.")
    bound = bc_sup + c_abp * diam ** 2 * max(rhs_sup, 0.0) ** (1.0 / (1.0 + p))
    return float(bound - np.max(np.abs(u.values)))
