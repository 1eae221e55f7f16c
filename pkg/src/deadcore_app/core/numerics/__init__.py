from .operators import (
    OperatorSpec,
    hessian,
    hessian_field,
    gradient_field,
    apply_operator,
    operator_field,
    degenerate_residual,
)
from .radial import (
    RadialProfile,
    RadialDiagnostics,
    RadialSolverConfig,
    RadialSolver,
    solve_radial_system,
    solve_radial_henon,
    detect_free_boundary,
    fit_growth_radial,
)
from .gridsolver import (
    SolveConfig,
    SolveDiagnostics,
    GridSolution,
    HenonTerm,
    DeadCoreGridSolver,
    solve_penalized,
    solve_deadcore,
    solve_henon_grid,
    check_comparison,
    apriori_bound_check,
)

__all__ = [
    "OperatorSpec",
    "hessian",
    "hessian_field",
    "gradient_field",
    "apply_operator",
    "operator_field",
    "degenerate_residual",
    "RadialProfile",
    "RadialDiagnostics",
    "RadialSolverConfig",
    "RadialSolver",
    "solve_radial_system",
    "solve_radial_henon",
    "detect_free_boundary",
    "fit_growth_radial",
    "SolveConfig",
    "SolveDiagnostics",
    "GridSolution",
    "HenonTerm",
    "DeadCoreGridSolver",
    "solve_penalized",
    "solve_deadcore",
    "solve_henon_grid",
    "check_comparison",
    "apriori_bound_check",
]
