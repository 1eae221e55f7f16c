from .params import (
    SystemParams,
    HenonParams,
    ExponentBundle,
    OperatorKind,
    BarrierKind,
    system_exponents,
    henon_exponents,
    multi_term_regularity,
    critical_decay_regime,
)
from .exact import (
    RadialSolution,
    CoordinateProfile,
    system_constants,
    radial_pair,
    residual_radial,
    relative_residual_radial,
    henon_constant,
    henon_radial_solution,
    henon_residual,
    coordinate_solution,
    coordinate_residual,
    liouville_threshold,
    exact_growth_ratio,
    barrier_offset,
    dead_core_bracket,
)

__all__ = [
    "SystemParams",
    "HenonParams",
    "ExponentBundle",
    "OperatorKind",
    "BarrierKind",
    "system_exponents",
    "henon_exponents",
    "multi_term_regularity",
    "critical_decay_regime",
    "RadialSolution",
    "CoordinateProfile",
    "system_constants",
    "radial_pair",
    "residual_radial",
    "relative_residual_radial",
    "henon_constant",
    "henon_radial_solution",
    "henon_residual",
    "coordinate_solution",
    "coordinate_residual",
    "liouville_threshold",
    "exact_growth_ratio",
    "barrier_offset",
    "dead_core_bracket",
]
