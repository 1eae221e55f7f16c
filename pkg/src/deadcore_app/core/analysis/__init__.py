from .free_boundary import (
    FreeBoundaryReport,
    FreeBoundaryAnalyzer,
    pair_magnitude,
    extract_free_boundary,
    growth_fit,
    growth_table,
    nondegeneracy_check,
    density_ratio,
    porosity_probe,
    distance_growth_fit,
    gradient_magnitude,
)
from .scaling import (
    LiouvilleVerdict,
    blowup_rescale,
    blowup_sequence,
    halfspace_profile_error,
    liouville_decay_check,
)
from .henon import HenonCheckReport, HenonChecker, henon_checks

__all__ = [
    "FreeBoundaryReport",
    "FreeBoundaryAnalyzer",
    "pair_magnitude",
    "extract_free_boundary",
    "growth_fit",
    "growth_table",
    "nondegeneracy_check",
    "density_ratio",
    "porosity_probe",
    "distance_growth_fit",
    "gradient_magnitude",
    "LiouvilleVerdict",
    "blowup_rescale",
    "blowup_sequence",
    "halfspace_profile_error",
    "liouville_decay_check",
    "HenonCheckReport",
    "HenonChecker",
    "henon_checks",
]
