"""Mixing analysis for primitive two-letter substitutions."""
from .arith import TileLengths, bezout, gcd_condition, tile_ratio_class
from .core import (
    Substitution,
    SubstitutionError,
    check_aperiodic,
    fixed_point_prefix,
    is_primitive,
    normalize,
    parse_substitution,
    power,
    substitution_matrix,
)
from .language import (
    brute_force_factors,
    connector_lengths,
    excess_profile,
    factors,
    is_factor,
)
from .mixing import Verdict, classify_R, classify_Z, meyer_diagnostic, psi_density_scan, report
from .quadratic import QuadraticNumber
from .spectral import eigen_data

__version__ = "0.1.0"

__all__ = [
    "QuadraticNumber", "Substitution", "SubstitutionError", "TileLengths", "Verdict",
    "bezout", "brute_force_factors", "check_aperiodic", "classify_R", "classify_Z",
    "connector_lengths", "eigen_data", "excess_profile", "factors", "fixed_point_prefix",
    "gcd_condition", "is_factor", "is_primitive", "meyer_diagnostic", "normalize",
    "parse_substitution", "power", "psi_density_scan", "report", "substitution_matrix",
    "tile_ratio_class",
]
