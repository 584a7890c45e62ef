"""Sharp constants of smoothing estimates for Schrodinger, relativistic and Dirac evolutions."""

from .optimum import (
    ConstantReport,
    SearchPolicy,
    dirac_constant,
    dirac_radial_constant,
    equivalence_check,
    schrodinger_constant,
)
from .problem import DispersionSpec, ProblemSpec, SmoothingSpec, WeightSpec

__version__ = "0.1.0"

__all__ = [
    "ConstantReport",
    "DispersionSpec",
    "ProblemSpec",
    "SearchPolicy",
    "SmoothingSpec",
    "WeightSpec",
    "dirac_constant",
    "dirac_radial_constant",
    "equivalence_check",
    "schrodinger_constant",
    "__version__",
]
