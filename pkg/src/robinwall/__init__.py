"""Robin and Neumann walls realized as thin attractive layers.

Core API: closed-form reflection amplitudes and eigenfunctions
(:mod:`robinwall.analytic`), an independent RK4 shooting oracle
(:mod:`robinwall.oracle`), and Crank-Nicolson wave-packet experiments
(:mod:`robinwall.evolve`). The HTTP service lives in
:mod:`robinwall.service`, the CLI in :mod:`robinwall.cli`.
"""

from .analytic import (
    ConvergencePoint,
    PiecewiseEigenfunction,
    PotentialKind,
    PotentialSpec,
    ReflectionResult,
    ResidualReport,
    ScatterInput,
    boundary_residuals,
    calibrate_delta,
    calibrate_valley,
    calibrated_spec,
    convergence_curve,
    delta_reflection,
    eigenfunction,
    eval_eigenfunction,
    robin_reflection,
    valley_reflection,
)
from .errors import ConfigError, DomainError

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ConfigError",
    "DomainError",
    "ConvergencePoint",
    "PiecewiseEigenfunction",
    "PotentialKind",
    "PotentialSpec",
    "ReflectionResult",
    "ResidualReport",
    "ScatterInput",
    "boundary_residuals",
    "calibrate_delta",
    "calibrate_valley",
    "calibrated_spec",
    "convergence_curve",
    "delta_reflection",
    "eigenfunction",
    "eval_eigenfunction",
    "robin_reflection",
    "valley_reflection",
]
