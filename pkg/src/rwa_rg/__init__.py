"""Rabi and Jaynes-Cummings dynamics beyond the rotating wave approximation.

Closed-form rotating wave, single-scale, two-scale and renormalized
multi-scale expansions, a Riccati formulation, and an adaptive reference
integrator to compare them against.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    AmplitudePair,
    LadderState,
    Method,
    MethodTag,
    Model,
    ModelParams,
    ParameterError,
    StrongCouplingWarning,
    TimeGrid,
    Trajectory,
    TwoTimes,
    UnsupportedOrderError,
    map_times,
)
from .integrator import IntegrationError, IntegratorConfig, solve_jc, solve_rabi  # noqa: E402
from ._kernels import BACKEND_NAME  # noqa: E402

__all__ = [
    "AmplitudePair", "LadderState", "Method", "MethodTag", "Model", "ModelParams",
    "ParameterError", "StrongCouplingWarning", "TimeGrid", "Trajectory", "TwoTimes",
    "UnsupportedOrderError", "map_times", "IntegrationError", "IntegratorConfig",
    "solve_jc", "solve_rabi", "BACKEND_NAME", "__version__",
]
