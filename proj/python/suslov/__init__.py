"""Structure-preserving integrators for the Suslov rigid-body problem on SO(3)."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    ConfigError,
    ConstraintError,
    DegenerateError,
    DomainError,
    FitError,
    InertiaTensor,
    NonConvergence,
    SingularJacobian,
    SolverError,
    SuslovError,
)

REFERENCE_OMEGA0 = (0.4, 0.5, 0.0)

__version__ = "0.1.0"
