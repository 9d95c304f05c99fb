"""Frame tests, bounds and reconstruction for dynamical sampling systems.

Modules
-------
numerics       tolerance-aware rank, eigenvalue clustering and projections
disk           pseudo-hyperbolic geometry, sequence index, Hardy kernels
fd_sampling    orbit frames in C^d and reconstruction from space-time samples
diag_sampling  diagonal operator models and their frame conditions
op_sampling    Lyapunov identity, contraction similarity, shift-power models
cli            the ``dynsamp`` command
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DecompositionError,
    DomainError,
    DynsampError,
    SchemaError,
    SizeError,
    StabilityError,
)
from .numerics import DEFAULT_TOL, Subspace, TolerancePolicy  # noqa: E402

__all__ = [
    "__version__",
    "DEFAULT_TOL",
    "Subspace",
    "TolerancePolicy",
    "DynsampError",
    "DomainError",
    "DecompositionError",
    "SizeError",
    "StabilityError",
    "ConvergenceError",
    "SchemaError",
]
