"""Trust-region methods with diagonal Hessian approximations for ``min f(x) + h(x)``.

``h`` is a separable l0 or l1 penalty plus bound constraints.
"""

from .diag_qn import DiagKind, DiagonalModel, andrei_diag_update, psb_diag_update, spectral_sigma
from .lm_qn import LimitedMemoryOp, QNKind
from .problems import RegularizedProblem
from .prox import BoxedSeparableRegularizer, InfeasibleError, IproxQuery, Norm, iprox, prox_standard
from .solvers import (
    SolverOptions,
    SolverStats,
    Status,
    TrustRegionConstants,
    itrdh_solve,
    r2_solve,
    tr_solve,
    trdh_solve,
)

__version__ = "0.1.0"

__all__ = [
    "BoxedSeparableRegularizer",
    "DiagKind",
    "DiagonalModel",
    "InfeasibleError",
    "IproxQuery",
    "LimitedMemoryOp",
    "Norm",
    "QNKind",
    "RegularizedProblem",
    "SolverOptions",
    "SolverStats",
    "Status",
    "TrustRegionConstants",
    "andrei_diag_update",
    "iprox",
    "itrdh_solve",
    "prox_standard",
    "psb_diag_update",
    "r2_solve",
    "spectral_sigma",
    "tr_solve",
    "trdh_solve",
]
