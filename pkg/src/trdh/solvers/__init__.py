from .common import (
    IterationInfo,
    ModelError,
    SolverOptions,
    SolverStats,
    Status,
    TrustRegionConstants,
    compute_nu_itrdh,
    compute_nu_trdh,
    criticality,
    first_prox_step,
    radius_update,
    rho,
    second_step,
)
from .r2 import r2_solve
from .tr import Subsolver, tr_solve
from .trdh import itrdh_solve, trdh_solve

__all__ = [
    "IterationInfo",
    "ModelError",
    "SolverOptions",
    "SolverStats",
    "Status",
    "Subsolver",
    "TrustRegionConstants",
    "compute_nu_itrdh",
    "compute_nu_trdh",
    "criticality",
    "first_prox_step",
    "itrdh_solve",
    "r2_solve",
    "radius_update",
    "rho",
    "second_step",
    "tr_solve",
    "trdh_solve",
]
