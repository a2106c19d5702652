"""Constants, options, statistics and the per-iteration pieces shared by all solvers."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from ..diag_qn import D_MAX, DiagKind
from ..prox import BoxedSeparableRegularizer, solve_boxed

# trust-region radius below which a solve is declared stalled
DELTA_FLOOR = 1e-16
# R2 regularization above which a solve is declared stalled
SIGMA_CEIL = 1e16


class ModelError(ArithmeticError):
    """A model decrease came out significantly negative."""


class Status(str, enum.Enum):
    FIRST_ORDER = "first_order"
    MAX_ITER = "max_iter"
    STALLED = "stalled"


@dataclass(frozen=True)
class TrustRegionConstants:
    eta1: float = 1e-3
    eta2: float = 0.75
    gamma1: float = 0.5
    gamma2: float = 0.9
    gamma3: float = 2.0
    gamma4: float = 4.0
    alpha: float = 1.0
    beta: float = 10.0

    def __post_init__(self):
        if not 0 < self.eta1 <= self.eta2 < 1:
            raise ValueError("need 0 < eta1 <= eta2 < 1")
        if not 0 < 1 / self.gamma3 <= self.gamma1 <= self.gamma2 < 1 < self.gamma3 <= self.gamma4:
            raise ValueError("need 0 < 1/gamma3 <= gamma1 <= gamma2 < 1 < gamma3 <= gamma4")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.beta >= 1:
            raise ValueError("beta must be at least 1")


@dataclass(frozen=True)
class SolverOptions:
    eps_abs: float = 1e-5
    eps_rel: float = 1e-5
    eps_abs_inner: float = 1e-3
    eps_rel_inner: float = 1e-6
    nu0: float = 1.0
    delta0: float = 1.0
    max_iter: int = 500
    max_inner_iter: int = 100
    d_max: float = D_MAX
    diag_kind: DiagKind = DiagKind.SPECTRAL
    sigma_min: float = 1e-8
    # "exact", "bound" or "power": how TR evaluates ||B_k|| when choosing nu_k
    opnorm: str = "exact"

    def __post_init__(self):
        object.__setattr__(self, "diag_kind", DiagKind(self.diag_kind))
        for name in ("eps_abs", "eps_rel", "eps_abs_inner", "eps_rel_inner", "nu0", "delta0", "d_max", "sigma_min"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iter < 0 or self.max_inner_iter < 1:
            raise ValueError("iteration limits must be positive")
        if self.opnorm not in ("exact", "bound", "power"):
            raise ValueError("opnorm must be 'exact', 'bound' or 'power'")


@dataclass
class IterationInfo:
    """What a solver reports to its callback at each iteration."""

    k: int
    x: np.ndarray
    f: float
    h: float
    crit: float
    delta: float
    nu: float
    rho: float | None = None
    status: str = ""
    xi_cp: float | None = None
    s1: np.ndarray | None = None
    step: np.ndarray | None = None
    radius: float | None = None
    model_decrease: float | None = None
    f_trial: float | None = None
    h_trial: float | None = None


@dataclass
class SolverStats:
    solver: str
    status: Status = Status.MAX_ITER
    iterations: int = 0
    n_f: int = 0
    n_grad: int = 0
    n_prox: int = 0
    n_inner: int = 0
    final_f: float = math.nan
    final_h: float = math.nan
    final_h_over_lambda: float = math.nan
    final_criticality: float = math.nan
    x_error: float | None = None
    time_s: float = 0.0
    meta: dict[str, Any] = field(default_factory=dict)

    def record(self) -> dict[str, Any]:
        out = asdict(self)
        out["status"] = self.status.value
        return out


Callback = Callable[[IterationInfo], None]


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------


def compute_nu_trdh(d, delta: float, alpha: float) -> float:
    dn = float(np.max(np.abs(d))) if np.size(d) else 0.0
    return 1.0 / (dn + 1.0 / (alpha * delta))


def compute_nu_itrdh(d, alpha: float) -> float:
    dn = float(np.max(np.abs(d))) if np.size(d) else 0.0
    return 1.0 / (dn + 1.0 / alpha)


def criticality(nu: float, xi: float, atol: float = 1e-12) -> float:
    """``sqrt(xi / nu)``; small negative ``xi`` from roundoff is clamped to zero."""
    if xi < 0:
        if xi < -atol:
            raise ModelError(f"negative model decrease {xi:.3e}")
        xi = 0.0
    return math.sqrt(xi / nu)


def rho(fx: float, hx: float, fx_new: float, hx_new: float, model_decrease: float) -> float:
    if not model_decrease > 0:
        raise ModelError(f"non-positive model decrease {model_decrease:.3e}")
    actual = (fx + hx) - (fx_new + hx_new)
    if math.isnan(actual):
        return -math.inf
    return actual / model_decrease


def radius_update(delta: float, rho_val: float, consts: TrustRegionConstants) -> float:
    if rho_val >= consts.eta2:
        return consts.gamma3 * delta
    if rho_val >= consts.eta1:
        return delta
    return consts.gamma2 * delta


def _xi_tol(fx: float, hx: float) -> float:
    return 1e-12 * max(1.0, abs(fx) + abs(hx))


def prox_box(x, reg: BoxedSeparableRegularizer, radius: float):
    """Bounds intersected with the infinity-norm ball of given radius around ``x``."""
    return np.maximum(reg.lower, x - radius), np.minimum(reg.upper, x + radius)


def diag_prox(x, g, d, lo, hi, reg: BoxedSeparableRegularizer):
    """Solve ``min_s g's + s'diag(d)s/2 + h(x + s)`` with ``x + s`` in ``[lo, hi]``.

    The problem is solved for the trial point ``z = x + s`` directly, so
    bounds and zeros of ``z`` are exact.  Returns ``(s, z)``.
    """
    d = np.broadcast_to(np.asarray(d, dtype=float), x.shape)
    z = solve_boxed(g - d * x, d, lo, hi, reg.weights(), reg.kind)
    return z - x, z


def first_prox_step(x, g, hx: float, nu: float, delta: float, reg: BoxedSeparableRegularizer):
    """First (Cauchy-like) step with curvature ``1/nu`` inside radius ``delta``.

    Returns ``(s1, z1, xi_cp)`` where ``xi_cp`` is the decrease of the linear
    model plus ``h``.
    """
    lo, hi = prox_box(x, reg, delta)
    s1, z1 = diag_prox(x, g, 1.0 / nu, lo, hi, reg)
    xi_cp = hx - float(g @ s1) - reg.value(z1)
    return s1, z1, xi_cp


def second_step(x, g, d, radius: float, reg: BoxedSeparableRegularizer):
    """Step of the diagonal model inside ``radius``; returns ``(s, z)``."""
    lo, hi = prox_box(x, reg, radius)
    return diag_prox(x, g, d, lo, hi, reg)


def diag_model_decrease(g, d, s, hx: float, hz: float) -> float:
    return hx - float(g @ s) - 0.5 * float(s @ (d * s)) - hz


def stop_threshold(opts_abs: float, opts_rel: float, crit0: float) -> float:
    return opts_abs + opts_rel * crit0


def constants_meta(opts: SolverOptions, consts: TrustRegionConstants) -> dict[str, Any]:
    meta = {k: (v.value if isinstance(v, enum.Enum) else v) for k, v in asdict(opts).items()}
    meta.update(asdict(consts))
    return meta
