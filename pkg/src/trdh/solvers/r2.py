"""R2: proximal gradient with an adaptive quadratic regularization ``sigma``."""

from __future__ import annotations

import time

import numpy as np

from ..problems.base import RegularizedProblem
from .common import (
    SIGMA_CEIL,
    Callback,
    IterationInfo,
    SolverOptions,
    SolverStats,
    Status,
    TrustRegionConstants,
    _xi_tol,
    constants_meta,
    criticality,
    diag_prox,
    rho,
)


def r2_solve(
    problem: RegularizedProblem,
    opts: SolverOptions | None = None,
    consts: TrustRegionConstants | None = None,
    *,
    nu0: float | None = None,
    callback: Callback | None = None,
):
    """Minimize ``f + h`` over the bounds with adaptive proximal gradient steps.

    The step minimizes ``f(x) + g's + sigma ||s||^2 / 2 + h(x + s)`` over the
    bounds.  ``sigma`` grows by ``gamma3`` after a rejected step and shrinks
    by ``gamma2`` (down to ``sigma_min``) after a very successful one.
    """
    opts = opts or SolverOptions()
    consts = consts or TrustRegionConstants()
    stats = SolverStats(solver="R2", meta=constants_meta(opts, consts))
    t0 = time.perf_counter()
    reg = problem.reg

    x = problem.x0.copy()
    fx = problem.obj(x)
    stats.n_f += 1
    if not np.isfinite(fx):
        raise ValueError("f is not finite at the starting point")
    hx = reg.value(x)
    g = problem.grad(x)
    stats.n_grad += 1
    sigma = 1.0 / (opts.nu0 if nu0 is None else nu0)

    tol = None
    crit = np.nan
    k = 0
    while True:
        if k >= opts.max_iter:
            stats.status = Status.MAX_ITER
            break
        if sigma > SIGMA_CEIL:
            stats.status = Status.STALLED
            break
        nu = 1.0 / sigma
        s, z = diag_prox(x, g, sigma, reg.lower, reg.upper, reg)
        stats.n_prox += 1
        stats.iterations += 1
        hz = reg.value(z)
        xi = hx - float(g @ s) - hz
        crit = criticality(nu, xi, _xi_tol(fx, hx))
        info = IterationInfo(k=k, x=x, f=fx, h=hx, crit=crit, delta=np.inf, nu=nu,
                             xi_cp=xi, s1=s, step=s, model_decrease=xi)
        if tol is None:
            tol = opts.eps_abs + opts.eps_rel * crit
        if crit < tol:
            stats.status = Status.FIRST_ORDER
            info.status = "stop"
            if callback:
                callback(info)
            break
        k += 1

        fz = problem.obj(z)
        stats.n_f += 1
        r = rho(fx, hx, fz, hz, xi)
        info.rho, info.f_trial, info.h_trial = r, fz, hz
        if r >= consts.eta1:
            g = problem.grad(z)
            stats.n_grad += 1
            x, fx, hx = z, fz, hz
            info.status = "very_successful" if r >= consts.eta2 else "successful"
        else:
            info.status = "unsuccessful"
        if r >= consts.eta2:
            sigma = max(opts.sigma_min, consts.gamma2 * sigma)
        elif r < consts.eta1:
            sigma *= consts.gamma3
        if callback:
            callback(info)

    stats.final_f = fx
    stats.final_h = hx
    stats.final_h_over_lambda = reg.count(x)
    stats.final_criticality = crit
    if problem.x_star is not None:
        stats.x_error = float(np.linalg.norm(x - problem.x_star))
    stats.meta.update(final_sigma=sigma)
    stats.time_s = time.perf_counter() - t0
    return x, stats
