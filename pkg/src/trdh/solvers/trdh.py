"""TRDH and its one-prox-per-iteration variant iTRDH."""

from __future__ import annotations

import time

import numpy as np

from ..diag_qn import DiagonalModel
from ..problems.base import RegularizedProblem
from .common import (
    DELTA_FLOOR,
    Callback,
    IterationInfo,
    SolverOptions,
    SolverStats,
    Status,
    TrustRegionConstants,
    _xi_tol,
    compute_nu_itrdh,
    compute_nu_trdh,
    constants_meta,
    criticality,
    diag_model_decrease,
    first_prox_step,
    radius_update,
    rho,
    second_step,
)


def _solve(
    problem: RegularizedProblem,
    opts: SolverOptions,
    consts: TrustRegionConstants,
    indefinite: bool,
    d0=None,
    delta0: float | None = None,
    callback: Callback | None = None,
):
    label = ("iTRDH-" if indefinite else "TRDH-") + opts.diag_kind.label
    stats = SolverStats(solver=label, meta=constants_meta(opts, consts))
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

    if d0 is None:
        d0 = np.full(x.size, 1.0 / opts.nu0)
    diag = DiagonalModel(d0, opts.diag_kind, opts.d_max)
    delta = opts.delta0 if delta0 is None else float(delta0)

    tol = None
    crit = np.nan
    k = 0
    while True:
        if k >= opts.max_iter:
            stats.status = Status.MAX_ITER
            break
        if delta < DELTA_FLOOR:
            stats.status = Status.STALLED
            break
        d = diag.d
        info = IterationInfo(k=k, x=x, f=fx, h=hx, crit=np.nan, delta=delta, nu=np.nan)

        if indefinite:
            nu = compute_nu_itrdh(d, consts.alpha)
            radius = delta
        else:
            nu = compute_nu_trdh(d, delta, consts.alpha)
            s1, _, xi_cp = first_prox_step(x, g, hx, nu, delta, reg)
            stats.n_prox += 1
            crit = criticality(nu, xi_cp, _xi_tol(fx, hx))
            info.xi_cp, info.s1 = xi_cp, s1
            if tol is None:
                tol = opts.eps_abs + opts.eps_rel * crit
            if crit < tol:
                info.crit, info.nu, info.status = crit, nu, "stop"
                stats.status = Status.FIRST_ORDER
                stats.iterations += 1
                if callback:
                    callback(info)
                break
            radius = min(delta, consts.beta * float(np.max(np.abs(s1))))

        s, z = second_step(x, g, d, radius, reg)
        stats.n_prox += 1
        stats.iterations += 1
        hz = reg.value(z)
        xi = diag_model_decrease(g, d, s, hx, hz)
        info.nu, info.step, info.radius, info.model_decrease = nu, s, radius, xi

        if indefinite:
            crit = criticality(nu, xi, _xi_tol(fx, hx))
            if tol is None:
                tol = opts.eps_abs + opts.eps_rel * crit
            if crit < tol:
                info.crit, info.status = crit, "stop"
                stats.status = Status.FIRST_ORDER
                if callback:
                    callback(info)
                break
        info.crit = crit
        k += 1

        if not xi > 0:
            delta *= consts.gamma2
            info.status = "degenerate"
            if callback:
                callback(info)
            continue

        fz = problem.obj(z)
        stats.n_f += 1
        r = rho(fx, hx, fz, hz, xi)
        info.rho, info.f_trial, info.h_trial = r, fz, hz
        if r >= consts.eta1:
            gz = problem.grad(z)
            stats.n_grad += 1
            diag.update(z - x, gz - g, float(np.linalg.norm(x)))
            x, fx, hx, g = z, fz, hz, gz
            info.status = "very_successful" if r >= consts.eta2 else "successful"
        else:
            info.status = "unsuccessful"
        delta = radius_update(delta, r, consts)
        if callback:
            callback(info)

    stats.final_f = fx
    stats.final_h = hx
    stats.final_h_over_lambda = reg.count(x)
    stats.final_criticality = crit
    if problem.x_star is not None:
        stats.x_error = float(np.linalg.norm(x - problem.x_star))
    stats.meta.update(final_delta=delta, diag_updates=diag.n_updates)
    stats.time_s = time.perf_counter() - t0
    return x, stats


def trdh_solve(problem, opts=None, consts=None, *, d0=None, delta0=None, callback=None):
    """Trust-region method with a diagonal Hessian and two prox evaluations per iteration.

    Each iteration computes a proximal step ``s1`` with the scalar curvature
    ``1/nu`` (its decrease is the stationarity measure), then the step of the
    diagonal model inside ``min(delta, beta ||s1||_inf)``.

    Returns
    -------
    x : ndarray
        Final iterate.
    stats : SolverStats
    """
    return _solve(problem, opts or SolverOptions(), consts or TrustRegionConstants(), False, d0, delta0, callback)


def itrdh_solve(problem, opts=None, consts=None, *, d0=None, delta0=None, callback=None):
    """Variant of :func:`trdh_solve` with a single prox evaluation per iteration.

    ``nu`` no longer depends on the radius, the first step is skipped and the
    stationarity measure is the decrease of the diagonal model itself.
    """
    return _solve(problem, opts or SolverOptions(), consts or TrustRegionConstants(), True, d0, delta0, callback)
