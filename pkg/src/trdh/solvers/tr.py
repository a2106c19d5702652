"""Outer quasi-Newton trust-region method with pluggable subproblem solvers."""

from __future__ import annotations

import dataclasses
import enum
import time

import numpy as np

from ..diag_qn import DiagKind
from ..lm_qn import LimitedMemoryOp, QNKind
from ..problems.base import RegularizedProblem
from ..prox import BoxedSeparableRegularizer
from .common import (
    DELTA_FLOOR,
    Callback,
    IterationInfo,
    ModelError,
    SolverOptions,
    SolverStats,
    Status,
    TrustRegionConstants,
    _xi_tol,
    constants_meta,
    criticality,
    first_prox_step,
    prox_box,
    radius_update,
    rho,
)
from .r2 import r2_solve
from .trdh import itrdh_solve, trdh_solve

# inner absolute tolerance on the first outer iteration
FIRST_INNER_EPS = 1e-5
INNER_EPS_CAP = 1e-2


class Subsolver(str, enum.Enum):
    R2 = "r2"
    TRDH = "trdh"
    ITRDH = "itrdh"


def _model_problem(x, g, op: LimitedMemoryOp, reg: BoxedSeparableRegularizer, radius: float, z0):
    """Quadratic model of ``f`` about ``x`` written in the trial point ``z = x + s``."""
    lo, hi = prox_box(x, reg, radius)
    sub_reg = BoxedSeparableRegularizer(reg.kind, reg.lam, lo, hi, reg.mask)

    def f(z):
        s = z - x
        return float(g @ s + 0.5 * (s @ op.apply(s)))

    def grad(z):
        return g + op.apply(z - x)

    return RegularizedProblem(f, grad, sub_reg, np.clip(z0, lo, hi), name="tr-model")


def tr_solve(
    problem: RegularizedProblem,
    opts: SolverOptions | None = None,
    consts: TrustRegionConstants | None = None,
    *,
    hessian="lsr1",
    subsolver="r2",
    memory: int = 5,
    callback: Callback | None = None,
):
    """Trust-region method on the model ``g's + s'B s/2 + h(x + s)`` with ``B`` limited-memory.

    Each outer iteration computes a proximal step ``s1`` (stopping test and
    subproblem radius), then hands the model restricted to
    ``min(delta, beta ||s1||_inf)`` to the subsolver, warm started at ``x + s1``.
    ``opts.diag_kind`` selects the diagonal approximation of a TRDH or iTRDH
    subsolver.
    """
    opts = opts or SolverOptions()
    consts = consts or TrustRegionConstants()
    subsolver = Subsolver(subsolver)
    hessian = QNKind(hessian)
    label = "TR-" + {Subsolver.R2: "R2", Subsolver.TRDH: "TRDH", Subsolver.ITRDH: "iTRDH"}[subsolver]
    if subsolver is not Subsolver.R2:
        label += f"-{opts.diag_kind.label}"
    stats = SolverStats(solver=label, meta=constants_meta(opts, consts))
    stats.meta.update(hessian=hessian.value, memory=memory, subsolver=subsolver.value)
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
    op = LimitedMemoryOp(x.size, hessian, memory)
    delta = opts.delta0

    tol = None
    crit = np.nan
    k = 0
    inner_failures = 0
    while True:
        if k >= opts.max_iter:
            stats.status = Status.MAX_ITER
            break
        if delta < DELTA_FLOOR:
            stats.status = Status.STALLED
            break
        bnorm = {"exact": op.opnorm, "bound": op.opnorm_bound, "power": op.opnorm_power}[opts.opnorm]()
        nu = 1.0 / (bnorm + 1.0 / (consts.alpha * delta))
        s1, z1, xi_cp = first_prox_step(x, g, hx, nu, delta, reg)
        stats.n_prox += 1
        stats.iterations += 1
        crit = criticality(nu, xi_cp, _xi_tol(fx, hx))
        info = IterationInfo(k=k, x=x, f=fx, h=hx, crit=crit, delta=delta, nu=nu, xi_cp=xi_cp, s1=s1)
        if tol is None:
            tol = opts.eps_abs + opts.eps_rel * crit
        if crit < tol:
            stats.status = Status.FIRST_ORDER
            info.status = "stop"
            if callback:
                callback(info)
            break

        radius = min(delta, consts.beta * float(np.max(np.abs(s1))))
        eps_inner = FIRST_INNER_EPS if k == 0 else max(opts.eps_abs_inner, min(INNER_EPS_CAP, crit))
        inner_opts = dataclasses.replace(
            opts, eps_abs=eps_inner, eps_rel=opts.eps_rel_inner, max_iter=opts.max_inner_iter
        )
        model = _model_problem(x, g, op, reg, radius, z1)
        k += 1
        try:
            if subsolver is Subsolver.R2:
                z, istats = r2_solve(model, inner_opts, consts, nu0=nu)
            else:
                if opts.diag_kind is DiagKind.SPECTRAL:
                    d0 = np.full(x.size, 1.0 / nu)
                else:
                    d0 = op.diagonal()
                run = itrdh_solve if subsolver is Subsolver.ITRDH else trdh_solve
                z, istats = run(model, inner_opts, consts, d0=d0, delta0=radius / 10)
        except (ModelError, FloatingPointError, ValueError):
            inner_failures += 1
            delta *= consts.gamma2
            info.status = "inner_failure"
            if callback:
                callback(info)
            continue
        stats.n_prox += istats.n_prox
        stats.n_inner += istats.iterations

        s = z - x
        hz = reg.value(z)
        xi = hx - float(g @ s + 0.5 * (s @ op.apply(s))) - hz
        info.step, info.radius, info.model_decrease = s, radius, xi
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
            op.update(s, gz - g)
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
    stats.meta.update(final_delta=delta, inner_failures=inner_failures, pairs=len(op))
    stats.time_s = time.perf_counter() - t0
    return x, stats
