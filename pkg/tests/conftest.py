"""Small problems with known solutions shared by the solver tests."""

import dataclasses

import numpy as np

from trdh import (
    BoxedSeparableRegularizer,
    Norm,
    RegularizedProblem,
    SolverOptions,
    itrdh_solve,
    r2_solve,
    tr_solve,
    trdh_solve,
)

LASSO_A, LASSO_LAM = 3.0, 1.0


def lasso_1d(x0=-2.0):
    """``(x - a)^2 / 2 + lam |x|``; the minimizer is ``a - lam``."""
    reg = BoxedSeparableRegularizer.unbounded(Norm.ONE, LASSO_LAM, 1)
    prob = RegularizedProblem(
        f=lambda x: 0.5 * float((x[0] - LASSO_A) ** 2),
        grad=lambda x: np.array([x[0] - LASSO_A]),
        reg=reg,
        x0=np.array([x0]),
        name="lasso-1d",
    )
    xs = LASSO_A - LASSO_LAM
    return prob, xs, 0.5 * LASSO_LAM**2 + LASSO_LAM * xs


def _soft_clip(q, t, lo, hi):
    return np.clip(np.sign(q) * np.maximum(np.abs(q) - t, 0.0), lo, hi)


def reference_box_l1(Q, c, lam, lo, hi, iters=20000):
    """Projected proximal gradient with momentum, run far past convergence."""
    L = np.linalg.eigvalsh(Q).max()
    x = np.clip(np.zeros(c.size), lo, hi)
    y, t = x.copy(), 1.0
    for _ in range(iters):
        x_new = _soft_clip(y - (Q @ y + c) / L, lam / L, lo, hi)
        t_new = 0.5 * (1 + np.sqrt(1 + 4 * t * t))
        y = x_new + (t - 1) / t_new * (x_new - x)
        x, t = x_new, t_new
    return x


def box_qp_l1(seed=0, n=10, lam=0.5):
    """Convex quadratic plus ``lam ||x||_1`` on a box that is active at the solution."""
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    Q = M @ M.T / n + np.eye(n)
    c = 3 * rng.standard_normal(n)
    lo, hi = np.full(n, -1.0), np.full(n, 1.0)
    reg = BoxedSeparableRegularizer(Norm.ONE, lam, lo, hi)
    prob = RegularizedProblem(
        f=lambda x: float(0.5 * x @ Q @ x + c @ x),
        grad=lambda x: Q @ x + c,
        reg=reg,
        x0=rng.uniform(-1, 1, n),
        name="box-qp-l1",
    )
    xs = reference_box_l1(Q, c, lam, lo, hi)
    return prob, xs, prob.f(xs) + reg.value(xs)


def fd_gradient(f, x, h=1e-6):
    """Central finite differences, one coordinate at a time."""
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h * max(1.0, abs(x[i]))
        g[i] = (f(x + e) - f(x - e)) / (2 * e[i])
    return g


def rel_error(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-12))


TIGHT = SolverOptions(eps_abs=1e-8, eps_rel=1e-8, eps_abs_inner=1e-9)


def run_variant(variant, problem, opts=TIGHT, callback=None):
    solver, arg = variant
    if solver == "R2":
        return r2_solve(problem, opts, callback=callback)
    if solver in ("TRDH", "iTRDH"):
        fn = trdh_solve if solver == "TRDH" else itrdh_solve
        return fn(problem, dataclasses.replace(opts, diag_kind=arg), callback=callback)
    return tr_solve(problem, opts, subsolver=arg, callback=callback)


VARIANTS = [("R2", None)]
VARIANTS += [(s, d) for s in ("TRDH", "iTRDH") for d in ("spec", "psb", "andrei")]
VARIANTS += [("TR", sub) for sub in ("r2", "trdh", "itrdh")]
IDS = [f"{s}-{a}" if a else s for s, a in VARIANTS]


class Trace:
    """Collects accepted objective values, feasibility and sufficient-decrease checks."""

    def __init__(self, problem):
        self.problem = problem
        self.accepted = [problem.f(problem.x0) + problem.h(problem.x0)]
        self.feasible = True
        self.suff_decrease = True

    def __call__(self, info):
        self.feasible &= self.problem.reg.is_feasible(info.x)
        if info.s1 is not None and info.xi_cp is not None:
            bound = 0.5 / info.nu * float(info.s1 @ info.s1)
            self.suff_decrease &= info.xi_cp >= bound - 1e-10
        if info.status in ("successful", "very_successful"):
            z = info.x + info.step
            self.feasible &= self.problem.reg.is_feasible(z)
            self.accepted.append(info.f_trial + info.h_trial)

    def monotone(self):
        return all(b <= a + 1e-12 for a, b in zip(self.accepted, self.accepted[1:]))
