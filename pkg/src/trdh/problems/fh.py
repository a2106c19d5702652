"""Parameter estimation for the FitzHugh-Nagumo neuron model.

    dV/dt = (V - V^3/3 - W + x1) / x2,    dW/dt = x2 (x3 V - x4 W + x5)

The objective is half the squared distance between the sampled trajectory
for ``x`` and the one for the reference ``x_bar`` (a van der Pol
oscillator).  Both are computed with the same fixed-step RK4 scheme; the
gradient integrates the 2 x 5 forward sensitivity system alongside the
states with that same scheme, so it is exact for the discrete objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..prox import BoxedSeparableRegularizer, Norm
from .base import EvaluationError, RegularizedProblem

# |x2| below this makes the right-hand side unusable
X2_GUARD = 1e-6
# states beyond this magnitude are treated as a blow-up
STATE_CAP = 1e100


@dataclass(frozen=True)
class FhConfig:
    t_end: float = 20.0
    n_samples: int = 100
    v0: float = 2.0
    w0: float = 0.0
    x_bar: tuple = (0.0, 0.2, 1.0, 0.0, 0.0)
    # None selects 10 without and 40 with the bound on x2
    lam: float | None = None
    substeps: int = 10
    x0: tuple | None = None
    kind: str = "l0"
    x2_lower: float = 0.5

    def __post_init__(self):
        if not self.t_end > 0 or self.n_samples < 1 or self.substeps < 1:
            raise ValueError("need t_end > 0, n_samples >= 1 and substeps >= 1")
        if len(self.x_bar) != 5 or (self.x0 is not None and len(self.x0) != 5):
            raise ValueError("x_bar and x0 must have 5 entries")
        Norm(self.kind)

    @property
    def step(self) -> float:
        return self.t_end / (self.n_samples * self.substeps)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.n_samples + 1)


def _check(x2, v, w):
    if abs(x2) < X2_GUARD:
        raise EvaluationError(f"|x2| = {abs(x2):.1e} is too small")
    if not (abs(v) < STATE_CAP and abs(w) < STATE_CAP):
        raise EvaluationError("trajectory blew up")


def simulate(x, cfg: FhConfig) -> np.ndarray:
    """Sampled states, shape ``(n_samples + 1, 2)``."""
    x1, x2, x3, x4, x5 = (float(t) for t in x)
    _check(x2, cfg.v0, cfg.w0)
    h = cfg.step
    v, w = cfg.v0, cfg.w0
    out = np.empty((cfg.n_samples + 1, 2))
    out[0] = v, w

    def rhs(v, w):
        return (v - v * v * v / 3.0 - w + x1) / x2, x2 * (x3 * v - x4 * w + x5)

    for j in range(1, cfg.n_samples + 1):
        for _ in range(cfg.substeps):
            a1, b1 = rhs(v, w)
            a2, b2 = rhs(v + 0.5 * h * a1, w + 0.5 * h * b1)
            a3, b3 = rhs(v + 0.5 * h * a2, w + 0.5 * h * b2)
            a4, b4 = rhs(v + h * a3, w + h * b3)
            v += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            w += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            _check(x2, v, w)
        out[j] = v, w
    return out


def simulate_sensitivities(x, cfg: FhConfig):
    """Sampled states and their derivatives with respect to ``x``.

    Returns ``(states, sens)`` with shapes ``(N, 2)`` and ``(N, 2, 5)``.
    The augmented state is ``(V, W, dV/dx, dW/dx)``; scalar arithmetic keeps
    the 12-dimensional RK4 cheap.
    """
    x1, x2, x3, x4, x5 = (float(t) for t in x)
    _check(x2, cfg.v0, cfg.w0)
    h = cfg.step
    inv = 1.0 / x2
    states = np.empty((cfg.n_samples + 1, 2))
    sens = np.zeros((cfg.n_samples + 1, 2, 5))
    states[0] = cfg.v0, cfg.w0

    def rhs(y):
        v, w = y[0], y[1]
        a = v - v * v * v / 3.0 - w + x1
        c = x3 * v - x4 * w + x5
        jv = (1.0 - v * v) * inv
        out = [a * inv, x2 * c]
        out += [jv * y[2 + i] - inv * y[7 + i] for i in range(5)]
        out += [x2 * (x3 * y[2 + i] - x4 * y[7 + i]) for i in range(5)]
        out[2] += inv
        out[3] -= a * inv * inv
        out[8] += c
        out[9] += x2 * v
        out[10] -= x2 * w
        out[11] += x2
        return out

    y = [cfg.v0, cfg.w0] + [0.0] * 10
    h2, h6 = 0.5 * h, h / 6.0
    for j in range(1, cfg.n_samples + 1):
        for _ in range(cfg.substeps):
            k1 = rhs(y)
            k2 = rhs([a + h2 * b for a, b in zip(y, k1)])
            k3 = rhs([a + h2 * b for a, b in zip(y, k2)])
            k4 = rhs([a + h * b for a, b in zip(y, k3)])
            y = [a + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)]
            _check(x2, y[0], y[1])
        states[j] = y[0], y[1]
        sens[j, 0] = y[2:7]
        sens[j, 1] = y[7:12]
    return states, sens


def fh_problem(cfg: FhConfig | None = None, constrained: bool = False) -> RegularizedProblem:
    """``min 1/2 ||traj(x) - traj(x_bar)||^2 + lam ||x||_p``, optionally with ``x2 >= cfg.x2_lower``."""
    cfg = cfg or FhConfig()
    x_bar = np.asarray(cfg.x_bar, dtype=float)
    target = simulate(x_bar, cfg)
    lam = cfg.lam if cfg.lam is not None else (40.0 if constrained else 10.0)

    def f(x):
        r = simulate(x, cfg) - target
        return 0.5 * float(np.sum(r * r))

    def grad(x):
        states, sens = simulate_sensitivities(x, cfg)
        return np.einsum("ij,ijk->k", states - target, sens)

    lower = np.full(5, -np.inf)
    if constrained:
        lower[1] = cfg.x2_lower
    reg = BoxedSeparableRegularizer(Norm(cfg.kind), lam, lower, np.full(5, np.inf))
    if cfg.x0 is not None:
        x0 = reg.project(np.asarray(cfg.x0, dtype=float))
    else:
        x0 = np.full(5, 0.5)
        if constrained:
            # strictly inside the bound on x2
            x0[1] = max(x0[1], cfg.x2_lower + 0.1)
    meta = dict(family="fh", constrained=constrained, lam=lam, kind=Norm(cfg.kind).value,
                substeps=cfg.substeps, n_samples=cfg.n_samples, x0=x0.tolist())
    return RegularizedProblem(f, grad, reg, x0, x_bar, name="fh-cstr" if constrained else "fh", meta=meta)
