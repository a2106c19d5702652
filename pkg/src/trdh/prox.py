"""Closed-form indefinite proximal operators for separable l0/l1 regularizers.

The indefinite prox of ``h`` with respect to a linear coefficient ``g``, a
diagonal ``d`` of any sign and a box ``[lo, hi]`` is

    argmin_x  g'x + 1/2 x'diag(d)x + h(x)   subject to  lo <= x <= hi,

which decouples into scalar problems.  Each scalar problem is solved by
evaluating the true piecewise objective on a finite candidate set that is
guaranteed to contain a global minimizer.  Ties are broken toward the
candidate closest to zero, then toward the smaller one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InfeasibleError",
    "Norm",
    "BoxedSeparableRegularizer",
    "IproxQuery",
    "iprox_l0_scalar",
    "iprox_l1_scalar",
    "iprox",
    "prox_standard",
    "solve_boxed",
]

# |delta| below this is treated as an exact zero curvature.
ZERO_CURVATURE = 1e-300


class InfeasibleError(ValueError):
    """Raised when an effective box is empty in some component."""


class Norm(str, enum.Enum):
    ZERO = "l0"
    ONE = "l1"


@dataclass(frozen=True)
class BoxedSeparableRegularizer:
    """``h(x) = lam * sum_{i in mask} |x_i|_p`` plus the indicator of ``[lower, upper]``.

    ``mask`` selects the components that carry the penalty; ``None`` means all
    of them.  Components outside the mask are only box constrained.
    """

    kind: Norm
    lam: float
    lower: np.ndarray
    upper: np.ndarray
    mask: np.ndarray | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "kind", Norm(self.kind))
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("lower and upper must be 1-D arrays of equal length")
        if not self.lam >= 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)):
            raise ValueError("bounds must not contain NaN")
        if np.any(lower > upper):
            raise ValueError("lower must not exceed upper")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.mask is not None:
            mask = np.asarray(self.mask, dtype=bool)
            if mask.shape != lower.shape:
                raise ValueError("mask must match the bounds shape")
            mask.flags.writeable = False
            object.__setattr__(self, "mask", mask)

    @classmethod
    def unbounded(cls, kind, lam, n, mask=None):
        return cls(kind, lam, np.full(n, -np.inf), np.full(n, np.inf), mask)

    @property
    def dim(self) -> int:
        return self.lower.size

    def weights(self) -> np.ndarray:
        """Per-component penalty weights."""
        w = np.full(self.dim, float(self.lam))
        if self.mask is not None:
            w[~self.mask] = 0.0
        return w

    def count(self, x) -> float:
        """``h(x) / lam``: the (masked) l0 count or l1 norm, ignoring the box."""
        x = np.asarray(x, dtype=float)
        if self.mask is not None:
            x = x[self.mask]
        if self.kind is Norm.ZERO:
            return float(np.count_nonzero(x))
        return float(np.sum(np.abs(x)))

    def value(self, x) -> float:
        """``h(x)`` without the box indicator."""
        return self.lam * self.count(x)

    def is_feasible(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def project(self, x) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True)
class IproxQuery:
    """Linear coefficient, diagonal curvature and box of one iprox evaluation.

    Both box ends must be finite; the standard prox goes through
    :func:`prox_standard`, which handles infinite bounds analytically.
    """

    g: np.ndarray
    d: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        arrs = [np.atleast_1d(np.asarray(a, dtype=float)) for a in (self.g, self.d, self.lower, self.upper)]
        if len({a.shape for a in arrs}) != 1 or arrs[0].ndim != 1:
            raise ValueError("g, d, lower and upper must be 1-D arrays of equal length")
        for name, a in zip(("g", "d", "lower", "upper"), arrs):
            if not np.all(np.isfinite(a)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, a)
        if np.any(self.lower > self.upper):
            raise ValueError("lower must not exceed upper")


# ---------------------------------------------------------------------------
# vector kernels
# ---------------------------------------------------------------------------


def _objective(x, g, d, w, kind):
    with np.errstate(invalid="ignore", over="ignore"):
        val = g * x + 0.5 * d * x * x
    if kind is Norm.ZERO:
        val = val + np.where(x != 0.0, w, 0.0)
    else:
        val = val + w * np.abs(x)
    return val


def _select(cands, valid, g, d, w, kind):
    """Pick, per column, the valid candidate with the least objective.

    Ties go to the smallest ``|x|`` and then to the smallest ``x``.
    """
    vals = _objective(cands, g, d, w, kind)
    vals = np.where(valid, vals, np.inf)
    best = vals.min(axis=0)
    tied = valid & (vals == best)
    mag = np.where(tied, np.abs(cands), np.inf)
    tied &= mag == mag.min(axis=0)
    pick = np.where(tied, cands, np.inf).min(axis=0)
    return pick


def _kernel_l0(g, d, w, lo, hi):
    n = g.size
    pos = d >= ZERO_CURVATURE
    with np.errstate(divide="ignore", invalid="ignore"):
        stat = np.where(pos, np.clip(-g / np.where(pos, d, 1.0), lo, hi), 0.0)
    zero_in = (lo <= 0.0) & (hi >= 0.0)
    cands = np.stack([lo, hi, np.zeros(n), stat])
    valid = np.stack([np.isfinite(lo), np.isfinite(hi), zero_in, pos])
    return _select(cands, valid, g, d, w, Norm.ZERO)


def _kernel_l1(g, d, w, lo, hi):
    n = g.size
    pos = d >= ZERO_CURVATURE
    out = np.empty(n)
    if np.any(pos):
        gp, dp, wp = g[pos], d[pos], w[pos]
        xbar = np.where(gp > wp, -(gp - wp) / dp, np.where(gp < -wp, -(gp + wp) / dp, 0.0))
        out[pos] = np.clip(xbar, lo[pos], hi[pos])
    rest = ~pos
    if np.any(rest):
        lr, hr = lo[rest], hi[rest]
        zero_in = (lr <= 0.0) & (hr >= 0.0)
        cands = np.stack([lr, hr, np.zeros(lr.size)])
        valid = np.stack([np.ones(lr.size, bool), np.ones(lr.size, bool), zero_in])
        out[rest] = _select(cands, valid, g[rest], d[rest], w[rest], Norm.ONE)
    return out


def solve_boxed(g, d, lo, hi, weights, kind) -> np.ndarray:
    """Componentwise minimizer of ``g x + d x^2 / 2 + w h(x)`` over ``[lo, hi]``.

    Infinite box ends are allowed only in components with ``d > 0``, where the
    minimizer is finite.  No further validation is done; this is the hot path
    used by the solvers.
    """
    kind = Norm(kind)
    g = np.asarray(g, dtype=float)
    d = np.broadcast_to(np.asarray(d, dtype=float), g.shape)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), g.shape)
    hi = np.broadcast_to(np.asarray(hi, dtype=float), g.shape)
    w = np.broadcast_to(np.asarray(weights, dtype=float), g.shape)
    if kind is Norm.ZERO:
        return _kernel_l0(g, d, w, lo, hi)
    return _kernel_l1(g, d, w, lo, hi)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def _check_scalar(g, delta, lam, lo, hi):
    for name, v in (("g", g), ("delta", delta), ("lam", lam), ("lo", lo), ("hi", hi)):
        if not np.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v}")
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")


def iprox_l0_scalar(g: float, delta: float, lam: float, lo: float, hi: float) -> float:
    """Global minimizer of ``g x + delta x^2 / 2 + lam |x|_0`` over ``[lo, hi]``."""
    _check_scalar(g, delta, lam, lo, hi)
    x = _kernel_l0(np.array([g], float), np.array([delta], float), np.array([lam], float),
                   np.array([lo], float), np.array([hi], float))
    return float(x[0])


def iprox_l1_scalar(g: float, delta: float, lam: float, lo: float, hi: float) -> float:
    """Global minimizer of ``g x + delta x^2 / 2 + lam |x|`` over ``[lo, hi]``."""
    _check_scalar(g, delta, lam, lo, hi)
    x = _kernel_l1(np.array([g], float), np.array([delta], float), np.array([lam], float),
                   np.array([lo], float), np.array([hi], float))
    return float(x[0])


def iprox(query: IproxQuery, reg: BoxedSeparableRegularizer) -> np.ndarray:
    """Indefinite prox over the query box intersected with the regularizer's box.

    Raises
    ------
    InfeasibleError
        If the intersection is empty in some component.
    """
    if query.g.size != reg.dim:
        raise ValueError(f"query has dimension {query.g.size}, regularizer {reg.dim}")
    lo = np.maximum(query.lower, reg.lower)
    hi = np.minimum(query.upper, reg.upper)
    if np.any(lo > hi):
        bad = np.flatnonzero(lo > hi)
        raise InfeasibleError(f"empty effective box in components {bad[:10].tolist()}")
    return solve_boxed(query.g, query.d, lo, hi, reg.weights(), reg.kind)


def prox_standard(q, nu: float, reg: BoxedSeparableRegularizer) -> np.ndarray:
    """``argmin_x ||x - q||^2 / (2 nu) + h(x)`` over the regularizer's box.

    With an unbounded box this is soft thresholding for l1 and hard
    thresholding for l0.
    """
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    q = np.asarray(q, dtype=float)
    if q.shape != reg.lower.shape:
        raise ValueError("q must match the regularizer dimension")
    inv = 1.0 / nu
    return solve_boxed(-q / nu, np.full(q.size, inv), reg.lower, reg.upper, reg.weights(), reg.kind)
