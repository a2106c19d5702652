from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..prox import BoxedSeparableRegularizer


class EvaluationError(ArithmeticError):
    """The smooth objective cannot be evaluated at the requested point."""


@dataclass
class RegularizedProblem:
    """``min f(x) + h(x)`` subject to the box carried by ``reg``.

    ``f`` may raise :class:`EvaluationError` (or return a non-finite value);
    :meth:`obj` maps both to ``+inf`` so a solver simply rejects the point.
    """

    f: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    reg: BoxedSeparableRegularizer
    x0: np.ndarray
    x_star: np.ndarray | None = None
    name: str = "problem"
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=float)
        if self.x0.shape != (self.reg.dim,):
            raise ValueError(f"x0 has shape {self.x0.shape}, expected ({self.reg.dim},)")
        if not self.reg.is_feasible(self.x0):
            raise ValueError("x0 violates the bounds")
        if self.x_star is not None:
            self.x_star = np.asarray(self.x_star, dtype=float)

    @property
    def dim(self) -> int:
        return self.reg.dim

    def obj(self, x) -> float:
        try:
            with np.errstate(over="raise", invalid="raise", divide="raise"):
                val = float(self.f(x))
        except (EvaluationError, FloatingPointError, OverflowError):
            return np.inf
        return val if np.isfinite(val) else np.inf

    def h(self, x) -> float:
        return self.reg.value(x)
