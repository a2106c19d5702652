"""Diagonal Hessian approximations from the weak secant equation.

All updates work with the normalized pair ``s / ||s||``, ``y / ||s||`` so that
the weak secant condition stays well scaled as steps shrink.
"""

from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "DiagKind",
    "spectral_sigma",
    "psb_diag_update",
    "andrei_diag_update",
    "clip",
    "DiagonalModel",
    "scaled_pair",
]

D_MAX = 1e15
# relative floor on ||s|| below which an update is skipped
SKIP_TOL = 1e-13


class DiagKind(str, enum.Enum):
    SPECTRAL = "spec"
    PSB = "psb"
    ANDREI = "andrei"
    NONE = "none"

    @property
    def label(self) -> str:
        return {"spec": "Spec", "psb": "PSB", "andrei": "Andrei", "none": "None"}[self.value]


def _pair(s, y):
    s = np.asarray(s, dtype=float)
    y = np.asarray(y, dtype=float)
    if s.shape != y.shape:
        raise ValueError("s and y must have the same shape")
    return s, y


def scaled_pair(s, y):
    """Return ``(s / ||s||, y / ||s||)``; raises ``ZeroDivisionError`` for ``s = 0``."""
    s, y = _pair(s, y)
    ns = np.linalg.norm(s)
    if ns == 0.0:
        raise ZeroDivisionError("zero step, update skipped")
    return s / ns, y / ns


def spectral_sigma(s, y) -> float:
    """Least-squares solution of ``sigma s = y``, i.e. ``s'y / s's``."""
    s, y = _pair(s, y)
    ss = s @ s
    if ss == 0.0:
        raise ZeroDivisionError("zero step, update skipped")
    return float(s @ y / ss)


def psb_diag_update(d_prev, s, y) -> np.ndarray:
    """Least-change (Frobenius) diagonal update satisfying the scaled weak secant."""
    st, yt = scaled_pair(s, y)
    d_prev = np.asarray(d_prev, dtype=float)
    s2 = st * st
    coef = (st @ yt - d_prev @ s2) / (s2 @ s2)
    return d_prev + coef * s2


def andrei_diag_update(d_prev, s, y) -> np.ndarray:
    """Trace-penalized diagonal update satisfying the scaled weak secant.

    Unlike the PSB variant it shifts every entry down by one, which clusters
    the diagonal.
    """
    st, yt = scaled_pair(s, y)
    d_prev = np.asarray(d_prev, dtype=float)
    s2 = st * st
    coef = (st @ yt + st @ st - d_prev @ s2) / (s2 @ s2)
    return d_prev + coef * s2 - 1.0


def clip(d, d_max: float = D_MAX) -> np.ndarray:
    if not d_max > 0:
        raise ValueError("d_max must be positive")
    return np.clip(np.asarray(d, dtype=float), -d_max, d_max)


class DiagonalModel:
    """Mutable diagonal Hessian approximation used by TRDH and iTRDH.

    Parameters
    ----------
    d0 : array_like
        Initial diagonal.
    kind : DiagKind
        Update rule applied on accepted steps. ``NONE`` freezes ``d``.
    d_max : float
        Entries are clipped to ``[-d_max, d_max]`` after each update.
    """

    def __init__(self, d0, kind=DiagKind.SPECTRAL, d_max: float = D_MAX):
        self.kind = DiagKind(kind)
        self.d_max = float(d_max)
        self.d = clip(np.array(d0, dtype=float, copy=True), self.d_max)
        self.n_updates = 0
        self.n_skipped = 0

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.d))) if self.d.size else 0.0

    def update(self, s, y, x_norm: float = 0.0) -> bool:
        """Update from the secant pair of an accepted step.

        Returns ``False`` when the step is too short and the update is skipped.
        """
        if self.kind is DiagKind.NONE:
            return False
        s, y = _pair(s, y)
        if np.linalg.norm(s) < SKIP_TOL * (1.0 + x_norm):
            self.n_skipped += 1
            return False
        if self.kind is DiagKind.SPECTRAL:
            d = np.full_like(self.d, spectral_sigma(s, y))
        elif self.kind is DiagKind.PSB:
            d = psb_diag_update(self.d, s, y)
        else:
            d = andrei_diag_update(self.d, s, y)
        if not np.all(np.isfinite(d)):
            self.n_skipped += 1
            return False
        self.d = clip(d, self.d_max)
        self.n_updates += 1
        return True
