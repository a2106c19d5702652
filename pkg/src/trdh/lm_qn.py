"""Limited-memory SR1 and BFGS Hessian approximations.

Both operators are kept in unrolled form

    B = b0 * I + sum_j c_j u_j u_j'

with at most two rank-one terms per stored pair.  The terms are rebuilt from
the stored pairs after every accepted update, which costs O(memory^2 n) and
keeps products, the exact diagonal and norm bounds cheap.
"""

from __future__ import annotations

import enum
from collections import deque

import numpy as np

__all__ = ["QNKind", "LimitedMemoryOp"]

BFGS_CURVATURE_TOL = 1e-12
SR1_DENOM_TOL = 1e-8


class QNKind(str, enum.Enum):
    LSR1 = "lsr1"
    LBFGS = "lbfgs"


class LimitedMemoryOp:
    """Limited-memory quasi-Newton approximation of a Hessian.

    Parameters
    ----------
    n : int
        Dimension.
    kind : QNKind or str
        ``"lsr1"`` or ``"lbfgs"``.
    memory : int
        Number of secant pairs retained; the oldest is evicted first.
    scale : float
        Initial ``B0 = scale * I``.  LBFGS replaces it with ``y'y / s'y`` of
        the most recent pair once one is stored; LSR1 keeps it.
    """

    def __init__(self, n: int, kind="lsr1", memory: int = 5, scale: float = 1.0):
        if memory < 1:
            raise ValueError("memory must be positive")
        self.n = int(n)
        self.kind = QNKind(kind)
        self.memory = int(memory)
        self.init_scale = float(scale)
        self.pairs: deque[tuple[np.ndarray, np.ndarray]] = deque(maxlen=self.memory)
        self.scale = self.init_scale
        self._vecs: list[np.ndarray] = []
        self._coefs: list[float] = []

    def __len__(self):
        return len(self.pairs)

    def reset(self):
        self.pairs.clear()
        self._rebuild()

    def copy(self) -> "LimitedMemoryOp":
        other = LimitedMemoryOp(self.n, self.kind, self.memory, self.init_scale)
        other.pairs.extend((s.copy(), y.copy()) for s, y in self.pairs)
        other._rebuild()
        return other

    # -- products -----------------------------------------------------------

    def apply(self, v) -> np.ndarray:
        """Return ``B @ v``."""
        v = np.asarray(v, dtype=float)
        out = self.scale * v
        for u, c in zip(self._vecs, self._coefs):
            out += u * (c * (u @ v))
        return out

    def __matmul__(self, v):
        return self.apply(v)

    def diagonal(self) -> np.ndarray:
        """Exact diagonal of ``B``; matches ``apply(e_i)[i]`` bit for bit."""
        out = np.full(self.n, self.scale)
        for u, c in zip(self._vecs, self._coefs):
            out += u * (c * u)
        return out

    def to_dense(self) -> np.ndarray:
        out = self.scale * np.eye(self.n)
        for u, c in zip(self._vecs, self._coefs):
            out += c * np.outer(u, u)
        return out

    def opnorm(self) -> float:
        """Exact ``||B||_2`` from the eigenvalues of the low-rank part.

        With ``U = QR`` the nonzero spectrum of ``U C U'`` is that of
        ``R C R'``, so ``B`` has eigenvalues ``b0 + eig(R C R')`` and ``b0``.
        """
        if not self._vecs:
            return abs(self.scale)
        U = np.column_stack(self._vecs)
        _, R = np.linalg.qr(U)
        small = (R * np.asarray(self._coefs)) @ R.T
        eig = self.scale + np.linalg.eigvalsh(0.5 * (small + small.T))
        out = float(np.max(np.abs(eig)))
        if U.shape[1] < self.n:
            out = max(out, abs(self.scale))
        return out

    def opnorm_bound(self) -> float:
        """Cheap upper bound on ``||B||_2`` from the unrolled terms."""
        return abs(self.scale) + sum(abs(c) * (u @ u) for u, c in zip(self._vecs, self._coefs))

    def opnorm_power(self, iters: int = 20, seed: int = 0) -> float:
        """Power-iteration estimate of ``||B||_2`` (a lower bound)."""
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(self.n)
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(iters):
            w = self.apply(v)
            lam = float(np.linalg.norm(w))
            if lam == 0.0:
                break
            v = w / lam
        return lam

    # -- updates ------------------------------------------------------------

    def _accepts(self, s, y) -> bool:
        ns = np.linalg.norm(s)
        if ns == 0.0:
            return False
        if self.kind is QNKind.LBFGS:
            return s @ y > BFGS_CURVATURE_TOL * ns * np.linalg.norm(y)
        r = y - self.apply(s)
        nr = np.linalg.norm(r)
        return nr > 0.0 and abs(s @ r) > SR1_DENOM_TOL * ns * nr

    def update(self, s, y) -> bool:
        """Store the pair ``(s, y)`` if it passes the curvature screen."""
        s = np.array(s, dtype=float, copy=True)
        y = np.array(y, dtype=float, copy=True)
        if s.shape != (self.n,) or y.shape != (self.n,):
            raise ValueError("pair dimension mismatch")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(y))):
            return False
        if not self._accepts(s, y):
            return False
        self.pairs.append((s, y))
        self._rebuild()
        return True

    def _rebuild(self):
        self._vecs, self._coefs = [], []
        if self.kind is QNKind.LBFGS:
            if self.pairs:
                s, y = self.pairs[-1]
                self.scale = float(y @ y / (s @ y))
            else:
                self.scale = self.init_scale
            for s, y in self.pairs:
                bs = self.apply(s)
                sbs = s @ bs
                sy = s @ y
                if not (sbs > 0 and sy > 0):
                    continue
                self._vecs += [bs, y.copy()]
                self._coefs += [-1.0 / sbs, 1.0 / sy]
        else:
            self.scale = self.init_scale
            for s, y in self.pairs:
                r = y - self.apply(s)
                nr = np.linalg.norm(r)
                den = s @ r
                if nr == 0.0 or abs(den) <= SR1_DENOM_TOL * np.linalg.norm(s) * nr:
                    continue
                self._vecs.append(r)
                self._coefs.append(1.0 / den)
