"""Basis pursuit denoise: sparse least squares with an orthonormal-row sensing matrix."""

from __future__ import annotations

import numpy as np

from ..prox import BoxedSeparableRegularizer, Norm
from .base import RegularizedProblem


def gen_bpdn(
    m: int = 200,
    n: int = 512,
    k_nnz: int = 10,
    noise_sd: float = 0.01,
    seed: int = 0,
    constrained: bool = False,
    kind: str = "l0",
) -> RegularizedProblem:
    """``min ||Ax - b||^2 / 2 + lam ||x||_p`` with ``b = A x_star + noise``.

    ``A`` has orthonormal rows, ``x_star`` has ``k_nnz`` entries equal to
    ``+-1`` (or ``1`` when ``constrained``, which also imposes ``x >= 0``) and
    ``lam = 0.1 ||A'b||_inf``.
    """
    if not 0 < m < n:
        raise ValueError(f"need 0 < m < n, got m={m}, n={n}")
    if not 0 < k_nnz <= n:
        raise ValueError("k_nnz must lie in [1, n]")
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, m)))
    A = np.ascontiguousarray(q.T)
    support = rng.choice(n, size=k_nnz, replace=False)
    x_star = np.zeros(n)
    x_star[support] = 1.0 if constrained else rng.choice([-1.0, 1.0], size=k_nnz)
    b = A @ x_star + noise_sd * rng.standard_normal(m)
    lam = 0.1 * float(np.max(np.abs(A.T @ b)))

    def f(x):
        r = A @ x - b
        return 0.5 * float(r @ r)

    def grad(x):
        return A.T @ (A @ x - b)

    lower = np.zeros(n) if constrained else np.full(n, -np.inf)
    reg = BoxedSeparableRegularizer(Norm(kind), lam, lower, np.full(n, np.inf))
    meta = dict(family="bpdn", m=m, n=n, k_nnz=k_nnz, noise_sd=noise_sd, seed=seed,
                constrained=constrained, lam=lam, kind=Norm(kind).value, f_star=f(x_star))
    prob = RegularizedProblem(f, grad, reg, np.zeros(n), x_star, name="bpdn-cstr" if constrained else "bpdn",
                              meta=meta)
    prob.data = (A, b)
    return prob
