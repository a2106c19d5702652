"""Sparse nonnegative matrix factorization ``A ~ W H`` with an l0 penalty on ``H``."""

from __future__ import annotations

import numpy as np

from ..prox import BoxedSeparableRegularizer, Norm
from .base import RegularizedProblem


def nnmf_data(m: int, n: int, k: int, rng: np.random.Generator, spread: float = 0.2,
              center_scale: float = 2.0, density: float = 0.3) -> np.ndarray:
    """``m x n`` nonnegative data; each column is drawn from one of ``k`` Gaussians.

    Cluster centers are uniform on ``[0, center_scale]`` in a random fraction
    ``density`` of the features and zero elsewhere, so clusters are distinct.
    """
    centers = rng.uniform(0.0, center_scale, size=(m, k)) * (rng.uniform(size=(m, k)) < density)
    labels = rng.integers(k, size=n)
    A = centers[:, labels] + spread * rng.standard_normal((m, n))
    return np.maximum(A, 0.0)


def split(x, m: int, n: int, k: int):
    """View the stacked variable as ``(W, H)``; both blocks are column-major."""
    W = x[: m * k].reshape((m, k), order="F")
    H = x[m * k:].reshape((k, n), order="F")
    return W, H


def gen_nnmf(m: int = 100, n: int = 50, k: int = 5, lam: float = 0.1, seed: int = 0,
             spread: float = 0.2, center_scale: float = 2.0, density: float = 0.3,
             x0_scale: float = 2.0) -> RegularizedProblem:
    """``min ||A - WH||_F^2 / 2 + lam ||vec H||_0`` subject to ``W, H >= 0``.

    The variable is ``(vec W, vec H)`` of length ``mk + kn``; only the ``H``
    block is penalized.  ``x0`` is uniform on ``[0, x0_scale]``.
    """
    if not k < min(m, n):
        raise ValueError("need k < min(m, n)")
    rng = np.random.default_rng(seed)
    A = nnmf_data(m, n, k, rng, spread, center_scale, density)
    dim = m * k + k * n

    def f(x):
        W, H = split(x, m, n, k)
        R = W @ H - A
        return 0.5 * float(np.sum(R * R))

    def grad(x):
        W, H = split(x, m, n, k)
        R = W @ H - A
        return np.concatenate([(R @ H.T).ravel(order="F"), (W.T @ R).ravel(order="F")])

    mask = np.zeros(dim, dtype=bool)
    mask[m * k:] = True
    reg = BoxedSeparableRegularizer(Norm.ZERO, lam, np.zeros(dim), np.full(dim, np.inf), mask)
    x0 = rng.uniform(0.0, x0_scale, size=dim)
    meta = dict(family="nnmf", m=m, n=n, k=k, lam=lam, seed=seed, spread=spread, center_scale=center_scale,
                density=density, x0_scale=x0_scale, data_norm2=float(np.sum(A * A)))
    prob = RegularizedProblem(f, grad, reg, x0, name="nnmf", meta=meta)
    prob.data = A
    return prob
