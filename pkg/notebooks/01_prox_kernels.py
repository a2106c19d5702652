# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Indefinite proximal operators
#
# Each component solves `min g x + d x^2 / 2 + h(x)` over an interval, where
# `d` may be negative.  With `d <= 0` the minimizer sits at an end of the box
# or at zero.

# %%
import numpy as np

from trdh import BoxedSeparableRegularizer, IproxQuery, iprox, prox_standard
from trdh.prox import iprox_l0_scalar, iprox_l1_scalar

# %% [markdown]
# Hard and soft thresholding are the `d = 1 / nu`, unbounded special cases.

# %%
q = np.linspace(-3, 3, 7)
for kind in ("l0", "l1"):
    reg = BoxedSeparableRegularizer.unbounded(kind, 1.0, q.size)
    print(kind, prox_standard(q, 1.0, reg))

# %% [markdown]
# Negative curvature: the objective is concave away from zero, so the answer
# is whichever end (or zero) is lowest.

# %%
for g in (-1.0, 0.0, 1.0):
    print(g, iprox_l0_scalar(g, -2.0, 0.5, -1.0, 2.0), iprox_l1_scalar(g, -2.0, 0.5, -1.0, 2.0))

# %% [markdown]
# The vector form intersects the query box with the regularizer's bounds.

# %%
reg = BoxedSeparableRegularizer("l1", 0.3, np.zeros(3), np.full(3, np.inf))
query = IproxQuery(g=[-1.0, 0.2, -0.1], d=[2.0, -1.0, 0.0], lower=[-1, -1, -1], upper=[1, 1, 1])
print(iprox(query, reg))
