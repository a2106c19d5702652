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
# # Limited-memory SR1 and BFGS
#
# The operator keeps the last few secant pairs and exposes products, the
# exact diagonal and the operator norm used by the trust-region method.

# %%
import numpy as np

from trdh import LimitedMemoryOp

rng = np.random.default_rng(1)
n = 20
M = rng.standard_normal((n, n))
H = M @ M.T / n + np.eye(n)

# %%
for kind in ("lsr1", "lbfgs"):
    op = LimitedMemoryOp(n, kind, memory=5)
    for _ in range(8):
        s = rng.standard_normal(n)
        op.update(s, H @ s)
    B = op.to_dense()
    print(kind, "pairs", len(op), "||B|| exact", round(op.opnorm(), 3),
          "bound", round(op.opnorm_bound(), 3), "diag error", np.abs(op.diagonal() - np.diag(B)).max())
