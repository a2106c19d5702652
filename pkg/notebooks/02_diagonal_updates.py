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
# # Diagonal quasi-Newton updates
#
# Three diagonal approximations satisfy the weak secant condition
# `s' D s = s' y` on the normalized pair.

# %%
import numpy as np

from trdh import DiagonalModel, andrei_diag_update, psb_diag_update, spectral_sigma
from trdh.diag_qn import scaled_pair

rng = np.random.default_rng(0)
H = np.diag(np.linspace(1, 10, 6))
s = rng.standard_normal(6)
y = H @ s
d0 = np.ones(6)

# %%
st, yt = scaled_pair(s, y)
for name, d in [("spectral", np.full(6, spectral_sigma(s, y))),
                ("psb", psb_diag_update(d0, s, y)),
                ("andrei", andrei_diag_update(d0, s, y))]:
    print(f"{name:8s} gap {st @ (d * st) - st @ yt:+.1e}  d = {np.round(d, 2)}")

# %% [markdown]
# Repeated PSB updates on random directions drift toward the true diagonal.

# %%
model = DiagonalModel(d0, "psb")
for _ in range(200):
    s = rng.standard_normal(6)
    model.update(s, H @ s)
print(np.round(model.d, 2))
