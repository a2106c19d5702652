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
# # Benchmark problems
#
# Sparse NNMF, the nonlinear SVM (synthetic fallback when MNIST is absent)
# and FitzHugh-Nagumo parameter fitting.

# %%
import numpy as np

from trdh import SolverOptions, r2_solve, tr_solve, trdh_solve
from trdh.problems import fh_problem, gen_nnmf, synthetic_svm

# %% [markdown]
# NNMF: R2 started from a random point collapses `H` to zero and stops at a
# spurious stationary point; TRDH-Spec does not.

# %%
p = gen_nnmf(seed=0)
opts = SolverOptions(eps_abs=1e-5, eps_rel=1e-5)
for name, solve in [("R2", r2_solve), ("TRDH-Spec", trdh_solve)]:
    _, st = solve(p, opts)
    print(name, round(st.final_f, 1), st.final_h_over_lambda, st.n_f)

# %%
svm, evaluate = synthetic_svm(seed=0)
x, st = tr_solve(svm, SolverOptions(eps_abs=1e-4, eps_rel=1e-4), hessian="lbfgs", subsolver="r2")
print("SVM accuracy (train, test):", evaluate(x))

# %% [markdown]
# FitzHugh-Nagumo with the lower bound on `x2`.

# %%
fh = fh_problem(constrained=True)
opts = SolverOptions(eps_abs=1e-4, eps_rel=1e-4, eps_abs_inner=1e-3, max_inner_iter=200, diag_kind="psb")
x, st = tr_solve(fh, opts, hessian="lbfgs", subsolver="trdh")
print(np.round(x, 3), st.status.value, st.n_f)
