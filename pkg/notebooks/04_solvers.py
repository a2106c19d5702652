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
# # Solvers on sparse recovery
#
# R2, TRDH, iTRDH and TR on one basis pursuit denoising instance with an l0
# penalty.

# %%
import dataclasses

from trdh import SolverOptions, itrdh_solve, r2_solve, tr_solve, trdh_solve
from trdh.problems import gen_bpdn

problem = gen_bpdn(seed=0)
opts = SolverOptions(eps_abs=1e-5, eps_rel=1e-5, eps_abs_inner=1e-5)

# %%
runs = [("R2", lambda: r2_solve(problem, opts))]
for kind in ("spec", "psb", "andrei"):
    o = dataclasses.replace(opts, diag_kind=kind)
    runs.append((f"TRDH-{kind}", lambda o=o: trdh_solve(problem, o)))
    runs.append((f"iTRDH-{kind}", lambda o=o: itrdh_solve(problem, o)))
runs.append(("TR-R2", lambda: tr_solve(problem, opts, subsolver="r2")))
for name, solve in runs:
    x, st = solve()
    print(f"{name:14s} {st.status.value:12s} f={st.final_f:.3e} nnz={st.final_h_over_lambda:.0f} "
          f"err={st.x_error:.2e} #f={st.n_f} #prox={st.n_prox}")

# %% [markdown]
# A callback sees every iteration; here it records the criticality measure.

# %%
trace = []
trdh_solve(problem, opts, callback=lambda info: trace.append(info.crit))
print([f"{c:.1e}" for c in trace])
