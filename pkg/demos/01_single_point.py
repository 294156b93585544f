# %% [markdown]
# # One operating point, end to end
#
# Start from lab parameters, find the classical steady state, build the
# linearized drift/diffusion matrices, solve for the steady-state covariance
# and read off the optical entanglement.

# %%
import math

import numpy as np

from opaent import (
    build_linear_model,
    derive_constants,
    entanglement_report,
    is_stable,
    paper_params,
    solve_lyapunov,
    solve_steady_state,
)
from opaent.entanglement import symplectic_spectrum

np.set_printoptions(precision=4, linewidth=110)

# %%
# 5 ng mirror at 10 MHz, 5 mm cavity with finesse 1e5, red/blue sideband drives.
params = paper_params(temperature=10e-3).with_gain_in_kappa(5.6)
derived = derive_constants(params)
print(f"kappa       = {derived.kappa:.4e} s^-1")
print(f"g_1 = g_2   = {derived.g_1:.2f} s^-1")
print(f"eps_1       = {derived.eps_1:.4e} s^-1")
print(f"n_bar       = {derived.n_bar:.2f}")

# %%
steady = solve_steady_state(params, derived)
print(f"|alpha_1| = {abs(steady.alpha_1):.1f}, |alpha_2| = {abs(steady.alpha_2):.1f}")
print(f"G_1/kappa = {steady.Gcpl_1 / derived.kappa:.3f}, G_2/kappa = {steady.Gcpl_2 / derived.kappa:.3f}")

# %%
lin = build_linear_model(params, derived, steady)
print("drift matrix / omega_m:\n", lin.A / params.omega_m)
print("stable:", is_stable(lin.A, params.omega_m))

# %%
cov = solve_lyapunov(lin.A, lin.D, scale=params.omega_m)
print(f"relative Lyapunov residual: {cov.residual_norm:.1e}")
print("symplectic spectrum of the full state:", symplectic_spectrum(cov.V))

# %%
report = entanglement_report(cov.V)
print(f"E_N = {report.E_N:.4f}  (nu_minus of the partial transpose = {report.nu_minus_tilde:.4f})")
print(f"<dX1^2>/<dY1^2> = {report.ratio_mode1:.4f}, <dY2^2>/<dX2^2> = {report.ratio_mode2:.4f}")

# %%
# Same point with the OPA switched off, for comparison.
off = params.replace(opa_gain=0.0)
lin0 = build_linear_model(off, derived, solve_steady_state(off, derived))
rep0 = entanglement_report(solve_lyapunov(lin0.A, lin0.D, scale=off.omega_m).V)
print(f"E_N without OPA = {rep0.E_N:.4f}; gain {100 * (report.E_N / rep0.E_N - 1):.0f}%")
