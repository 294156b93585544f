# %% [markdown]
# # Squeezing and entanglement versus OPA gain
#
# At theta = pi/2 the OPA squeezes the phase quadrature of mode 1 and the
# amplitude quadrature of mode 2 by the same amount. Entanglement first grows
# with the gain and then degrades.

# %%
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from opaent import paper_params, sweep_gain

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

base = paper_params()
kappa = base.kappa
gains = np.linspace(0, 7 * kappa, 141)

# %%
recs = sweep_gain(base, gains)
r1 = [r.ratio_mode1 for r in recs]
r2 = [r.ratio_mode2 for r in recs]
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(gains / kappa, r1, label="<dX1^2>/<dY1^2>")
ax.plot(gains / kappa, r2, "--", label="<dY2^2>/<dX2^2>")
ax.set_xlabel("G / kappa")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "squeezing_ratios.png", dpi=120)

# %%
fig, ax = plt.subplots(figsize=(6, 4))
for T in (10e-3, 100e-3, 1.0):
    recs = sweep_gain(base.replace(temperature=T), gains)
    en = np.array([r.E_N if r.stable else np.nan for r in recs])
    i = np.nanargmax(en)
    print(f"T={T:g} K: E_N(0)={en[0]:.4f}, max {en[i]:.4f} at G={gains[i] / kappa:.2f} kappa")
    ax.plot(gains / kappa, en, label=f"T = {T * 1e3:g} mK")
ax.set_xlabel("G / kappa")
ax.set_ylabel("E_N")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "gain_sweep.png", dpi=120)
