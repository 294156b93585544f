# %% [markdown]
# # Entanglement versus OPA pump phase
#
# Three (temperature, gain) pairs near their optimal gains. Points where the
# drift matrix has an eigenvalue with non-negative real part are dropped from
# the curves; over the upper half of the phase circle most of them are.

# %%
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from opaent import paper_params, sweep_theta

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

cases = [(10e-3, 5.6, "-"), (100e-3, 5.0, "--"), (1.0, 3.0, "-.")]
theta = np.linspace(0, 2 * math.pi, 401)

# %%
fig, ax = plt.subplots(figsize=(6, 4))
for T, gain, style in cases:
    recs = sweep_theta(paper_params(temperature=T).with_gain_in_kappa(gain), theta)
    en = np.array([r.E_N if r.stable else np.nan for r in recs])
    ax.plot(theta / math.pi, en, style, label=f"T = {T * 1e3:g} mK, G = {gain} kappa")
    upper = [r for r in recs if r.sweep_value > math.pi]
    best = theta[np.nanargmax(en)]
    print(f"T={T:g} K: best phase {best / math.pi:.3f} pi, "
          f"{sum(not r.stable for r in upper)}/{len(upper)} unstable points above pi")

ax.set_xlabel("theta / pi")
ax.set_ylabel("E_N")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "phase_sweep.png", dpi=120)
