# Oscillator phase-noise masks of the bundled terminal (CMOS, 50 mW) and
# base-station (GaAs, 80 mW) PLL models, scaled to 60 GHz, with a Welch
# estimate of one synthesized trajectory overlaid on the terminal mask.

import importlib.resources

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from scipy.signal import welch

from mmwphy import phase_noise as pn

models = {}
for name in ("ue_cmos_50mw", "bs_gaas_80mw"):
    path = importlib.resources.files("mmwphy.data") / f"pn_models/{name}.yaml"
    models[name] = pn.scale_to_carrier(pn.load_model(path), 60e9)

f = np.logspace(3, 8.3, 400)
plt.figure(figsize=(6.4, 4.4))
for name, model in models.items():
    plt.semilogx(f, pn.psd_dbc_hz(model, f), label=f"{name} @60 GHz")

fs = 7.68e6
traj = pn.generate(models["ue_cmos_50mw"], 2**20, fs, seed=7)
f_w, s_w = welch(traj.phase_rad, fs=fs, nperseg=2**12)
keep = f_w > 2e3
plt.semilogx(f_w[keep], 10 * np.log10(s_w[keep] / 2), ".", ms=2, alpha=0.4,
             label="synthesized (Welch)")
print(f"integrated phase (terminal model): {np.degrees(traj.phase_rad.std()):.2f} deg rms")

plt.xlabel("frequency offset [Hz]")
plt.ylabel("PSD [dBc/Hz]")
plt.grid(True, which="both", alpha=0.4)
plt.legend()
plt.tight_layout()
plt.savefig("demo_pn_psd.png", dpi=140)
print("wrote demo_pn_psd.png")
