# The four phase-tracking pilot layouts on a 180-PRB slot, drawn on a
# (resource x symbol) canvas: distributed and block pilots live on
# subcarriers, group pilots on pre-DFT samples.

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mmwphy.ptrs import DftsEnhanced, DftsGroups, OfdmBlock, OfdmDistributed, build_pattern

ALLOC = 2160
SYMBOLS = np.arange(2, 14)

configs = [
    ("OFDM distributed (1 SC / 2nd PRB)", OfdmDistributed(2, 1)),
    ("OFDM block (4 PRB, band center)", OfdmBlock(4)),
    ("DFT-s groups 8 x 4", DftsGroups(8, 4)),
    ("DFT-s groups 12 x 4", DftsEnhanced()),
]

fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True, sharey=True)
for ax, (title, cfg) in zip(axes.ravel(), configs):
    pat = build_pattern(cfg, ALLOC, SYMBOLS, seed=0)
    for s in pat.symbols:
        ax.scatter(np.full(pat.indices.size, s), pat.indices, s=1.5, c="tab:blue")
    ax.set_title(f"{title}\n{pat.n_per_symbol} pilots/symbol", fontsize=9)
    ax.set_xlim(-0.5, 14)
    ax.set_ylim(0, ALLOC)
for ax in axes[1]:
    ax.set_xlabel("slot symbol")
for ax in axes[:, 0]:
    ax.set_ylabel("subcarrier / pre-DFT sample")
fig.tight_layout()
fig.savefig("demo_ptrs_patterns.png", dpi=140)
print("wrote demo_ptrs_patterns.png")
