# UL/DL link distances for the bundled 16-QAM scenarios: PA-technology
# limited vs 40 dBm EIRP-limited. In the capped scenario both waveforms
# collapse to the same DL distance and the uplink (helped by the large
# base-station receive array) reaches further than the downlink.

from mmwphy.harness.config import preset_path
from mmwphy.linkbudget import evaluate_scenarios, load_scenarios

rows = evaluate_scenarios(load_scenarios(preset_path("fig4")))

current = None
for r in rows:
    if r["scenario"] != current:
        current = r["scenario"]
        print(f"\n{current}")
        print(f"  {'dir':>4} {'waveform':>8} {'distance m':>11} {'limited by':>11}")
    print(
        f"  {r['direction']:>4} {r['waveform']:>8} {r['distance_m']:11.1f} "
        f"{r['limiting_factor']:>11}"
    )

pa = {(r["direction"], r["waveform"]): r["distance_m"]
      for r in rows if r["scenario"] == "pa-limited-16qam"}
print(
    f"\nPA-limited DFT-s advantage: DL {pa[('dl','dfts')]/pa[('dl','ofdm')]-1:+.1%}, "
    f"UL {pa[('ul','dfts')]/pa[('ul','ofdm')]-1:+.1%}"
)
