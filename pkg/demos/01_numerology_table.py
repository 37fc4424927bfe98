# Print the wideband numerology family: clocks, bandwidths and uncoded PHY
# rates for the SCS ladder 120 kHz .. 3840 kHz at the 264-PRB maximum
# allocation (FFT 4096, 12 data symbols, 1.5% pilot overhead).

from mmwphy.numerology import NumerologyConfig, derive, phy_bit_rate

header = (
    f"{'SCS kHz':>8} {'fs MHz':>10} {'slot us':>9} {'alloc MHz':>10} "
    f"{'chan MHz':>9} {'QPSK':>6} {'16QAM':>6} {'64QAM':>6} {'256QAM':>7}"
)
print(header)
print("-" * len(header))
for mu in range(3, 9):
    d = derive(NumerologyConfig(mu=mu, n_prb=264))
    rates = [
        phy_bit_rate(d, qm, data_symbols=12, ptrs_overhead=0.015) / 1e9
        for qm in (2, 4, 6, 8)
    ]
    print(
        f"{d.scs_hz / 1e3:8.0f} {d.sampling_rate_hz / 1e6:10.2f} "
        f"{d.slot_duration_s * 1e6:9.3f} {d.allocation_bw_hz / 1e6:10.2f} "
        f"{d.channel_bw_hz / 1e6:9.0f} "
        + " ".join(f"{r:6.1f}" for r in rates[:3])
        + f" {rates[3]:7.1f}"
    )
print("\nrates in Gb/s (uncoded air rates, rank-1)")
