import numpy as np
import pytest

from mmwphy.errors import ConfigError
from mmwphy.numerology import NumerologyConfig, derive, phy_bit_rate

# Wideband numerology reference values: sampling rate (MHz), max allocation
# bandwidth (MHz) at 264 PRBs, max channel bandwidth (MHz), and uncoded slot
# rates (Gb/s) for QPSK/16/64/256-QAM with 12 data symbols and 1.5% pilot
# overhead. The 960 kHz nominal slot-duration entry does not follow the
# power-of-two scaling and is checked against the scaling law instead.
TABLE = {
    3: dict(fs=491.52, alloc=380.16, chan=400, rates=(0.6, 1.2, 1.8, 2.4)),
    4: dict(fs=983.04, alloc=760.32, chan=800, rates=(1.2, 2.4, 3.6, 4.8)),
    5: dict(fs=1966.08, alloc=1520.64, chan=1600, rates=(2.4, 4.8, 7.2, 9.6)),
    6: dict(fs=3932.16, alloc=3041.28, chan=3200, rates=(4.8, 9.6, 14.4, 19.2)),
    7: dict(fs=7864.32, alloc=6082.56, chan=6400, rates=(9.6, 19.2, 28.8, 38.3)),
    8: dict(fs=15728.64, alloc=12165.12, chan=12800, rates=(19.2, 38.3, 57.5, 76.7)),
}


@pytest.mark.parametrize("mu", sorted(TABLE))
def test_reference_grid_constants(mu):
    d = derive(NumerologyConfig(mu=mu, n_prb=264))
    ref = TABLE[mu]
    assert d.sampling_rate_hz == pytest.approx(ref["fs"] * 1e6, rel=1e-9)
    assert d.allocation_bw_hz == pytest.approx(ref["alloc"] * 1e6, rel=1e-9)
    assert d.channel_bw_hz == pytest.approx(ref["chan"] * 1e6, rel=1e-9)
    assert d.allocation_bw_hz <= d.channel_bw_hz


@pytest.mark.parametrize("mu", sorted(TABLE))
@pytest.mark.parametrize("qm_idx,qm", [(0, 2), (1, 4), (2, 6), (3, 8)])
def test_reference_bit_rates(mu, qm_idx, qm):
    d = derive(NumerologyConfig(mu=mu, n_prb=264))
    rate = phy_bit_rate(d, qm, data_symbols=12, ptrs_overhead=0.015)
    assert rate == pytest.approx(TABLE[mu]["rates"][qm_idx] * 1e9, rel=0.01)


@pytest.mark.parametrize("mu", sorted(TABLE))
def test_slot_duration_scaling_law(mu):
    d = derive(NumerologyConfig(mu=mu, n_prb=264))
    # 125 us at 120 kHz, halving per SCS doubling.
    assert d.slot_duration_s == pytest.approx(125e-6 * 2.0 ** -(mu - 3), rel=0.01)


def test_doubling_mu_doubles_clock_and_halves_slot():
    for mu in range(3, 8):
        a = derive(NumerologyConfig(mu=mu, n_prb=64))
        b = derive(NumerologyConfig(mu=mu + 1, n_prb=64))
        assert b.sampling_rate_hz == pytest.approx(2 * a.sampling_rate_hz, rel=1e-12)
        assert b.slot_duration_s == pytest.approx(a.slot_duration_s / 2, rel=1e-12)


def test_derived_consistency():
    d = derive(NumerologyConfig(mu=6, n_prb=180))
    assert d.sampling_rate_hz == d.scs_hz * d.fft_size
    assert d.allocation_bw_hz == 12 * 180 * d.scs_hz
    assert d.slot_duration_s == pytest.approx(
        d.symbols_per_slot * (d.fft_size + d.cp_samples) / d.sampling_rate_hz
    )
    assert d.n_subcarriers == 2160
    assert d.samples_per_slot == 14 * (4096 + 288)


def test_zero_modulation_rate():
    d = derive(NumerologyConfig(mu=3, n_prb=264))
    assert phy_bit_rate(d, 0, 12, 0.015) == 0.0


@pytest.mark.parametrize(
    "cfg",
    [
        NumerologyConfig(mu=2, n_prb=100),
        NumerologyConfig(mu=9, n_prb=100),
        NumerologyConfig(mu=3, n_prb=0),
        NumerologyConfig(mu=3, n_prb=265),
        NumerologyConfig(mu=3, n_prb=264, fft_size=2048),  # 3168 > 2048
    ],
)
def test_config_bounds_rejected(cfg):
    with pytest.raises(ConfigError):
        derive(cfg)


def test_bit_rate_precondition_errors():
    d = derive(NumerologyConfig(mu=3, n_prb=264))
    with pytest.raises(ConfigError):
        phy_bit_rate(d, 2, 12, 1.0)
    with pytest.raises(ConfigError):
        phy_bit_rate(d, 2, 0, 0.0)
    with pytest.raises(ConfigError):
        phy_bit_rate(d, 2, 15, 0.0)
