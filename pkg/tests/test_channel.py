import numpy as np
import pytest
from scipy.special import j0

from mmwphy.channel import (
    ChannelConfig,
    ChannelRealization,
    awgn,
    build_tdl,
    freq_response,
    max_doppler,
    propagate,
    rms_delay_spread,
)

FS = 3932.16e6


# ---------------------------------------------------------------------------
# Doppler
# ---------------------------------------------------------------------------

def test_max_doppler_value():
    assert max_doppler(0.8333, 60e9) == pytest.approx(166.8, abs=0.5)


def test_max_doppler_zero_and_linearity():
    assert max_doppler(0.0, 60e9) == 0.0
    assert max_doppler(2.0, 60e9) == pytest.approx(2 * max_doppler(1.0, 60e9))


# ---------------------------------------------------------------------------
# TDL construction
# ---------------------------------------------------------------------------

def test_rms_delay_spread_matches_target():
    real = build_tdl(ChannelConfig(), FS, seed=0)
    assert rms_delay_spread(real) == pytest.approx(10e-9, rel=0.05)


def test_rms_delay_spread_at_lower_rate():
    real = build_tdl(ChannelConfig(), 491.52e6, seed=0)
    assert rms_delay_spread(real) == pytest.approx(10e-9, rel=0.05)


def test_pure_los_limit_flat_channel():
    real = build_tdl(ChannelConfig(rician_k_db=200.0), FS, seed=1)
    assert real.delays_samples.size == 1
    h = freq_response(real, np.arange(-512, 512), 4096, [0.0])
    assert np.max(np.abs(np.abs(h) - np.abs(h[0]))) < 1e-9


def test_ensemble_unit_power():
    cfg = ChannelConfig()
    total = 0.0
    n = 10_000
    for seed in range(n):
        real = build_tdl(cfg, FS, seed=seed)
        total += np.sum(np.abs(real.tap_gains([0.0])) ** 2)
    assert total / n == pytest.approx(1.0, rel=0.02)


def test_first_tap_carries_los_power():
    k_lin = 10 ** 1.5
    real = build_tdl(ChannelConfig(), FS, seed=2)
    assert real.los_power == pytest.approx(k_lin / (k_lin + 1))
    assert np.sum(real.nlos_powers) == pytest.approx(1 / (k_lin + 1), rel=1e-9)


def test_unresolvable_delay_spread_warns_and_flattens():
    with pytest.warns(RuntimeWarning):
        real = build_tdl(ChannelConfig(rms_delay_spread_s=1e-9), 20e6, seed=3)
    assert real.delays_samples.size == 1


# ---------------------------------------------------------------------------
# Propagation
# ---------------------------------------------------------------------------

def _static_two_tap(fs, d, g0, g1):
    """Hand-built frozen realization (no Doppler) for convolution oracles.

    One zero-Doppler sinusoid per tap: gain = sqrt(p) * exp(j*phase).
    """
    return ChannelRealization(
        fs_hz=fs,
        delays_samples=np.array([0, d]),
        nlos_powers=np.array([np.abs(g0) ** 2, np.abs(g1) ** 2]),
        los_power=0.0,
        los_doppler_hz=0.0,
        los_phase0=0.0,
        max_doppler_hz=0.0,
        sos_doppler_hz=np.zeros((2, 1)),
        sos_phase=np.array([[np.angle(g0)], [np.angle(g1)]]),
    )


def test_identity_channel():
    real = build_tdl(ChannelConfig(rician_k_db=200.0, ue_speed_mps=0.0), FS, seed=4)
    x = np.exp(2j * np.pi * np.random.default_rng(0).random(1000))
    y = propagate(x, real)
    # Single unit LOS tap with a random fixed phase.
    assert np.allclose(np.abs(y), np.abs(x), atol=1e-12)
    assert np.allclose(y / x, y[0] / x[0], atol=1e-12)


def test_static_two_tap_matches_direct_convolution():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(500) + 1j * rng.standard_normal(500)
    g0, g1 = 0.8 * np.exp(0.3j), 0.5 * np.exp(-1.1j)
    real = _static_two_tap(FS, 7, g0, g1)
    y = propagate(x, real)
    h = np.zeros(8, dtype=complex)
    h[0], h[7] = g0, g1
    oracle = np.convolve(x, h)[:500]
    assert np.max(np.abs(y - oracle)) < 1e-9


def test_propagate_energy_pure_los():
    real = build_tdl(ChannelConfig(rician_k_db=200.0), FS, seed=6)
    x = np.ones(4096, dtype=complex)
    y = propagate(x, real)
    assert np.sum(np.abs(y) ** 2) == pytest.approx(np.sum(np.abs(x) ** 2), rel=1e-6)


def test_jakes_autocorrelation_at_one_slot():
    # 30 m/s at 60 GHz -> fd ~ 6 kHz so J0(2 pi fd tau) is far from 1 at one
    # slot (125 us) and the estimate is informative.
    cfg = ChannelConfig(ue_speed_mps=30.0, rician_k_db=-300.0, n_taps=1,
                        rms_delay_spread_s=0.0)
    fd = max_doppler(30.0, 60e9)
    tau = 125e-6
    fs = 491.52e6
    acc = 0.0
    pwr = 0.0
    n = 2000
    for seed in range(n):
        real = build_tdl(cfg, fs, seed=seed)
        g = real.tap_gains(np.array([0.0, tau * fs]))[0]
        acc += (g[0] * np.conj(g[1])).real
        pwr += np.abs(g[0]) ** 2
    rho = acc / pwr
    expected = j0(2 * np.pi * fd * tau)
    assert rho == pytest.approx(expected, abs=0.1)


# ---------------------------------------------------------------------------
# AWGN
# ---------------------------------------------------------------------------

def test_awgn_infinite_snr_identity():
    x = np.ones(100, dtype=complex)
    assert np.array_equal(awgn(x, np.inf, seed=0), x)


def test_awgn_measured_snr():
    rng = np.random.default_rng(8)
    x = np.exp(2j * np.pi * rng.random(10**6))
    y = awgn(x, 10.0, signal_power_ref=1.0, seed=1)
    noise = y - x
    measured = 10 * np.log10(1.0 / np.mean(np.abs(noise) ** 2))
    assert measured == pytest.approx(10.0, abs=0.05)


def test_awgn_seeds_independent():
    x = np.zeros(10**5, dtype=complex)
    a = awgn(x, 0.0, signal_power_ref=1.0, seed=1)
    b = awgn(x, 0.0, signal_power_ref=1.0, seed=2)
    rho = np.abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))
    assert rho < 0.01
