import itertools

import numpy as np
import pytest

from mmwphy.numerology import NumerologyConfig, derive
from mmwphy.waveform import (
    ResourceGrid,
    allocation_bins,
    ofdm_demodulate,
    ofdm_modulate,
    papr_at_ccdf,
    papr_ccdf,
    papr_db,
    qam_demap_hard,
    qam_map,
    subcarrier_offsets,
    transform_deprecode,
    transform_precode,
)

NUM = derive(NumerologyConfig(mu=6, n_prb=180))


# ---------------------------------------------------------------------------
# QAM
# ---------------------------------------------------------------------------

def test_qpsk_gray_corner():
    assert qam_map([0, 0], 2)[0] == pytest.approx((1 + 1j) / np.sqrt(2))
    assert qam_map([1, 1], 2)[0] == pytest.approx((-1 - 1j) / np.sqrt(2))


@pytest.mark.parametrize("qm", [2, 4, 6, 8])
def test_constellation_unit_energy_and_distinct(qm):
    bits = np.array(list(itertools.product([0, 1], repeat=qm))).ravel()
    pts = qam_map(bits, qm)
    assert np.mean(np.abs(pts) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert len(set(np.round(pts, 9))) == 2**qm


@pytest.mark.parametrize("qm", [2, 4, 6, 8])
def test_map_demap_round_trip(qm):
    rng = np.random.default_rng(100 + qm)
    bits = rng.integers(0, 2, qm * 100_000, dtype=np.int8)
    back = qam_demap_hard(qam_map(bits, qm), qm)
    assert np.array_equal(back, bits)


def test_demap_nearest_point():
    assert np.array_equal(qam_demap_hard(np.array([0.9 + 0.9j]), 2), [0, 0])


def test_llr_sign_matches_hard_decision():
    rng = np.random.default_rng(7)
    bits = rng.integers(0, 2, 6 * 100_000, dtype=np.int8)
    noisy = qam_map(bits, 6) + 0.1 * (
        rng.standard_normal(100_000) + 1j * rng.standard_normal(100_000)
    )
    hard, llrs = qam_demap_hard(noisy, 6, noise_var=0.02)
    assert np.all((llrs > 0) == (hard == 0))


def test_qam_length_and_order_errors():
    with pytest.raises(ValueError):
        qam_map([0, 1, 0], 2)
    with pytest.raises(ValueError):
        qam_map([0, 1], 3)
    with pytest.raises(ValueError):
        qam_demap_hard(np.array([1.0 + 0j]), 4, noise_var=0.0)


# ---------------------------------------------------------------------------
# OFDM
# ---------------------------------------------------------------------------

def test_single_subcarrier_is_complex_exponential():
    grid = np.zeros((2160, 1), dtype=complex)
    grid[17, 0] = 1.0
    s = ofdm_modulate(ResourceGrid(grid), NUM, normalize=False)
    useful = s[NUM.cp_samples :]
    # IDFT of a delta: constant modulus 1/sqrt(N) (orthonormal scaling).
    assert np.allclose(np.abs(useful), 1 / np.sqrt(NUM.fft_size), atol=1e-12)


def test_round_trip_identity():
    rng = np.random.default_rng(3)
    cells = rng.standard_normal((2160, 14)) + 1j * rng.standard_normal((2160, 14))
    s = ofdm_modulate(ResourceGrid(cells), NUM)
    back = ofdm_demodulate(s, NUM, 2160)
    assert np.max(np.abs(back.cells - cells)) < 1e-10


def test_parseval_orthonormal_path():
    rng = np.random.default_rng(4)
    cells = rng.standard_normal((2160, 14)) + 1j * rng.standard_normal((2160, 14))
    s = ofdm_modulate(ResourceGrid(cells), NUM, normalize=False)
    useful = s.reshape(NUM.samples_per_symbol, 14, order="F")[NUM.cp_samples :, :]
    e_time = np.sum(np.abs(useful) ** 2)
    e_grid = np.sum(np.abs(cells) ** 2)
    assert abs(e_time - e_grid) < 1e-9 * e_grid


def test_unit_power_normalization():
    rng = np.random.default_rng(5)
    # Mean power fluctuates with the random CP content; average 24 slots.
    acc = 0.0
    for _ in range(24):
        bits = rng.integers(0, 2, 2 * 2160 * 14, dtype=np.int8)
        cells = qam_map(bits, 2).reshape(2160, 14)
        s = ofdm_modulate(ResourceGrid(cells), NUM)
        acc += np.mean(np.abs(s) ** 2)
    assert acc / 24 == pytest.approx(1.0, abs=1e-3)
    # The useful part alone is exactly unit power for a fully loaded grid.
    useful = s.reshape(NUM.samples_per_symbol, 14, order="F")[NUM.cp_samples :, :]
    assert np.mean(np.abs(useful) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_cyclic_delay_gives_phase_ramp_no_isi():
    rng = np.random.default_rng(6)
    cells = np.exp(2j * np.pi * rng.random((2160, 14)))
    s = ofdm_modulate(ResourceGrid(cells), NUM)
    delay = 100  # < 288 CP samples
    delayed = np.concatenate([np.zeros(delay, dtype=complex), s[:-delay]])
    back = ofdm_demodulate(delayed, NUM, 2160)
    # Analytic oracle: per-subcarrier rotation exp(-j 2 pi k d / N).
    k = subcarrier_offsets(2160)
    ramp = np.exp(-2j * np.pi * k * delay / NUM.fft_size)
    # First symbol's CP absorbs the shift only partially; check symbols 1..13.
    err = back.cells[:, 1:] - cells[:, 1:] * ramp[:, None]
    assert np.max(np.abs(err)) < 1e-9


def test_zero_grid_round_trip():
    s = ofdm_modulate(ResourceGrid(np.zeros((2160, 14), dtype=complex)), NUM)
    assert np.all(s == 0)
    assert np.all(ofdm_demodulate(s, NUM, 2160).cells == 0)


def test_demodulate_length_mismatch():
    with pytest.raises(ValueError):
        ofdm_demodulate(np.zeros(1000, dtype=complex), NUM, 2160)


def test_allocation_exceeds_fft():
    with pytest.raises(ValueError):
        allocation_bins(4096, 4096)


def test_dc_bin_unused_and_centered():
    bins = allocation_bins(24, 64)
    assert 0 not in bins
    k = subcarrier_offsets(24)
    assert k.min() == -12 and k.max() == 12
    assert np.sum(k < 0) == np.sum(k > 0)


# ---------------------------------------------------------------------------
# Transform precoding
# ---------------------------------------------------------------------------

def test_precode_round_trip():
    rng = np.random.default_rng(8)
    x = rng.standard_normal(2160 * 3) + 1j * rng.standard_normal(2160 * 3)
    back = transform_deprecode(transform_precode(x, 2160), 2160)
    assert np.max(np.abs(back - x)) < 1e-10


def test_precode_constant_block_single_bin():
    out = transform_precode(np.ones(480, dtype=complex), 480)
    assert abs(out[0]) == pytest.approx(np.sqrt(480))
    assert np.max(np.abs(out[1:])) < 1e-10


def test_precode_energy_preserved():
    rng = np.random.default_rng(9)
    x = rng.standard_normal(2160) + 1j * rng.standard_normal(2160)
    y = transform_precode(x, 2160)
    assert np.sum(np.abs(y) ** 2) == pytest.approx(np.sum(np.abs(x) ** 2), rel=1e-9)


def test_precode_length_mismatch():
    with pytest.raises(ValueError):
        transform_precode(np.ones(100, dtype=complex), 64)


# ---------------------------------------------------------------------------
# PAPR
# ---------------------------------------------------------------------------

def test_constant_modulus_zero_papr():
    s = np.exp(2j * np.pi * np.linspace(0, 5, 4096))
    assert papr_db(s[None, :])[0] == pytest.approx(0.0, abs=1e-9)
    assert papr_ccdf(s[None, :], [0.1])[0] == 0.0


def test_ccdf_monotone_non_increasing():
    rng = np.random.default_rng(10)
    s = rng.standard_normal((2000, 256)) + 1j * rng.standard_normal((2000, 256))
    ccdf = papr_ccdf(s, np.arange(0.0, 12.0, 0.5))
    assert np.all(np.diff(ccdf) <= 0)


def test_papr_empty_input():
    with pytest.raises(ValueError):
        papr_db(np.array([]))
    with pytest.raises(ValueError):
        papr_at_ccdf(np.ones((4, 4)), 0.0)
