"""One end-to-end slot trial: bits through waveform, impairments, receiver.

Slot layout (14 symbols by default): symbol 0 is a control-channel stand-in
(known filler, ignored at the receiver), symbol 1 a full-band reference
symbol for channel estimation, symbols 2..13 carry data and phase-tracking
pilots. SNR is defined per allocated resource element, so the time-domain
noise variance is scaled by fft_size/allocation_width.

Every trial derives its randomness from (base_seed, trial_index), making
trials independent, order-insensitive, and exactly reproducible.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import channel as ch
from .. import phase_noise as pn
from .. import ptrs as ptrs_mod
from .. import receiver as rx
from .. import waveform as wf
from ..numerology import derive
from .config import SimConfig, pn_model_path

_N_SEED_STREAMS = 8  # bits, filler, dmrs, pilots, pn_tx, pn_rx, channel, noise


@dataclass
class TrialRecord:
    n_bits: int
    bit_errors: int
    n_symbols: int
    symbol_errors: int
    block_error: bool
    evm_num: float
    evm_den: float

    @property
    def evm_rms(self) -> float:
        return float(np.sqrt(self.evm_num / self.evm_den)) if self.evm_den else 0.0


@lru_cache(maxsize=8)
def _cached_pn_model(path: str, carrier_hz: float):
    return pn.scale_to_carrier(pn.load_model(path), carrier_hz)


def _unit_qpsk(rng, shape):
    b = 1.0 - 2.0 * rng.integers(0, 2, shape + (2,))
    return (b[..., 0] + 1j * b[..., 1]) / np.sqrt(2.0)


def _next_pow2(n: int) -> int:
    p = 1 << (n - 1).bit_length()
    return max(p, 2**14)


def _pn_phase(model_name: str, carrier_hz: float, n: int, fs: float, seed):
    model = _cached_pn_model(pn_model_path(model_name), carrier_hz)
    traj = pn.generate(model, _next_pow2(n), fs, seed)
    return traj.phase_rad[:n]


def run_slot_trial(cfg: SimConfig, snr_db: float, trial_index: int) -> TrialRecord:
    """Simulate one slot and count errors; deterministic in (cfg, trial_index)."""
    num = derive(cfg.numerology())
    width = num.n_subcarriers
    qm = cfg.modulation
    n_sym = num.symbols_per_slot
    data_syms = np.arange(2, n_sym)

    ss = np.random.SeedSequence(entropy=abs(int(cfg.base_seed)),
                                spawn_key=(int(trial_index),))
    seeds = ss.spawn(_N_SEED_STREAMS)
    rng_bits = np.random.default_rng(seeds[0])
    rng_fill = np.random.default_rng(seeds[1])
    rng_dmrs = np.random.default_rng(seeds[2])

    ptrs_cfg = cfg.ptrs_config()
    pattern = None
    if ptrs_cfg is not None:
        pattern = ptrs_mod.build_pattern(ptrs_cfg, width, data_syms, seeds[3])

    # Data cell positions per data symbol (allocation- or pre-DFT-relative).
    covered = set(pattern.symbols.tolist()) if pattern is not None else set()
    data_idx = {}
    for s in data_syms:
        if pattern is not None and s in covered:
            data_idx[s] = np.setdiff1d(np.arange(width), pattern.indices)
        else:
            data_idx[s] = np.arange(width)
    n_data_cells = {s: idx.size for s, idx in data_idx.items()}
    total_syms = sum(n_data_cells.values())
    bits = rng_bits.integers(0, 2, total_syms * qm, dtype=np.int8)
    data_symbols_tx = wf.qam_map(bits, qm)

    # Assemble the slot grid.
    grid = np.zeros((width, n_sym), dtype=complex)
    grid[:, 0] = _unit_qpsk(rng_fill, (width,))
    dmrs = _unit_qpsk(rng_dmrs, (width,))
    grid[:, 1] = dmrs
    tx_blocks = {}  # pre-DFT blocks (dfts) or allocation columns (ofdm)
    pos = 0
    for s in data_syms:
        col = np.zeros(width, dtype=complex)
        if pattern is not None and s in covered:
            col[pattern.indices] = pattern.pilot_column(s)
        nd = n_data_cells[s]
        col[data_idx[s]] = data_symbols_tx[pos : pos + nd]
        pos += nd
        tx_blocks[s] = col
        grid[:, s] = wf.transform_precode(col, width) if cfg.waveform == "dfts" else col

    sig = wf.ofdm_modulate(wf.ResourceGrid(grid), num)
    n_samp = sig.size
    fs = num.sampling_rate_hz

    if cfg.pn.enabled:
        phase_tx = _pn_phase(cfg.pn.tx_model, cfg.pn.carrier_hz, n_samp, fs, seeds[4])
        sig = sig * np.exp(1j * phase_tx)

    realization = None
    if cfg.channel == "tdl":
        realization = ch.build_tdl(cfg.channel_config(), fs, seeds[6])
        sig = ch.propagate(sig, realization)

    if cfg.pn.enabled:
        phase_rx = _pn_phase(cfg.pn.rx_model, cfg.pn.carrier_hz, n_samp, fs, seeds[5])
        sig = sig * np.exp(1j * phase_rx)

    # Per-resource-element SNR: spread over the FFT band in the time domain.
    noise_var_cell = 10.0 ** (-snr_db / 10.0)
    if np.isfinite(snr_db):
        rng_noise = np.random.default_rng(seeds[7])
        var_time = noise_var_cell * num.fft_size / width
        sig = sig + np.sqrt(var_time / 2.0) * (
            rng_noise.standard_normal(n_samp) + 1j * rng_noise.standard_normal(n_samp)
        )

    rx_grid = wf.ofdm_demodulate(sig, num, width)

    if cfg.rx.channel_est == "genie":
        if realization is None:
            h = np.ones((width, data_syms.size), dtype=complex)
        else:
            sps = num.samples_per_symbol
            t_mid = data_syms * sps + num.cp_samples + num.fft_size / 2.0
            h = ch.freq_response(
                realization, wf.subcarrier_offsets(width), num.fft_size, t_mid
            )
    else:
        h = rx.estimate_channel_ls(
            rx_grid.cells, 1, dmrs, smooth_window=cfg.rx.smooth_window
        )

    eq = rx.equalize_mmse(
        rx_grid.cells[:, data_syms],
        h,
        noise_var_cell if np.isfinite(snr_db) else 0.0,
        symbol_indices=data_syms,
    )

    if cfg.waveform == "ofdm":
        est_cells = _ofdm_receive(cfg, num, eq, pattern)
        rx_data = np.concatenate([est_cells[:, i][data_idx[s]]
                                  for i, s in enumerate(data_syms)])
    else:
        rx_data = _dfts_receive(cfg, eq, pattern, data_syms, data_idx,
                                tx_blocks, qm)

    counts = rx.detect_and_count(rx_data, bits, qm)
    err = rx_data - data_symbols_tx
    return TrialRecord(
        n_bits=counts.n_bits,
        bit_errors=counts.bit_errors,
        n_symbols=counts.n_symbols,
        symbol_errors=counts.symbol_errors,
        block_error=counts.block_error,
        evm_num=float(np.sum(np.abs(err) ** 2)),
        evm_den=float(np.sum(np.abs(data_symbols_tx) ** 2)),
    )


def _ofdm_receive(cfg, num, eq, pattern):
    """Apply the configured phase compensation to an equalized OFDM slot."""
    mode = cfg.rx.pn_comp
    if mode == "none" or pattern is None:
        return eq.cells
    if mode == "cpe":
        c = rx.estimate_cpe(eq, pattern)
        return eq.cells * np.conj(c)[None, :]
    if mode == "ici":
        out = eq.cells.copy()
        ests = rx.estimate_ici_ls(eq, pattern, k=cfg.rx.ici_k)
        for est, sym in zip(ests, pattern.symbols):
            col = eq.column_of(sym)
            est = rx.gate_ici(est, eq.noise_var[col])
            out[:, col] = rx.compensate_ici(eq.cells[:, col], est, num.fft_size)
        return out
    raise ValueError(f"pn_comp mode {mode!r} not available for ofdm")


def _dfts_receive(cfg, eq, pattern, data_syms, data_idx, tx_blocks, qm):
    """Return detected-data samples for a DFT-s-OFDM slot."""
    mode = cfg.rx.pn_comp
    width = eq.cells.shape[0]
    out = []
    for i, s in enumerate(data_syms):
        y = wf.transform_deprecode(eq.cells[:, i], width)
        if pattern is not None and mode != "none":
            phase_est, cpe = rx.dfts_pn_track(y, pattern, s)
            if mode == "cpe":
                y_hat = y * np.conj(cpe)
            elif mode == "interp":
                y_hat = y * np.exp(-1j * phase_est)
            elif mode == "genie-best":
                y_cpe = (y * np.conj(cpe))[data_idx[s]]
                y_int = (y * np.exp(-1j * phase_est))[data_idx[s]]
                tx_d = tx_blocks[s][data_idx[s]]
                e_cpe = _hard_symbol_errors(y_cpe, tx_d, qm)
                e_int = _hard_symbol_errors(y_int, tx_d, qm)
                out.append(y_int if e_int <= e_cpe else y_cpe)
                continue
            else:
                raise ValueError(f"pn_comp mode {mode!r} not available for dfts")
            out.append(y_hat[data_idx[s]])
        else:
            out.append(y[data_idx[s]])
    return np.concatenate(out)


def _hard_symbol_errors(y, x_ref, qm) -> int:
    b_hat = wf.qam_demap_hard(y, qm)
    b_ref = wf.qam_demap_hard(x_ref, qm)
    return int((b_hat.reshape(-1, qm) != b_ref.reshape(-1, qm)).any(axis=1).sum())
