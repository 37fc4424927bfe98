"""Channel estimation, equalization, phase-noise compensation, detection.

Phase-noise handling comes in three flavors matched to the pilot designs:

- ``estimate_cpe``: per-symbol common-phase-error from the rotation of the
  frequency-domain pilots (distributed or block), averaged and normalized.
- ``estimate_ici_ls`` / ``compensate_ici``: least-squares estimate of the
  2K+1 dominant spectral taps of the multiplicative phase process from a
  contiguous pilot block, followed by a unit-modulus time-domain correction.
- ``dfts_pn_track``: within-symbol phase trajectory from the pre-DFT pilot
  groups of a DFT-s-OFDM symbol, linearly interpolated between group centers.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EstimationError
from .ptrs import PtrsPattern
from .waveform import allocation_bins, qam_demap_hard, subcarrier_offsets

_MAX_CONDITION = 1e12


@dataclass
class EqualizedSlot:
    """Equalized data-region grid plus per-symbol noise-variance estimates."""

    cells: np.ndarray  # (width, n_data_symbols)
    noise_var: np.ndarray  # (n_data_symbols,)
    symbol_indices: np.ndarray  # slot symbol index of each column

    def column_of(self, symbol_index: int) -> int:
        j = np.flatnonzero(self.symbol_indices == symbol_index)
        if j.size == 0:
            raise ValueError(f"symbol {symbol_index} not in equalized region")
        return int(j[0])


@dataclass
class IciEstimate:
    """2K+1 spectral taps of the multiplicative phase process; J[k] is the CPE."""

    j: np.ndarray  # (2k+1,) complex; entry i holds tap (i - k)
    k: int
    n_rows: int = 0  # observation rows behind the LS fit

    @property
    def cpe(self) -> complex:
        return self.j[self.k]


def gate_ici(est: IciEstimate, noise_var: float, factor: float = 3.0) -> IciEstimate:
    """Suppress off-center taps that are indistinguishable from fit noise.

    With unit-energy pilots the LS tap variance is ~noise_var/n_rows each;
    when the total off-center energy stays below `factor` times its
    noise-only expectation, correcting with those taps would only inject
    estimation noise, so the estimate collapses to its CPE term.
    """
    if est.k == 0 or est.n_rows == 0:
        return est
    off = np.abs(est.j) ** 2
    off_energy = off.sum() - off[est.k]
    threshold = factor * 2 * est.k * noise_var / est.n_rows
    if off_energy <= threshold:
        j = np.zeros_like(est.j)
        j[est.k] = est.j[est.k]
        return IciEstimate(j=j, k=est.k, n_rows=est.n_rows)
    return est


# ---------------------------------------------------------------------------
# Channel estimation and equalization
# ---------------------------------------------------------------------------

def estimate_channel_ls(rx_cells: np.ndarray, dmrs_symbol: int,
                        known_dmrs: np.ndarray, smooth_window: int = 7) -> np.ndarray:
    """LS channel estimate Y/X on a full-band reference symbol.

    A truncated moving average over `smooth_window` subcarriers suppresses
    noise (pass 1 to disable); the estimate is held constant over the slot.
    """
    x = np.asarray(known_dmrs)
    if np.any(x == 0):
        raise ValueError("reference symbol contains zero-valued cells")
    h = np.asarray(rx_cells)[:, dmrs_symbol] / x
    if smooth_window > 1:
        kern = np.ones(smooth_window)
        counts = np.convolve(np.ones(h.size), kern, mode="same")
        h = np.convolve(h, kern, mode="same") / counts
    return h


def equalize_mmse(cells: np.ndarray, h: np.ndarray, noise_var: float,
                  symbol_indices=None, unbias: bool = True) -> EqualizedSlot:
    """One-tap MMSE equalizer X = H* Y / (|H|^2 + noise_var).

    With unbias=True the MMSE amplitude shrinkage |H|^2/(|H|^2+v) is divided
    out so constellation decisions stay centered; the noiseless limit is
    zero-forcing either way.
    """
    cells = np.asarray(cells)
    h = np.asarray(h)
    if h.ndim == 1:
        h = h[:, None]
    denom = np.abs(h) ** 2 + noise_var
    eq = np.conj(h) * cells / denom
    post_nv = noise_var * np.abs(h) ** 2 / denom**2
    if unbias:
        gain = np.abs(h) ** 2 / denom
        eq = eq / gain
        post_nv = post_nv / gain**2
    n_sym = cells.shape[1]
    if symbol_indices is None:
        symbol_indices = np.arange(n_sym)
    return EqualizedSlot(
        cells=eq,
        noise_var=np.broadcast_to(post_nv.mean(axis=0), (n_sym,)).copy(),
        symbol_indices=np.asarray(symbol_indices),
    )


# ---------------------------------------------------------------------------
# Common phase error
# ---------------------------------------------------------------------------

def estimate_cpe(eq: EqualizedSlot, pat: PtrsPattern) -> np.ndarray:
    """Per-symbol unit-modulus common-phase-error estimates.

    The rotation of every pilot in a covered symbol is averaged and
    normalized; symbols without pilots get time-interpolated angles with
    constant extrapolation at the slot edges.
    """
    if pat.domain != "freq":
        raise ValueError("frequency-domain pilot pattern required")
    if pat.n_per_symbol == 0 or pat.symbols.size == 0:
        raise ValueError("pattern has no pilots")
    covered_cols = [eq.column_of(s) for s in pat.symbols]
    angles = np.empty(len(covered_cols))
    for j, col in enumerate(covered_cols):
        y = eq.cells[pat.indices, col]
        angles[j] = np.angle(np.vdot(pat.pilots[:, j], y))  # sum y * conj(p)
    angles = np.unwrap(angles)
    cols = np.arange(eq.cells.shape[1], dtype=float)
    return np.exp(1j * np.interp(cols, np.asarray(covered_cols, float), angles))


# ---------------------------------------------------------------------------
# ICI estimation and compensation (block pilots)
# ---------------------------------------------------------------------------

def estimate_ici_ls(eq: EqualizedSlot, pat: PtrsPattern, k: int = 4) -> list:
    """LS estimate of the 2k+1 phase-process spectral taps per covered symbol.

    The received cells of a contiguous pilot block are modeled as
    Y_m = sum_{|i|<=k} J_i X_{m-i} over physical subcarrier positions; rows
    whose convolution window would reach unknown data cells are dropped and
    the unused DC bin inside the block counts as a known zero. Returns one
    IciEstimate per covered symbol, ordered like pat.symbols.
    """
    if pat.domain != "freq":
        raise ValueError("ICI estimation needs a frequency-domain pilot block")
    n_unknowns = 2 * k + 1
    if pat.n_per_symbol < n_unknowns:
        raise ValueError(
            f"block of {pat.n_per_symbol} pilots cannot resolve {n_unknowns} unknowns"
        )
    width = eq.cells.shape[0]
    signed = subcarrier_offsets(width)[pat.indices]
    lo, hi = int(signed.min()), int(signed.max())
    span = hi - lo + 1
    pilot_pos = signed - lo
    known = np.zeros(span, dtype=bool)
    known[pilot_pos] = True
    if lo <= 0 <= hi:
        known[-lo] = True  # DC bin: carries no signal, value 0 is known
    if not known.all():
        raise ValueError("pilot block is not contiguous over its physical span")
    grid_at = np.full(span, -1, dtype=int)
    grid_at[pilot_pos] = pat.indices
    # Valid observation rows: window inside the span, and not the DC hole.
    rows = np.array([q for q in range(k, span - k) if lo + q != 0], dtype=int)
    if rows.size < n_unknowns:
        raise ValueError("pilot block too short for the requested ICI order")
    x_span = np.zeros(span, dtype=complex)
    out = []
    for j, sym in enumerate(pat.symbols):
        col = eq.column_of(sym)
        x_span[:] = 0.0
        x_span[pilot_pos] = pat.pilots[:, j]
        a = np.empty((rows.size, n_unknowns), dtype=complex)
        for r, q in enumerate(rows):
            a[r] = x_span[q - k : q + k + 1][::-1]
        cond = np.linalg.cond(a)
        if not np.isfinite(cond) or cond > _MAX_CONDITION:
            raise EstimationError(
                f"ill-conditioned pilot system (condition number {cond:.3g})"
            )
        y = eq.cells[grid_at[rows], col]
        j_hat, *_ = np.linalg.lstsq(a, y, rcond=None)
        out.append(IciEstimate(j=j_hat, k=k, n_rows=rows.size))
    return out


def compensate_ici(cells_col: np.ndarray, ici: IciEstimate, fft_size: int) -> np.ndarray:
    """Unit-modulus time-domain correction of one symbol's allocation cells.

    The estimated taps are zero-padded to the FFT grid, transformed to a
    time-domain reconstruction w[n] of the phase process, and the symbol's
    time samples are multiplied by exp(-j*arg(w[n])). Phase-only by design:
    for a pure phase distortion this equals the exact deconvolution, and it
    never amplifies noise.
    """
    cells_col = np.asarray(cells_col).ravel()
    width = cells_col.size
    taps = np.zeros(fft_size, dtype=complex)
    for i in range(-ici.k, ici.k + 1):
        taps[i % fft_size] = ici.j[i + ici.k]
    w = np.fft.ifft(taps) * fft_size  # w[n] = sum_i J_i exp(j 2 pi i n / N)
    bins = allocation_bins(width, fft_size)
    spec = np.zeros(fft_size, dtype=complex)
    spec[bins] = cells_col
    x = np.fft.ifft(spec)
    x = x * np.exp(-1j * np.angle(w))
    return np.fft.fft(x)[bins]


# ---------------------------------------------------------------------------
# DFT-s-OFDM time-domain tracking (group pilots)
# ---------------------------------------------------------------------------

def dfts_pn_track(time_block: np.ndarray, pat: PtrsPattern, symbol_index: int):
    """Within-symbol phase trajectory from the pre-DFT pilot groups.

    Returns (phase_est, cpe): the per-sample phase estimate over the block
    (piecewise-linear between unwrapped group-mean angles at the group
    centers, constant beyond the outer centers) and the block-mean rotation
    as a unit-modulus complex number, so the caller can use whichever
    detects better.
    """
    if pat.domain != "time" or not pat.groups:
        raise ValueError("time-domain group pilot pattern required")
    y = np.asarray(time_block).ravel()
    p = pat.pilot_column(symbol_index)
    centers = np.empty(len(pat.groups))
    angles = np.empty(len(pat.groups))
    pos = 0
    total = 0.0 + 0.0j
    for g, idx in enumerate(pat.groups):
        if idx.size == 0:
            raise ValueError(f"pilot group {g} is empty")
        rot = np.vdot(p[pos : pos + idx.size], y[idx])
        total += rot
        centers[g] = idx.mean()
        angles[g] = np.angle(rot)
        pos += idx.size
    angles = np.unwrap(angles)
    phase_est = np.interp(np.arange(y.size, dtype=float), centers, angles)
    cpe = total / abs(total) if total != 0 else 1.0 + 0.0j
    return phase_est, cpe


# ---------------------------------------------------------------------------
# Detection
# ---------------------------------------------------------------------------

@dataclass
class ErrorCounts:
    n_bits: int
    bit_errors: int
    n_symbols: int
    symbol_errors: int
    block_error: bool


def detect_and_count(eq_symbols: np.ndarray, tx_bits: np.ndarray, qm: int,
                     codec=None) -> ErrorCounts:
    """Hard-decide the equalized data symbols and count errors against tx_bits.

    A block error is any residual bit error in the slot's data region. When a
    codec is supplied its decode() runs on the hard bits first and tx_bits
    must hold the information bits; the default path is uncoded.
    """
    eq_symbols = np.asarray(eq_symbols).ravel()
    tx_bits = np.asarray(tx_bits, dtype=np.int8).ravel()
    rx_bits = qam_demap_hard(eq_symbols, qm)
    if codec is not None:
        rx_bits = np.asarray(codec.decode(rx_bits), dtype=np.int8)
    if rx_bits.size != tx_bits.size:
        raise ValueError(f"bit count mismatch: {rx_bits.size} vs {tx_bits.size}")
    errs = rx_bits != tx_bits
    bit_errors = int(errs.sum())
    sym_errors = int(errs.reshape(-1, qm).any(axis=1).sum()) if codec is None else 0
    return ErrorCounts(
        n_bits=tx_bits.size,
        bit_errors=bit_errors,
        n_symbols=eq_symbols.size,
        symbol_errors=sym_errors,
        block_error=bit_errors > 0,
    )


class NoCodec:
    """Uncoded pass-through codec (the bundled default)."""

    rate = 1.0

    def encode(self, bits):
        return bits

    def decode(self, bits):
        return bits
