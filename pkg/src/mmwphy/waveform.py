"""QAM mapping, OFDM / DFT-s-OFDM modulation, and PAPR measurement.

Conventions
-----------
- Constellations are the square Gray mappings of TS 38.211 section 5.1,
  normalized to unit average symbol energy. qm is bits per symbol, one of
  {2, 4, 6, 8}.
- The allocation is mapped symmetrically around DC (half the subcarriers on
  negative frequencies, half on positive), with the DC bin left unused.
- ``ofdm_modulate`` by default scales the output so that a fully loaded
  unit-energy grid yields unit mean time-domain power. With
  ``normalize=False`` the transform is orthonormal and Parseval holds
  exactly between grid cells and the useful part of the time signal.
"""

from dataclasses import dataclass

import numpy as np

from .numerology import NumerologyDerived

QM_VALUES = (2, 4, 6, 8)


@dataclass
class ResourceGrid:
    """Complex symbols on an (allocation subcarrier x slot symbol) lattice."""

    cells: np.ndarray  # shape (n_subcarriers, n_symbols)

    @property
    def width(self) -> int:
        return self.cells.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.cells.shape[1]


# ---------------------------------------------------------------------------
# QAM
# ---------------------------------------------------------------------------

def _axis_amplitude(bits_axis: np.ndarray) -> np.ndarray:
    """Amplitude of one axis from its Gray bits (..., nb), innermost last.

    TS 38.211 nested construction: 2 -> (1-2b0); 4 -> (1-2b0)(2-(1-2b1)); ...
    """
    nb = bits_axis.shape[-1]
    amp = 1.0 - 2.0 * bits_axis[..., nb - 1]
    for b in range(nb - 2, -1, -1):
        amp = (1.0 - 2.0 * bits_axis[..., b]) * (2.0 ** (nb - 1 - b) - amp)
    return amp


_QAM_NORM = {2: np.sqrt(2.0), 4: np.sqrt(10.0), 6: np.sqrt(42.0), 8: np.sqrt(170.0)}


def qam_map(bits, qm: int) -> np.ndarray:
    """Map a bit sequence to Gray-coded unit-energy QAM symbols."""
    if qm not in QM_VALUES:
        raise ValueError(f"qm must be one of {QM_VALUES}, got {qm}")
    bits = np.asarray(bits, dtype=np.int8).ravel()
    if bits.size % qm:
        raise ValueError(f"bit count {bits.size} not divisible by qm={qm}")
    b = bits.reshape(-1, qm)
    i_amp = _axis_amplitude(b[:, 0::2])
    q_amp = _axis_amplitude(b[:, 1::2])
    return (i_amp + 1j * q_amp) / _QAM_NORM[qm]


def _axis_demap_tables(qm: int):
    """Sorted PAM levels of one axis and the axis-bit patterns per level."""
    nb = qm // 2
    combos = np.array(
        [[(i >> (nb - 1 - b)) & 1 for b in range(nb)] for i in range(2**nb)],
        dtype=np.int8,
    )
    amps = _axis_amplitude(combos.astype(float))
    order = np.argsort(amps)
    return amps[order], combos[order]


def qam_demap_hard(symbols, qm: int, noise_var: float | None = None):
    """Minimum-distance hard decisions; optionally max-log LLRs.

    Returns the bit sequence, or (bits, llrs) when noise_var is given.
    LLRs follow the log P(b=0)/P(b=1) convention so that a positive LLR
    agrees with a hard decision of 0.
    """
    if qm not in QM_VALUES:
        raise ValueError(f"qm must be one of {QM_VALUES}, got {qm}")
    if noise_var is not None and noise_var <= 0:
        raise ValueError("noise_var must be > 0 when LLRs are requested")
    symbols = np.asarray(symbols).ravel()
    levels, level_bits = _axis_demap_tables(qm)
    m = levels.size
    norm = _QAM_NORM[qm]
    out = np.empty((symbols.size, qm), dtype=np.int8)
    vals = (symbols.real * norm, symbols.imag * norm)
    for axis, v in enumerate(vals):
        # Levels are the odd integers -(m-1)..(m-1); exact nearest-level bin.
        idx = np.clip(np.round((v + m - 1.0) / 2.0).astype(int), 0, m - 1)
        out[:, axis::2] = level_bits[idx]
    bits = out.ravel()
    if noise_var is None:
        return bits
    nb = qm // 2
    llrs = np.empty((symbols.size, qm))
    scaled = levels / norm
    for axis, v in enumerate((symbols.real, symbols.imag)):
        d2 = (v[:, None] - scaled[None, :]) ** 2
        for b in range(nb):
            mask1 = level_bits[:, b] == 1
            d0 = d2[:, ~mask1].min(axis=1)
            d1 = d2[:, mask1].min(axis=1)
            llrs[:, 2 * b + axis] = (d1 - d0) / noise_var
    return bits, llrs.ravel()


# ---------------------------------------------------------------------------
# OFDM
# ---------------------------------------------------------------------------

def subcarrier_offsets(width: int) -> np.ndarray:
    """Signed subcarrier offsets from DC for an allocation of `width` tones.

    Half the tones sit below DC, half above; DC itself is skipped.
    """
    if width % 2:
        raise ValueError("allocation width must be even")
    h = width // 2
    return np.concatenate([np.arange(-h, 0), np.arange(1, h + 1)])


def allocation_bins(width: int, fft_size: int) -> np.ndarray:
    """FFT bin index of each allocation subcarrier (DC-centered mapping)."""
    if width >= fft_size:
        raise ValueError(f"allocation width {width} does not fit FFT size {fft_size}")
    return subcarrier_offsets(width) % fft_size


def ofdm_modulate(grid: ResourceGrid, num: NumerologyDerived,
                  normalize: bool = True) -> np.ndarray:
    """CP-OFDM modulate a slot grid into time samples.

    Per symbol: orthonormal IFFT of the DC-centered mapping, cyclic prefix
    prepended. With normalize=True a gain of sqrt(fft/width) is applied so a
    fully loaded unit-energy grid gives unit mean time-domain power.
    """
    width = grid.width
    bins = allocation_bins(width, num.fft_size)
    spec = np.zeros((num.fft_size, grid.n_symbols), dtype=complex)
    spec[bins, :] = grid.cells
    body = np.fft.ifft(spec, axis=0, norm="ortho")
    if normalize:
        body = body * np.sqrt(num.fft_size / width)
    out = np.concatenate([body[-num.cp_samples:, :], body], axis=0)
    return out.reshape(-1, order="F")


def ofdm_demodulate(samples: np.ndarray, num: NumerologyDerived, width: int,
                    normalize: bool = True) -> ResourceGrid:
    """Inverse of ofdm_modulate: CP removal, FFT, allocation extraction."""
    samples = np.asarray(samples).ravel()
    spsym = num.samples_per_symbol
    if samples.size % spsym:
        raise ValueError(
            f"sample count {samples.size} is not a whole number of "
            f"{spsym}-sample symbols"
        )
    blocks = samples.reshape(spsym, -1, order="F")
    spec = np.fft.fft(blocks[num.cp_samples:, :], axis=0, norm="ortho")
    if normalize:
        spec = spec / np.sqrt(num.fft_size / width)
    bins = allocation_bins(width, num.fft_size)
    return ResourceGrid(spec[bins, :])


# ---------------------------------------------------------------------------
# DFT-s-OFDM transform precoding
# ---------------------------------------------------------------------------

def transform_precode(data: np.ndarray, m_sc: int) -> np.ndarray:
    """Orthonormal m_sc-point DFT of each pre-DFT block.

    The input holds one or more blocks of m_sc samples (pilots already
    inserted); the output columns map directly onto the allocation.
    """
    data = np.asarray(data)
    flat = data.ndim == 1
    if flat:
        if data.size % m_sc:
            raise ValueError(f"length {data.size} not divisible by m_sc={m_sc}")
        data = data.reshape(m_sc, -1, order="F")
    elif data.shape[0] != m_sc:
        raise ValueError(f"block length {data.shape[0]} != m_sc={m_sc}")
    out = np.fft.fft(data, axis=0, norm="ortho")
    return out.ravel(order="F") if flat else out


def transform_deprecode(grid_cols: np.ndarray, m_sc: int) -> np.ndarray:
    """Inverse transform precoding (orthonormal IDFT per symbol)."""
    cols = np.asarray(grid_cols)
    flat = cols.ndim == 1
    if flat:
        if cols.size % m_sc:
            raise ValueError(f"length {cols.size} not divisible by m_sc={m_sc}")
        cols = cols.reshape(m_sc, -1, order="F")
    elif cols.shape[0] != m_sc:
        raise ValueError(f"block length {cols.shape[0]} != m_sc={m_sc}")
    out = np.fft.ifft(cols, axis=0, norm="ortho")
    return out.ravel(order="F") if flat else out


# ---------------------------------------------------------------------------
# PAPR
# ---------------------------------------------------------------------------

def papr_db(samples: np.ndarray, symbol_len: int | None = None) -> np.ndarray:
    """Per symbol-period PAPR in dB: max |s|^2 over mean |s|^2."""
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("empty input")
    if samples.ndim == 1:
        if symbol_len is None:
            symbol_len = samples.size
        if samples.size % symbol_len:
            raise ValueError("sample count not a multiple of symbol_len")
        samples = samples.reshape(-1, symbol_len)
    p = np.abs(samples) ** 2
    return 10.0 * np.log10(p.max(axis=1) / p.mean(axis=1))


def papr_ccdf(samples: np.ndarray, thresholds_db,
              symbol_len: int | None = None) -> np.ndarray:
    """CCDF of the per-symbol PAPR evaluated at the given dB thresholds."""
    pdb = papr_db(samples, symbol_len)
    thresholds_db = np.atleast_1d(np.asarray(thresholds_db, dtype=float))
    return np.array([(pdb > t).mean() for t in thresholds_db])


def papr_at_ccdf(samples: np.ndarray, prob: float,
                 symbol_len: int | None = None) -> float:
    """PAPR level (dB) exceeded with probability `prob` (e.g. 1e-3)."""
    pdb = papr_db(samples, symbol_len)
    if not 0 < prob < 1:
        raise ValueError("prob must be in (0, 1)")
    return float(np.quantile(pdb, 1.0 - prob))
