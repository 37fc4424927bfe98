"""Clock, grid, and throughput constants derived from the subcarrier-spacing index.

Subcarrier spacings follow the 15 kHz power-of-two family, SCS = 15 * 2**mu kHz.
Only the wideband indices mu = 3..8 (120 kHz .. 3840 kHz) are supported here.
"""

from dataclasses import dataclass

from .errors import ConfigError

# Max channel bandwidth per SCS index, 400 MHz at 120 kHz doubling with mu.
CHANNEL_BW_HZ = {
    3: 400e6,
    4: 800e6,
    5: 1600e6,
    6: 3200e6,
    7: 6400e6,
    8: 12800e6,
}

MU_MIN = 3
MU_MAX = 8
MAX_N_PRB = 264
SC_PER_PRB = 12

# Fixed cyclic prefix: 288 samples per symbol at FFT size 4096 (~7.03% overhead).
# The longer first-symbol CP used by NR slot framing is intentionally omitted,
# so the slot duration deviates <0.3% from the nominal power-of-two scaling.
CP_SAMPLES_AT_4096 = 288


@dataclass(frozen=True)
class NumerologyConfig:
    """Input knobs: SCS index, allocation size, FFT size, symbols per slot."""

    mu: int
    n_prb: int
    fft_size: int = 4096
    symbols_per_slot: int = 14

    def validate(self):
        if not MU_MIN <= self.mu <= MU_MAX:
            raise ConfigError(
                f"mu={self.mu} outside supported range [{MU_MIN}, {MU_MAX}]"
            )
        if not 1 <= self.n_prb <= MAX_N_PRB:
            raise ConfigError(f"n_prb={self.n_prb} outside [1, {MAX_N_PRB}]")
        if self.fft_size < 1:
            raise ConfigError(f"fft_size={self.fft_size} must be positive")
        if SC_PER_PRB * self.n_prb > self.fft_size:
            raise ConfigError(
                f"allocation of {SC_PER_PRB * self.n_prb} subcarriers exceeds "
                f"fft_size={self.fft_size}"
            )
        if self.symbols_per_slot < 1:
            raise ConfigError("symbols_per_slot must be >= 1")


@dataclass(frozen=True)
class NumerologyDerived:
    """All derived clock/grid constants for one (mu, n_prb, fft_size) choice."""

    mu: int
    n_prb: int
    fft_size: int
    symbols_per_slot: int
    scs_hz: float
    sampling_rate_hz: float
    cp_samples: int
    symbol_duration_s: float  # useful part only, fft_size / fs
    slot_duration_s: float
    allocation_bw_hz: float
    channel_bw_hz: float

    @property
    def n_subcarriers(self) -> int:
        return SC_PER_PRB * self.n_prb

    @property
    def samples_per_symbol(self) -> int:
        return self.fft_size + self.cp_samples

    @property
    def samples_per_slot(self) -> int:
        return self.symbols_per_slot * self.samples_per_symbol


def derive(cfg: NumerologyConfig) -> NumerologyDerived:
    """Expand a NumerologyConfig into all derived constants.

    Raises ConfigError when a bound of the config is violated.
    """
    cfg.validate()
    scs_hz = 15e3 * 2**cfg.mu
    fs = scs_hz * cfg.fft_size
    cp = round(CP_SAMPLES_AT_4096 * cfg.fft_size / 4096)
    slot = cfg.symbols_per_slot * (cfg.fft_size + cp) / fs
    return NumerologyDerived(
        mu=cfg.mu,
        n_prb=cfg.n_prb,
        fft_size=cfg.fft_size,
        symbols_per_slot=cfg.symbols_per_slot,
        scs_hz=scs_hz,
        sampling_rate_hz=fs,
        cp_samples=cp,
        symbol_duration_s=cfg.fft_size / fs,
        slot_duration_s=slot,
        allocation_bw_hz=SC_PER_PRB * cfg.n_prb * scs_hz,
        channel_bw_hz=CHANNEL_BW_HZ[cfg.mu],
    )


def phy_bit_rate(d: NumerologyDerived, qm: int, data_symbols: int,
                 ptrs_overhead: float) -> float:
    """Uncoded PHY air rate in bit/s for a rank-1 slot.

    qm is bits per QAM symbol, data_symbols the number of slot symbols left
    after control/reference symbols, ptrs_overhead the fraction of data
    resources spent on phase-tracking pilots. No code-rate factor is applied.
    """
    if not 0 <= ptrs_overhead < 1:
        raise ConfigError(f"ptrs_overhead={ptrs_overhead} outside [0, 1)")
    if not 1 <= data_symbols <= d.symbols_per_slot:
        raise ConfigError(
            f"data_symbols={data_symbols} outside [1, {d.symbols_per_slot}]"
        )
    if qm < 0:
        raise ConfigError(f"qm={qm} must be non-negative")
    n_re = SC_PER_PRB * d.n_prb * data_symbols
    return n_re * qm * (1.0 - ptrs_overhead) / d.slot_duration_s
