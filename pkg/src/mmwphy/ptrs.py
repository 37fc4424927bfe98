"""Phase-tracking pilot placement patterns, sequences and overhead arithmetic.

Four designs are supported:

- ``OfdmDistributed``: one pilot subcarrier in every 2nd or 4th PRB, present
  on every L-th data symbol (frequency-domain insertion).
- ``OfdmBlock``: a contiguous band-center block of pilot subcarriers on every
  data symbol, enabling frequency-domain ICI estimation.
- ``DftsGroups``: groups of pilot samples inserted into the pre-DFT block of
  a DFT-s-OFDM symbol (time-domain insertion), 2/4/8 groups of 2 or 4.
- ``DftsEnhanced``: the densified 12-group x 4-sample variant.

Pilot values are seeded unit-energy QPSK; regenerating a pattern with the
same seed is bit-identical, which is how transmitter and receiver agree.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError

SC_PER_PRB = 12


@dataclass(frozen=True)
class OfdmDistributed:
    every_nth_prb: int = 2
    time_density: int = 1  # pilot on every L-th data symbol

    def validate(self):
        if self.every_nth_prb not in (2, 4):
            raise ConfigError(f"every_nth_prb must be 2 or 4, got {self.every_nth_prb}")
        if self.time_density not in (1, 2, 4):
            raise ConfigError(f"time_density must be 1, 2 or 4, got {self.time_density}")


@dataclass(frozen=True)
class OfdmBlock:
    block_prbs: int = 4

    def validate(self):
        if self.block_prbs < 1:
            raise ConfigError("block_prbs must be >= 1")


@dataclass(frozen=True)
class DftsGroups:
    n_groups: int = 8
    samples_per_group: int = 4

    def validate(self):
        if self.n_groups not in (2, 4, 8):
            raise ConfigError(f"n_groups must be 2, 4 or 8, got {self.n_groups}")
        if self.samples_per_group not in (2, 4):
            raise ConfigError(
                f"samples_per_group must be 2 or 4, got {self.samples_per_group}"
            )


@dataclass(frozen=True)
class DftsEnhanced:
    n_groups: int = 12
    samples_per_group: int = 4

    def validate(self):
        if self.n_groups != 12 or self.samples_per_group != 4:
            raise ConfigError("enhanced pattern is fixed at 12 groups of 4")


PtrsConfig = Union[OfdmDistributed, OfdmBlock, DftsGroups, DftsEnhanced]


@dataclass
class PtrsPattern:
    """Resolved pilot placement for one slot.

    ``indices`` are allocation-relative subcarrier indices for frequency
    domain ("freq") patterns, or pre-DFT sample indices for time domain
    ("time") patterns; they are identical on every covered symbol.
    ``pilots[:, j]`` holds the pilot values of covered symbol ``symbols[j]``.
    ``groups`` partitions ``indices`` for the time-domain designs.
    """

    domain: str  # "freq" | "time"
    indices: np.ndarray
    symbols: np.ndarray
    pilots: np.ndarray  # shape (len(indices), len(symbols))
    groups: tuple = ()

    @property
    def n_per_symbol(self) -> int:
        return len(self.indices)

    def pilot_column(self, symbol_index: int) -> np.ndarray:
        j = np.flatnonzero(self.symbols == symbol_index)
        if j.size == 0:
            raise ValueError(f"symbol {symbol_index} carries no pilots")
        return self.pilots[:, j[0]]


def _pattern_indices(cfg: PtrsConfig, alloc: int):
    """Placement indices and (for time-domain patterns) group partition."""
    if isinstance(cfg, OfdmDistributed):
        if alloc % SC_PER_PRB:
            raise ConfigError(f"allocation of {alloc} subcarriers is not whole PRBs")
        n_prb = alloc // SC_PER_PRB
        if n_prb < cfg.every_nth_prb:
            raise ConfigError("allocation smaller than the PRB stride")
        # Subcarrier 0 of each selected PRB.
        prbs = np.arange(0, n_prb, cfg.every_nth_prb)
        return prbs * SC_PER_PRB, ()
    if isinstance(cfg, OfdmBlock):
        size = SC_PER_PRB * cfg.block_prbs
        if size > alloc:
            raise ConfigError(f"block of {size} subcarriers exceeds allocation {alloc}")
        start = (alloc - size) // 2
        return np.arange(start, start + size), ()
    if isinstance(cfg, (DftsGroups, DftsEnhanced)):
        g, s = cfg.n_groups, cfg.samples_per_group
        if g * s > alloc:
            raise ConfigError(f"{g} groups of {s} samples exceed block length {alloc}")
        groups = []
        for i in range(g):
            center = int((i + 0.5) * alloc // g)
            first = center - s // 2
            groups.append(np.arange(first, first + s))
        idx = np.concatenate(groups)
        if idx[0] < 0 or idx[-1] >= alloc or np.unique(idx).size != idx.size:
            raise ConfigError("group placement does not fit the pre-DFT block")
        return idx, tuple(groups)
    raise ConfigError(f"unknown pilot config {cfg!r}")


def build_pattern(cfg: PtrsConfig, alloc: int, symbols, seed) -> PtrsPattern:
    """Resolve a pilot config into concrete indices and seeded pilot values.

    `alloc` is the allocation width in subcarriers (equals the pre-DFT block
    length for the time-domain designs); `symbols` lists the data-symbol
    indices of the slot.
    """
    cfg.validate()
    symbols = np.asarray(symbols, dtype=int)
    if symbols.size == 0:
        raise ConfigError("no data symbols to place pilots on")
    indices, groups = _pattern_indices(cfg, alloc)
    if isinstance(cfg, OfdmDistributed):
        covered = symbols[:: cfg.time_density]
    else:
        covered = symbols
    rng = np.random.default_rng(seed)
    qpsk = (1.0 - 2.0 * rng.integers(0, 2, (len(indices), len(covered), 2))) / np.sqrt(2.0)
    pilots = qpsk[..., 0] + 1j * qpsk[..., 1]
    domain = "freq" if isinstance(cfg, (OfdmDistributed, OfdmBlock)) else "time"
    return PtrsPattern(domain, indices, covered, pilots, groups)


def overhead(cfg: PtrsConfig, alloc: int, symbols) -> float:
    """Pilot resources divided by total data-region resources."""
    cfg.validate()
    symbols = np.asarray(symbols, dtype=int)
    if symbols.size == 0:
        raise ConfigError("overhead undefined for zero data symbols")
    indices, _ = _pattern_indices(cfg, alloc)
    if isinstance(cfg, OfdmDistributed):
        n_covered = len(symbols[:: cfg.time_density])
    else:
        n_covered = symbols.size
    return len(indices) * n_covered / (alloc * symbols.size)
