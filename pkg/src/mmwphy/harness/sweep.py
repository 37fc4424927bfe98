"""Monte Carlo sweeps, required-SNR search, PAPR runs, and CSV emission.

Trials are reduced in trial-index order inside fixed-size batches, so the
same config and seed produce byte-identical CSVs for any worker count. The
per-SNR stop rule (minimum block errors or a trial cap) is evaluated only at
batch boundaries for the same reason.
"""

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.fft

from ..errors import ConfigError
from ..waveform import allocation_bins, papr_db, qam_map, transform_precode
from .config import SimConfig
from .pipeline import TrialRecord, run_slot_trial

_BATCH = 16  # fixed batch size; must not depend on the worker count

CSV_SWEEP_COLUMNS = (
    "snr_db", "trials", "bits", "bit_errors", "symbols", "symbol_errors",
    "block_errors", "ber", "ser", "bler", "evm_rms",
)
CSV_REQSNR_COLUMNS = (
    "mu", "scs_khz", "waveform", "modulation", "ptrs", "target", "metric",
    "required_snr_db", "floor_rate",
)
CSV_PAPR_COLUMNS = ("waveform", "modulation", "threshold_db", "ccdf")

UNREACHABLE = "unreachable"


@dataclass
class SweepPoint:
    snr_db: float
    trials: int = 0
    n_bits: int = 0
    bit_errors: int = 0
    n_symbols: int = 0
    symbol_errors: int = 0
    block_errors: int = 0
    evm_num: float = 0.0
    evm_den: float = 0.0

    def add(self, rec: TrialRecord):
        self.trials += 1
        self.n_bits += rec.n_bits
        self.bit_errors += rec.bit_errors
        self.n_symbols += rec.n_symbols
        self.symbol_errors += rec.symbol_errors
        self.block_errors += int(rec.block_error)
        self.evm_num += rec.evm_num
        self.evm_den += rec.evm_den

    @property
    def ber(self) -> float:
        return self.bit_errors / self.n_bits if self.n_bits else math.nan

    @property
    def ser(self) -> float:
        return self.symbol_errors / self.n_symbols if self.n_symbols else math.nan

    @property
    def bler(self) -> float:
        return self.block_errors / self.trials if self.trials else math.nan

    @property
    def evm_rms(self) -> float:
        return math.sqrt(self.evm_num / self.evm_den) if self.evm_den else math.nan

    def rate(self, metric: str) -> float:
        return {"ber": self.ber, "ser": self.ser, "bler": self.bler}[metric]


def _run_one(args):
    cfg, snr_db, idx = args
    return run_slot_trial(cfg, snr_db, idx)


def _map_trials(cfg, snr_db, indices, executor):
    args = [(cfg, snr_db, i) for i in indices]
    if executor is None:
        return [_run_one(a) for a in args]
    return list(executor.map(_run_one, args))


def run_point(cfg: SimConfig, snr_db: float, workers: int = 1,
              executor=None) -> SweepPoint:
    """Run trials at one SNR until the stop rule fires (batch-aligned)."""
    own = executor is None and workers > 1
    if own:
        executor = ProcessPoolExecutor(max_workers=workers)
    try:
        point = SweepPoint(snr_db=snr_db)
        t = 0
        while t < cfg.stop.max_trials:
            n = min(_BATCH, cfg.stop.max_trials - t)
            for rec in _map_trials(cfg, snr_db, range(t, t + n), executor):
                point.add(rec)
            t += n
            if point.block_errors >= cfg.stop.min_block_errors:
                break
        return point
    finally:
        if own:
            executor.shutdown()


def run_sweep(cfg: SimConfig, workers: int = 1) -> list:
    """Run the configured SNR grid; returns one SweepPoint per grid entry."""
    cfg.validate()
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        return [run_point(cfg, s, executor=executor) for s in cfg.snr_db]
    finally:
        if executor is not None:
            executor.shutdown()


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def write_csv(path, columns, rows, fingerprint: str, kind: str):
    """Write a result CSV with a config-fingerprint comment header."""
    with open(path, "w", newline="") as f:
        f.write(f"# mmwphy {kind} v1 config={fingerprint}\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def sweep_to_csv(points, cfg: SimConfig, path):
    rows = [
        (
            p.snr_db, p.trials, p.n_bits, p.bit_errors, p.n_symbols,
            p.symbol_errors, p.block_errors, p.ber, p.ser, p.bler, p.evm_rms,
        )
        for p in points
    ]
    write_csv(path, CSV_SWEEP_COLUMNS, rows, cfg.fingerprint(), "sweep")


def read_result_csv(path):
    """Parse a result CSV back into (fingerprint, list-of-dict rows)."""
    with open(path, newline="") as f:
        first = f.readline().strip()
        fingerprint = first.split("config=")[-1] if "config=" in first else ""
        rows = list(csv.DictReader(f))
    return fingerprint, rows


# ---------------------------------------------------------------------------
# Required-SNR search
# ---------------------------------------------------------------------------

@dataclass
class ReqSnrResult:
    snr_db: float | None  # None when the target is unreachable
    floor_rate: float | None = None  # measured rate at the top of the bracket

    @property
    def unreachable(self) -> bool:
        return self.snr_db is None


def required_snr(cfg: SimConfig, target: float, metric: str = "bler",
                 resolution_db: float = 0.25, workers: int = 1,
                 executor=None) -> ReqSnrResult:
    """Bisect the SNR at which `metric` crosses `target`.

    The bracket is [min, max] of cfg.snr_db. When the error rate at the top
    of the bracket is still above target (an error floor), the sentinel
    "unreachable" result is returned together with the floor estimate; a
    finite answer is never reported when the measured floor exceeds the
    target.
    """
    if not 0.0 < target < 1.0:
        raise ConfigError(f"target must be in (0, 1), got {target}")
    if metric not in ("ber", "ser", "bler"):
        raise ConfigError(f"metric must be ber/ser/bler, got {metric!r}")
    lo, hi = min(cfg.snr_db), max(cfg.snr_db)
    own = executor is None and workers > 1
    if own:
        executor = ProcessPoolExecutor(max_workers=workers)
    try:
        top = run_point(cfg, hi, executor=executor)
        r_hi = top.rate(metric)
        if not r_hi < target:
            return ReqSnrResult(snr_db=None, floor_rate=r_hi)
        r_lo = run_point(cfg, lo, executor=executor).rate(metric)
        if r_lo < target:
            return ReqSnrResult(snr_db=lo, floor_rate=None)
        while hi - lo > resolution_db:
            mid = 0.5 * (lo + hi)
            if run_point(cfg, mid, executor=executor).rate(metric) >= target:
                lo = mid
            else:
                hi = mid
        return ReqSnrResult(snr_db=0.5 * (lo + hi), floor_rate=None)
    finally:
        if own:
            executor.shutdown()


# ---------------------------------------------------------------------------
# PAPR measurement
# ---------------------------------------------------------------------------

def papr_samples(waveform: str, qm: int, n_subcarriers: int, n_symbols: int,
                 oversample: int = 4, seed=0, batch: int = 256) -> np.ndarray:
    """Per-symbol PAPR (dB) of random payload symbols for one waveform.

    Each symbol period is the useful part of one multicarrier symbol,
    oversampled by zero-padding the IFFT to oversample * n_subcarriers.
    """
    if waveform not in ("ofdm", "dfts"):
        raise ConfigError(f"waveform must be ofdm or dfts, got {waveform!r}")
    if oversample < 1:
        raise ConfigError("oversample must be >= 1")
    nfft = scipy.fft.next_fast_len(oversample * n_subcarriers)
    bins = allocation_bins(n_subcarriers, nfft)
    rng = np.random.default_rng(seed)
    out = np.empty(n_symbols)
    spec = np.zeros((batch, nfft), dtype=complex)  # non-allocation bins stay 0
    done = 0
    while done < n_symbols:
        n = min(batch, n_symbols - done)
        bits = rng.integers(0, 2, n * n_subcarriers * qm, dtype=np.int8)
        syms = qam_map(bits, qm).reshape(n, n_subcarriers)
        if waveform == "dfts":
            syms = transform_precode(syms.T, n_subcarriers).T
        spec[:n, bins] = syms
        t = scipy.fft.ifft(spec[:n], axis=-1, workers=-1)
        out[done : done + n] = papr_db(t)
        done += n
    return out


def run_papr(doc: dict, seed=0) -> list:
    """Rows of (waveform, modulation, threshold_db, ccdf) for a PAPR config."""
    try:
        waveforms = list(doc.get("waveforms", ["ofdm", "dfts"]))
        qm = int(doc.get("modulation", 2))
        n_sc = 12 * int(doc.get("n_prb", 180))
        n_symbols = int(doc.get("n_symbols", 100000))
        oversample = int(doc.get("oversample", 4))
        thresholds = doc.get("thresholds_db")
        if thresholds is None:
            thresholds = np.arange(0.0, 13.25, 0.25)
        thresholds = np.asarray(thresholds, dtype=float)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"malformed papr config: {e}") from e
    rows = []
    for wfm in waveforms:
        pdb = papr_samples(wfm, qm, n_sc, n_symbols, oversample, seed=seed)
        for t in thresholds:
            rows.append((wfm, qm, float(t), float((pdb > t).mean())))
    return rows
