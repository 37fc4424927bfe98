"""Monte Carlo driver: slot pipeline, sweeps, required-SNR search, PAPR runs."""

from .config import PnOptions, RxOptions, SimConfig, StopRule, load_sim_config
from .pipeline import TrialRecord, run_slot_trial
from .sweep import (
    ReqSnrResult,
    SweepPoint,
    required_snr,
    run_papr,
    run_sweep,
    sweep_to_csv,
)

__all__ = [
    "PnOptions",
    "RxOptions",
    "SimConfig",
    "StopRule",
    "load_sim_config",
    "TrialRecord",
    "run_slot_trial",
    "ReqSnrResult",
    "SweepPoint",
    "required_snr",
    "run_papr",
    "run_sweep",
    "sweep_to_csv",
]
