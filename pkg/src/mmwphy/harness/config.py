"""Simulation configuration: schema, validation, fingerprinting.

Configs are hierarchical key-value YAML files. A canonicalized SHA-256
fingerprint of the config is embedded as a comment in every result CSV so
outputs can be traced back to their exact settings.
"""

import hashlib
import importlib.resources
import json
import os
from dataclasses import asdict, dataclass, field

import yaml

from ..channel import ChannelConfig
from ..errors import ConfigError
from ..numerology import NumerologyConfig, derive
from ..ptrs import DftsEnhanced, DftsGroups, OfdmBlock, OfdmDistributed

WAVEFORMS = ("ofdm", "dfts")
PTRS_NAMES = ("distributed", "block", "groups", "groups12")
CHANNELS = ("awgn", "tdl")
CHANNEL_EST = ("ls", "genie")
PN_COMP = ("none", "cpe", "interp", "ici", "genie-best")


@dataclass(frozen=True)
class PnOptions:
    enabled: bool = False
    tx_model: str = "bs_gaas_80mw"
    rx_model: str = "ue_cmos_50mw"
    carrier_hz: float = 60e9


@dataclass(frozen=True)
class RxOptions:
    channel_est: str = "ls"
    pn_comp: str = "none"
    ici_k: int = 4
    smooth_window: int = 7


@dataclass(frozen=True)
class StopRule:
    min_block_errors: int = 100
    max_trials: int = 400


@dataclass
class SimConfig:
    waveform: str
    mu: int
    n_prb: int
    modulation: int  # bits per symbol
    fft_size: int = 4096
    symbols_per_slot: int = 14
    ptrs: str | None = None
    ptrs_params: dict = field(default_factory=dict)
    pn: PnOptions = PnOptions()
    channel: str = "awgn"
    channel_params: dict = field(default_factory=dict)
    rx: RxOptions = RxOptions()
    snr_db: tuple = (10.0,)
    stop: StopRule = StopRule()
    base_seed: int = 0

    def validate(self):
        if self.waveform not in WAVEFORMS:
            raise ConfigError(f"waveform must be one of {WAVEFORMS}")
        if self.modulation not in (2, 4, 6, 8):
            raise ConfigError("modulation (bits/symbol) must be 2, 4, 6 or 8")
        derive(self.numerology())  # bounds checked there
        if self.ptrs is not None and self.ptrs not in PTRS_NAMES:
            raise ConfigError(f"ptrs must be one of {PTRS_NAMES} or null")
        if self.ptrs in ("distributed", "block") and self.waveform != "ofdm":
            raise ConfigError(f"ptrs={self.ptrs!r} requires the ofdm waveform")
        if self.ptrs in ("groups", "groups12") and self.waveform != "dfts":
            raise ConfigError(f"ptrs={self.ptrs!r} requires the dfts waveform")
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel must be one of {CHANNELS}")
        if self.rx.channel_est not in CHANNEL_EST:
            raise ConfigError(f"rx.channel_est must be one of {CHANNEL_EST}")
        if self.rx.pn_comp not in PN_COMP:
            raise ConfigError(f"rx.pn_comp must be one of {PN_COMP}")
        if self.rx.pn_comp != "none" and self.ptrs is None:
            raise ConfigError(f"rx.pn_comp={self.rx.pn_comp!r} needs a ptrs config")
        if self.rx.pn_comp in ("interp", "genie-best") and self.waveform != "dfts":
            raise ConfigError(f"rx.pn_comp={self.rx.pn_comp!r} is a dfts receiver")
        if self.rx.pn_comp == "ici" and self.ptrs != "block":
            raise ConfigError("rx.pn_comp='ici' needs ptrs='block'")
        if not self.snr_db:
            raise ConfigError("snr_db grid is empty")
        if self.stop.min_block_errors < 1 or self.stop.max_trials < 1:
            raise ConfigError("stop rule bounds must be >= 1")

    def numerology(self) -> NumerologyConfig:
        return NumerologyConfig(
            mu=self.mu,
            n_prb=self.n_prb,
            fft_size=self.fft_size,
            symbols_per_slot=self.symbols_per_slot,
        )

    def ptrs_config(self):
        p = self.ptrs_params
        if self.ptrs is None:
            return None
        if self.ptrs == "distributed":
            return OfdmDistributed(
                every_nth_prb=int(p.get("every_nth_prb", 2)),
                time_density=int(p.get("time_density", 1)),
            )
        if self.ptrs == "block":
            return OfdmBlock(block_prbs=int(p.get("block_prbs", 4)))
        if self.ptrs == "groups":
            return DftsGroups(
                n_groups=int(p.get("n_groups", 8)),
                samples_per_group=int(p.get("samples_per_group", 4)),
            )
        return DftsEnhanced()

    def channel_config(self) -> ChannelConfig:
        p = self.channel_params
        return ChannelConfig(
            rms_delay_spread_s=float(p.get("rms_delay_spread_s", 10e-9)),
            rician_k_db=float(p.get("rician_k_db", 15.0)),
            n_taps=int(p.get("n_taps", 8)),
            ue_speed_mps=float(p.get("ue_speed_mps", 3.0 / 3.6)),
            carrier_hz=float(p.get("carrier_hz", self.pn.carrier_hz)),
        )

    def canonical(self) -> dict:
        d = asdict(self)
        d["snr_db"] = list(d["snr_db"])
        return d

    def fingerprint(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def pn_model_path(name_or_path: str) -> str:
    """Resolve a bundled model name or a filesystem path to a model file."""
    if os.sep in name_or_path or name_or_path.endswith(".yaml"):
        if not os.path.exists(name_or_path):
            raise ConfigError(f"phase-noise model file not found: {name_or_path}")
        return name_or_path
    res = importlib.resources.files("mmwphy.data") / f"pn_models/{name_or_path}.yaml"
    if not res.is_file():
        raise ConfigError(f"unknown bundled phase-noise model {name_or_path!r}")
    return str(res)


def sim_config_from_dict(doc: dict, base_seed=None) -> SimConfig:
    """Build and validate a SimConfig from a parsed YAML mapping."""
    try:
        pn_doc = doc.get("pn", {}) or {}
        rx_doc = doc.get("rx", {}) or {}
        stop_doc = doc.get("stop", {}) or {}
        cfg = SimConfig(
            waveform=doc["waveform"],
            mu=int(doc["mu"]),
            n_prb=int(doc["n_prb"]),
            modulation=int(doc["modulation"]),
            fft_size=int(doc.get("fft_size", 4096)),
            symbols_per_slot=int(doc.get("symbols_per_slot", 14)),
            ptrs=doc.get("ptrs"),
            ptrs_params=doc.get("ptrs_params", {}) or {},
            pn=PnOptions(
                enabled=bool(pn_doc.get("enabled", False)),
                tx_model=pn_doc.get("tx_model", "bs_gaas_80mw"),
                rx_model=pn_doc.get("rx_model", "ue_cmos_50mw"),
                carrier_hz=float(pn_doc.get("carrier_hz", 60e9)),
            ),
            channel=doc.get("channel", "awgn"),
            channel_params=doc.get("channel_params", {}) or {},
            rx=RxOptions(
                channel_est=rx_doc.get("channel_est", "ls"),
                pn_comp=rx_doc.get("pn_comp", "none"),
                ici_k=int(rx_doc.get("ici_k", 4)),
                smooth_window=int(rx_doc.get("smooth_window", 7)),
            ),
            snr_db=tuple(float(s) for s in doc.get("snr_db", [10.0])),
            stop=StopRule(
                min_block_errors=int(stop_doc.get("min_block_errors", 100)),
                max_trials=int(stop_doc.get("max_trials", 400)),
            ),
            base_seed=int(doc.get("base_seed", 0)) if base_seed is None else int(base_seed),
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"malformed simulation config: {e}") from e
    cfg.validate()
    if cfg.pn.enabled:
        pn_model_path(cfg.pn.tx_model)
        pn_model_path(cfg.pn.rx_model)
    return cfg


def load_sim_config(path, base_seed=None) -> SimConfig:
    with open(path) as f:
        doc = yaml.safe_load(f)
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} is not a mapping")
    return sim_config_from_dict(doc, base_seed=base_seed)


def preset_path(name: str) -> str:
    """Path of a bundled preset config (fig2-lite, fig3-lite, fig4)."""
    res = importlib.resources.files("mmwphy.data") / f"presets/{name}.yaml"
    if not res.is_file():
        raise ConfigError(f"unknown preset {name!r}")
    return str(res)
