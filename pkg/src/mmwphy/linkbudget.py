"""UL/DL EIRP, noise floor, path loss, and maximum link distance.

Distances come from a bisection on the monotone link margin

    EIRP + G_rx - PL(d) - gas*d - margins - noise_floor - required_SNR >= 0

using the urban-micro street-canyon path-loss formulas of 3GPP TR 38.901
Table 7.4.1-1 and a coherent array model (EIRP = per-element power +
20*log10(N) + element gain). Default element gain (5 dBi) and atmospheric
gas attenuation (15 dB/km, the 60 GHz oxygen line, ITU-R P.676 class
tables) are plain config values users can override per scenario.
"""

import csv
import importlib.resources
from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import ConfigError, LinkBudgetError

PATHLOSS_MODELS = ("umi_los", "umi_nlos")

_MIN_DISTANCE_M = 1.0
_MAX_DISTANCE_M = 1e6
_BISECT_RES_M = 0.1


@dataclass(frozen=True)
class ArrayEnd:
    n_elements: int
    element_gain_dbi: float = 5.0
    pa_sat_dbm: float = 15.4
    backoff_db: float = 0.0
    nf0_db: float = 7.0
    nf_slope_db_per_ghz: float = 1.0

    def validate(self):
        if self.n_elements < 1:
            raise ConfigError("n_elements must be >= 1")
        if self.backoff_db < 0:
            raise ConfigError("backoff_db must be >= 0")


@dataclass(frozen=True)
class LinkBudgetScenario:
    carrier_hz: float
    bandwidth_hz: float
    tx: ArrayEnd
    rx: ArrayEnd
    required_snr_db: float
    pathloss_model: str = "umi_los"
    eirp_limit_dbm: float | None = None
    gas_atten_db_per_km: float = 15.0
    margins_db: float = 3.0

    def validate(self):
        self.tx.validate()
        self.rx.validate()
        if self.bandwidth_hz <= 0 or self.carrier_hz <= 0:
            raise ConfigError("carrier and bandwidth must both be > 0")
        if self.pathloss_model not in PATHLOSS_MODELS:
            raise ConfigError(
                f"pathloss_model must be one of {PATHLOSS_MODELS}, "
                f"got {self.pathloss_model!r}"
            )


def eirp_dbm(s: LinkBudgetScenario) -> float:
    """EIRP with coherent array combining, clipped at the regulatory cap."""
    s.validate()
    per_element = s.tx.pa_sat_dbm - s.tx.backoff_db
    unconstrained = per_element + 20.0 * np.log10(s.tx.n_elements) + s.tx.element_gain_dbi
    if s.eirp_limit_dbm is None:
        return unconstrained
    return min(unconstrained, s.eirp_limit_dbm)


def eirp_limited(s: LinkBudgetScenario) -> bool:
    """True when the regulatory cap, not the PA, sets the EIRP."""
    if s.eirp_limit_dbm is None:
        return False
    per_element = s.tx.pa_sat_dbm - s.tx.backoff_db
    unconstrained = per_element + 20.0 * np.log10(s.tx.n_elements) + s.tx.element_gain_dbi
    return unconstrained > s.eirp_limit_dbm


def rx_array_gain_db(s: LinkBudgetScenario) -> float:
    return 10.0 * np.log10(s.rx.n_elements) + s.rx.element_gain_dbi


def noise_floor_dbm(s: LinkBudgetScenario) -> float:
    """Thermal floor with a bandwidth-proportional noise-figure penalty."""
    if s.bandwidth_hz <= 0:
        raise ConfigError("bandwidth must be > 0")
    nf = s.rx.nf0_db + s.rx.nf_slope_db_per_ghz * (s.bandwidth_hz / 1e9)
    return -174.0 + 10.0 * np.log10(s.bandwidth_hz) + nf


def path_loss_db(model: str, d_m, carrier_hz: float) -> np.ndarray:
    """Urban-micro street-canyon path loss (TR 38.901 Table 7.4.1-1).

    LOS uses the pre-breakpoint form 32.4 + 21 log10(d) + 20 log10(f_GHz)
    (the breakpoint lies beyond every mmWave cell size of interest here);
    NLOS is max(LOS, 35.3 log10(d) + 22.4 + 21.3 log10(f_GHz)) at the
    default 1.5 m terminal height. Distances below 1 m are clamped.
    """
    if model not in PATHLOSS_MODELS:
        raise ConfigError(f"unknown path loss model {model!r}")
    d = np.maximum(np.asarray(d_m, dtype=float), _MIN_DISTANCE_M)
    f_ghz = carrier_hz / 1e9
    los = 32.4 + 21.0 * np.log10(d) + 20.0 * np.log10(f_ghz)
    if model == "umi_los":
        out = los
    else:
        nlos = 35.3 * np.log10(d) + 22.4 + 21.3 * np.log10(f_ghz)
        out = np.maximum(los, nlos)
    return out if np.ndim(d_m) else float(out)


def link_margin_db(s: LinkBudgetScenario, d_m: float) -> float:
    """Receive SNR minus required SNR at distance d."""
    pl = path_loss_db(s.pathloss_model, d_m, s.carrier_hz)
    gas = s.gas_atten_db_per_km * d_m / 1e3
    snr = (
        eirp_dbm(s)
        + rx_array_gain_db(s)
        - pl
        - gas
        - s.margins_db
        - noise_floor_dbm(s)
    )
    return snr - s.required_snr_db


def max_link_distance(s: LinkBudgetScenario) -> float:
    """Largest distance (m) at which the link still closes, to 0.1 m.

    Raises LinkBudgetError with the dB deficit when the link already fails
    at the 1 m minimum distance.
    """
    s.validate()
    lo = _MIN_DISTANCE_M
    m0 = link_margin_db(s, lo)
    if m0 < 0:
        raise LinkBudgetError(
            f"link fails at {lo:.0f} m: margin deficit {-m0:.2f} dB"
        )
    hi = lo
    while link_margin_db(s, hi) >= 0:
        hi *= 2.0
        if hi > _MAX_DISTANCE_M:
            return _MAX_DISTANCE_M
    while hi - lo > _BISECT_RES_M:
        mid = 0.5 * (lo + hi)
        if link_margin_db(s, mid) >= 0:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# Scenario files and the bundled required-SNR table
# ---------------------------------------------------------------------------

def load_required_snr_table(path=None) -> dict:
    """Bundled (modulation, waveform) -> required SNR dB table.

    The table is produced by the simulation harness's required-SNR sweeps;
    see data/required_snr.csv for the generating configuration.
    """
    if path is None:
        path = importlib.resources.files("mmwphy.data") / "required_snr.csv"
    table = {}
    with open(str(path), newline="") as f:
        for row in csv.DictReader(filter(lambda ln: not ln.startswith("#"), f)):
            table[(int(row["modulation"]), row["waveform"])] = float(row["required_snr_db"])
    if not table:
        raise ConfigError(f"required-SNR table {path} is empty")
    return table


@dataclass
class ScenarioCase:
    """One expanded (scenario, direction, waveform) link budget case."""

    scenario: str
    direction: str  # "dl" | "ul"
    waveform: str  # "ofdm" | "dfts"
    budget: LinkBudgetScenario


def _end_from_dict(d: dict, pa: dict, backoff_db: float) -> ArrayEnd:
    return ArrayEnd(
        n_elements=int(d["n_elements"]),
        element_gain_dbi=float(d.get("element_gain_dbi", 5.0)),
        pa_sat_dbm=float(pa.get("sat_dbm", 15.4)),
        backoff_db=backoff_db,
        nf0_db=float(d.get("nf0_db", 7.0)),
        nf_slope_db_per_ghz=float(d.get("nf_slope_db_per_ghz", 1.0)),
    )


def load_scenarios(path, snr_table: dict | None = None) -> list:
    """Expand a scenario YAML file into per-direction, per-waveform cases.

    The file lists one or more scenarios, each with `bs` and `ue` array
    ends, a shared `pa` block with per-waveform backoffs, and either an
    explicit `required_snr_db` or a `modulation` resolved through the
    bundled required-SNR table.
    """
    with open(path) as f:
        doc = yaml.safe_load(f)
    scenarios = doc["scenarios"] if isinstance(doc, dict) and "scenarios" in doc else [doc]
    cases = []
    for sc in scenarios:
        try:
            name = sc["name"]
            pa = sc.get("pa", {})
            backoffs = {
                "ofdm": float(pa.get("backoff_ofdm_db", 6.5)),
                "dfts": float(pa.get("backoff_dfts_db", 4.5)),
            }
            for direction in ("dl", "ul"):
                tx_d, rx_d = (sc["bs"], sc["ue"]) if direction == "dl" else (sc["ue"], sc["bs"])
                for wf, backoff in backoffs.items():
                    if "required_snr_db" in sc:
                        req = float(sc["required_snr_db"])
                    else:
                        table = snr_table if snr_table is not None else load_required_snr_table()
                        key = (int(sc["modulation"]), wf)
                        if key not in table:
                            raise ConfigError(f"no required-SNR entry for {key}")
                        req = table[key]
                    budget = LinkBudgetScenario(
                        carrier_hz=float(sc["carrier_hz"]),
                        bandwidth_hz=float(sc["bandwidth_hz"]),
                        tx=_end_from_dict(tx_d, pa, backoff),
                        rx=_end_from_dict(rx_d, pa, 0.0),
                        required_snr_db=req,
                        pathloss_model=sc.get("pathloss_model", "umi_los"),
                        eirp_limit_dbm=(
                            float(sc["eirp_limit_dbm"])
                            if sc.get("eirp_limit_dbm") is not None
                            else None
                        ),
                        gas_atten_db_per_km=float(sc.get("gas_atten_db_per_km", 15.0)),
                        margins_db=float(sc.get("margins_db", 3.0)),
                    )
                    cases.append(ScenarioCase(name, direction, wf, budget))
        except KeyError as e:
            raise ConfigError(f"scenario file {path} missing key {e}") from e
    return cases


def evaluate_scenarios(cases) -> list:
    """Rows of {scenario, direction, waveform, distance_m, limiting_factor}."""
    rows = []
    for c in cases:
        rows.append(
            {
                "scenario": c.scenario,
                "direction": c.direction,
                "waveform": c.waveform,
                "distance_m": max_link_distance(c.budget),
                "limiting_factor": "eirp" if eirp_limited(c.budget) else "pa",
            }
        )
    return rows
