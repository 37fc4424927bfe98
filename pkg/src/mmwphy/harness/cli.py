"""Command-line entry points: `sim` (sweep/reqsnr/papr) and `linkbudget`.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

import argparse
import os
import sys

import yaml

from .. import linkbudget as lb
from ..errors import ConfigError
from .config import preset_path, sim_config_from_dict
from .sweep import (
    CSV_PAPR_COLUMNS,
    CSV_REQSNR_COLUMNS,
    UNREACHABLE,
    required_snr,
    run_papr,
    run_sweep,
    sweep_to_csv,
    write_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _resolve_config(path: str) -> str:
    if os.path.exists(path):
        return path
    try:
        return preset_path(path)
    except ConfigError:
        raise ConfigError(f"config file or preset {path!r} not found") from None


def _load_yaml(path: str) -> dict:
    with open(path) as f:
        doc = yaml.safe_load(f)
    if not isinstance(doc, dict):
        raise ConfigError(f"{path} is not a YAML mapping")
    return doc


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _fingerprint_doc(doc: dict) -> str:
    import hashlib
    import json

    return hashlib.sha256(json.dumps(doc, sort_keys=True, default=str).encode()).hexdigest()[:12]


def _cmd_sweep(doc: dict, args) -> None:
    cfg = sim_config_from_dict(doc, base_seed=args.seed)
    points = run_sweep(cfg, workers=args.workers)
    sweep_to_csv(points, cfg, args.out)


def _cmd_reqsnr(doc: dict, args) -> None:
    target = float(doc.get("target", 0.1))
    metric = doc.get("metric", "bler")
    common = doc.get("common", {}) or {}
    cases = doc.get("cases")
    if not cases:
        raise ConfigError("reqsnr config needs a non-empty 'cases' list")
    if "snr_db" in doc:
        common = _merge(common, {"snr_db": doc["snr_db"]})
    rows = []
    for case in cases:
        cfg = sim_config_from_dict(_merge(common, case), base_seed=args.seed)
        res = required_snr(cfg, target, metric=metric, workers=args.workers)
        rows.append(
            (
                cfg.mu,
                15.0 * 2**cfg.mu,
                cfg.waveform,
                cfg.modulation,
                cfg.ptrs or "none",
                target,
                metric,
                UNREACHABLE if res.unreachable else res.snr_db,
                "" if res.floor_rate is None else res.floor_rate,
            )
        )
    write_csv(args.out, CSV_REQSNR_COLUMNS, rows, _fingerprint_doc(doc), "reqsnr")


def _cmd_papr(doc: dict, args) -> None:
    rows = run_papr(doc, seed=args.seed if args.seed is not None else 0)
    write_csv(args.out, CSV_PAPR_COLUMNS, rows, _fingerprint_doc(doc), "papr")


def sim_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sim", description="Monte Carlo link-level simulation driver"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("sweep", "error-rate sweep over an SNR grid"),
        ("reqsnr", "required SNR to hit an error-rate target"),
        ("papr", "peak-to-average power ratio CCDF"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="config YAML or bundled preset name")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=None, help="override base seed")
    args = parser.parse_args(argv)
    try:
        doc = _load_yaml(_resolve_config(args.config))
        kind = doc.pop("kind", args.command)
        if kind != args.command:
            raise ConfigError(
                f"config kind {kind!r} does not match command {args.command!r}"
            )
        {"sweep": _cmd_sweep, "reqsnr": _cmd_reqsnr, "papr": _cmd_papr}[args.command](doc, args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def linkbudget_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="linkbudget", description="UL/DL cell-size evaluation"
    )
    parser.add_argument("--scenario", required=True, help="scenario YAML or preset name")
    parser.add_argument("--out", required=True, help="output CSV path")
    args = parser.parse_args(argv)
    try:
        path = _resolve_config(args.scenario)
        cases = lb.load_scenarios(path)
        rows = lb.evaluate_scenarios(cases)
        write_csv(
            args.out,
            ("scenario", "direction", "waveform", "distance_m", "limiting_factor"),
            [tuple(r.values()) for r in rows],
            _fingerprint_doc(_load_yaml(path)),
            "linkdist",
        )
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(sim_main())
