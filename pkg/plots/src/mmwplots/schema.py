"""Result-CSV parsing and schema validation.

The consumed schemas (one per figure kind):

- sweep:    snr_db, trials, bits, bit_errors, symbols, symbol_errors,
            block_errors, ber, ser, bler, evm_rms
- reqsnr:   mu, scs_khz, waveform, modulation, ptrs, target, metric,
            required_snr_db, floor_rate
- linkdist: scenario, direction, waveform, distance_m, limiting_factor

`required_snr_db` may hold the sentinel string "unreachable"; it is kept
verbatim so renderers can draw annotated gaps. Leading `#` comment lines
(the config fingerprint) are skipped.
"""

import csv

UNREACHABLE = "unreachable"

REQUIRED_COLUMNS = {
    "sweep": ("snr_db", "ser", "bler"),
    "reqsnr": ("scs_khz", "waveform", "modulation", "ptrs", "required_snr_db"),
    "linkdist": ("scenario", "direction", "waveform", "distance_m"),
}


class SchemaError(ValueError):
    """A CSV does not match the documented result schema."""


def read_csv(path, kind: str):
    """Parse one result CSV and validate it against the schema for `kind`.

    Returns a list of row dicts (strings, unconverted). Raises SchemaError
    for unknown kinds, missing columns, or an empty data section.
    """
    if kind not in REQUIRED_COLUMNS:
        raise SchemaError(f"unknown figure kind {kind!r}")
    with open(path, newline="") as f:
        rows = list(csv.DictReader(ln for ln in f if not ln.startswith("#")))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    missing = [c for c in REQUIRED_COLUMNS[kind] if c not in rows[0]]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
    return rows


def numeric(row, column, path="csv"):
    try:
        return float(row[column])
    except ValueError as e:
        raise SchemaError(f"{path}: column {column!r} is not numeric: {row[column]!r}") from e
