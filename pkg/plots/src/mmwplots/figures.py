"""Figure builders: sweep curves, required-SNR bars, link-distance bars."""

import os
from dataclasses import dataclass, field

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schema import UNREACHABLE, SchemaError, numeric, read_csv  # noqa: E402

KINDS = ("sweep", "reqsnr", "linkdist")

# Fixed salt so SVG element ids do not depend on object identity.
matplotlib.rcParams["svg.hashsalt"] = "mmwplots"

_SERIES_COLORS = plt.rcParams["axes.prop_cycle"].by_key()["color"]


@dataclass
class FigureSpec:
    kind: str
    inputs: list
    output: str
    labels: list = field(default_factory=list)
    metric: str = "bler"  # sweep curves only
    title: str = ""

    def validate(self):
        if self.kind not in KINDS:
            raise SchemaError(f"figure kind must be one of {KINDS}, got {self.kind!r}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise SchemaError("labels, when given, must match the input count")
        if self.kind == "sweep" and self.metric not in ("ber", "ser", "bler"):
            raise SchemaError(f"sweep metric must be ber/ser/bler, got {self.metric!r}")


def _label(spec, i):
    if spec.labels:
        return spec.labels[i]
    return os.path.splitext(os.path.basename(spec.inputs[i]))[0]


def _sweep_axes(spec, ax):
    for i, path in enumerate(spec.inputs):
        rows = read_csv(path, "sweep")
        if spec.metric not in rows[0]:
            raise SchemaError(f"{path}: missing column(s) {spec.metric}")
        snr = np.array([numeric(r, "snr_db", path) for r in rows])
        rate = np.array([numeric(r, spec.metric, path) for r in rows])
        order = np.argsort(snr)
        shown = np.where(rate[order] > 0, rate[order], np.nan)  # log axis
        ax.semilogy(snr[order], shown, marker="o", ms=3.5,
                    color=_SERIES_COLORS[i % len(_SERIES_COLORS)],
                    label=_label(spec, i))
    ax.set_xlabel("SNR [dB]")
    ax.set_ylabel(spec.metric.upper())
    ax.grid(True, which="both", alpha=0.35)
    ax.legend(fontsize=8)


def _reqsnr_axes(spec, ax):
    rows = []
    for path in spec.inputs:
        rows.extend(read_csv(path, "reqsnr"))
    scs = sorted({numeric(r, "scs_khz") for r in rows})
    series = sorted({(r["waveform"], r["modulation"], r["ptrs"]) for r in rows})
    by_key = {
        (numeric(r, "scs_khz"), r["waveform"], r["modulation"], r["ptrs"]): r
        for r in rows
    }
    width = 0.8 / len(series)
    x0 = np.arange(len(scs))
    top = 1.0
    finite = [
        float(r["required_snr_db"]) for r in rows
        if r["required_snr_db"] != UNREACHABLE
    ]
    if finite:
        top = max(finite)
    for j, key in enumerate(series):
        xs, ys = [], []
        for i, s in enumerate(scs):
            r = by_key.get((s,) + key)
            if r is None:
                continue
            x = x0[i] + (j - (len(series) - 1) / 2) * width
            if r["required_snr_db"] == UNREACHABLE:
                # Annotated gap: no bar, an explicit marker above the group.
                ax.annotate("n/r", (x, top * 1.02), ha="center", fontsize=7,
                            color="tab:red", annotation_clip=False)
                continue
            xs.append(x)
            ys.append(float(r["required_snr_db"]))
        ax.bar(xs, ys, width=width * 0.92,
               color=_SERIES_COLORS[j % len(_SERIES_COLORS)],
               label=" / ".join(key))
    ax.set_xticks(x0)
    ax.set_xticklabels([f"{s:g}" for s in scs])
    ax.set_xlabel("subcarrier spacing [kHz]")
    ax.set_ylabel("required SNR [dB]")
    ax.grid(True, axis="y", alpha=0.35)
    ax.legend(fontsize=7)


def _linkdist_axes(spec, ax):
    rows = []
    for path in spec.inputs:
        rows.extend(read_csv(path, "linkdist"))
    groups = sorted({(r["scenario"], r["direction"]) for r in rows})
    series = sorted({r["waveform"] for r in rows})
    by_key = {(r["scenario"], r["direction"], r["waveform"]): r for r in rows}
    width = 0.8 / len(series)
    x0 = np.arange(len(groups))
    for j, wf in enumerate(series):
        xs, ys = [], []
        for i, (sc, d) in enumerate(groups):
            r = by_key.get((sc, d, wf))
            if r is None:
                continue
            xs.append(x0[i] + (j - (len(series) - 1) / 2) * width)
            ys.append(numeric(r, "distance_m"))
        ax.bar(xs, ys, width=width * 0.92,
               color=_SERIES_COLORS[j % len(_SERIES_COLORS)], label=wf)
    ax.set_xticks(x0)
    ax.set_xticklabels([f"{sc}\n{d.upper()}" for sc, d in groups], fontsize=7)
    ax.set_ylabel("link distance [m]")
    ax.grid(True, axis="y", alpha=0.35)
    ax.legend(fontsize=8)


_BUILDERS = {"sweep": _sweep_axes, "reqsnr": _reqsnr_axes, "linkdist": _linkdist_axes}


def build_figure(spec: FigureSpec):
    """Validate inputs and build the matplotlib Figure (no file output)."""
    spec.validate()
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    try:
        _BUILDERS[spec.kind](spec, ax)
    except Exception:
        plt.close(fig)
        raise
    if spec.title:
        ax.set_title(spec.title, fontsize=10)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render the figure to spec.output (SVG or PNG by extension).

    All validation happens before the file is touched, so a failing spec
    never leaves a partial file behind. SVG output is byte-deterministic:
    identical inputs produce identical files.
    """
    fig = build_figure(spec)
    try:
        fig.savefig(spec.output, metadata=_deterministic_metadata(spec.output))
    finally:
        plt.close(fig)
    return spec.output


def _deterministic_metadata(path):
    ext = os.path.splitext(path)[1].lower()
    if ext == ".svg":
        return {"Date": None}  # drop the volatile creation timestamp
    if ext == ".png":
        return {"Software": None}
    return None
