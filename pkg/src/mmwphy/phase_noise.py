"""Parametric oscillator phase-noise PSD models and time-domain synthesis.

An oscillator is described as a sum of components (reference clock, PLL,
VCO), each with a pole/zero PSD of the form

    S_k(f) = psd0_k * prod_z (1 + (f/f_z)^a_z) / prod_p (1 + (f/f_p)^a_p)

where psd0_k is the single-sideband level at f -> 0 in dBc/Hz. The total
PSD is the linear sum over components. Levels scale with carrier frequency
as 20*log10(fc/fc_ref), i.e. +6 dB per carrier doubling.

Model files are YAML documents with `ref_carrier_hz` and a `components`
list; see data/pn_models/ for the bundled UE (CMOS, 50 mW) and BS
(GaAs, 80 mW) PLL models with 187 kHz / 112 kHz loop bandwidths.
"""

import warnings
from dataclasses import dataclass, replace

import numpy as np
import yaml

from .errors import ConfigError


@dataclass(frozen=True)
class PnComponent:
    psd0_dbchz: float
    zeros: tuple = ()  # tuples of (f_hz, alpha)
    poles: tuple = ()
    name: str = ""


@dataclass(frozen=True)
class PhaseNoiseModel:
    components: tuple
    ref_carrier_hz: float


@dataclass
class PhaseTrajectory:
    """A realization of the oscillator phase in radians at rate fs_hz."""

    phase_rad: np.ndarray
    fs_hz: float


def load_model(path) -> PhaseNoiseModel:
    """Load a phase-noise model from its YAML description."""
    with open(path) as f:
        doc = yaml.safe_load(f)
    try:
        comps = []
        for c in doc["components"]:
            zeros = tuple((float(z["f_hz"]), float(z["alpha"])) for z in c.get("zeros") or ())
            poles = tuple((float(p["f_hz"]), float(p["alpha"])) for p in c.get("poles") or ())
            comps.append(
                PnComponent(
                    psd0_dbchz=float(c["psd0_dbchz"]),
                    zeros=zeros,
                    poles=poles,
                    name=str(c.get("name", "")),
                )
            )
        model = PhaseNoiseModel(tuple(comps), float(doc["ref_carrier_hz"]))
    except (KeyError, TypeError) as e:
        raise ConfigError(f"malformed phase-noise model file {path}: {e}") from e
    for c in model.components:
        for f, _ in c.zeros + c.poles:
            if f <= 0:
                raise ConfigError(f"component {c.name!r}: corner frequency {f} must be > 0")
    return model


def psd_linear(model: PhaseNoiseModel, f_offset_hz) -> np.ndarray:
    """Total PSD in linear carrier-relative units (1/Hz) at given offsets."""
    f = np.atleast_1d(np.asarray(f_offset_hz, dtype=float))
    if np.any(f <= 0):
        raise ValueError("frequency offsets must be > 0")
    total = np.zeros_like(f)
    for c in model.components:
        s = np.full_like(f, 10.0 ** (c.psd0_dbchz / 10.0))
        for fz, az in c.zeros:
            s = s * (1.0 + (f / fz) ** az)
        for fp, ap in c.poles:
            s = s / (1.0 + (f / fp) ** ap)
        total += s
    return total


def psd_dbc_hz(model: PhaseNoiseModel, f_offset_hz):
    """Total single-sideband PSD in dBc/Hz at the given offset(s)."""
    s = psd_linear(model, f_offset_hz)
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(s)
    return out if np.ndim(f_offset_hz) else float(out[0])


def scale_to_carrier(model: PhaseNoiseModel, new_carrier_hz: float) -> PhaseNoiseModel:
    """Shift all component levels by 20*log10(new/ref) and update the reference."""
    if new_carrier_hz <= 0:
        raise ValueError("carrier frequency must be > 0")
    shift = 20.0 * np.log10(new_carrier_hz / model.ref_carrier_hz)
    comps = tuple(replace(c, psd0_dbchz=c.psd0_dbchz + shift) for c in model.components)
    return PhaseNoiseModel(comps, new_carrier_hz)


def highest_pole_hz(model: PhaseNoiseModel) -> float:
    corners = [f for c in model.components for f, _ in c.poles]
    return max(corners) if corners else 0.0


def generate(model: PhaseNoiseModel, n: int, fs_hz: float, seed) -> PhaseTrajectory:
    """Synthesize n real phase samples whose PSD follows the model.

    Frequency-domain synthesis: complex white Gaussian bins shaped by
    sqrt(S(f) * fs * n) on both sidebands (Hermitian symmetric), DC zeroed,
    inverse FFT. n must be a power of two >= 2**14 so the synthesis grid
    resolves the in-band plateau of PLL-class models.
    """
    if n < 2**14 or n & (n - 1):
        raise ValueError(f"n={n} must be a power of two >= {2**14}")
    fmax = highest_pole_hz(model)
    if fs_hz <= 2.0 * fmax:
        warnings.warn(
            f"fs={fs_hz:g} Hz does not cover twice the highest pole "
            f"({fmax:g} Hz); the synthesized PSD is band-limited",
            RuntimeWarning,
            stacklevel=2,
        )
    rng = np.random.default_rng(seed)
    f = np.arange(1, n // 2 + 1) * (fs_hz / n)
    mag = np.sqrt(psd_linear(model, f) * fs_hz * n)
    half = np.zeros(n // 2 + 1, dtype=complex)
    g = rng.standard_normal(n // 2) + 1j * rng.standard_normal(n // 2)
    half[1:-1] = mag[:-1] * g[:-1] / np.sqrt(2.0)
    half[-1] = mag[-1] * g[-1].real  # Nyquist bin is real
    phase = np.fft.irfft(half, n)
    return PhaseTrajectory(phase_rad=phase, fs_hz=fs_hz)


def apply(samples: np.ndarray, traj: PhaseTrajectory) -> np.ndarray:
    """Rotate each sample by the corresponding phase value."""
    samples = np.asarray(samples)
    if samples.shape[-1] != traj.phase_rad.shape[-1]:
        raise ValueError(
            f"length mismatch: {samples.shape[-1]} samples vs "
            f"{traj.phase_rad.shape[-1]} phase values"
        )
    return samples * np.exp(1j * traj.phase_rad)
