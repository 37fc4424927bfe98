"""Rician tapped-delay-line fading, Doppler evolution, and AWGN.

The spatial clustered-delay-line channel of the evaluation scenario is
reduced to a SISO TDL: a deterministic line-of-sight ray on the first tap
carrying K/(K+1) of the power, plus an exponential power-delay profile of
Rayleigh taps with Jakes-spectrum time evolution. Beamforming array gains
are accounted for separately in the link budget. This is the largest
deliberate simplification of the toolkit: it preserves the delay/Doppler
statistics a one-tap equalizer sees, not the spatial structure.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

SPEED_OF_LIGHT = 299_792_458.0

_N_SINUSOIDS = 16  # per-tap sum-of-sinusoids order for the Jakes spectrum


@dataclass(frozen=True)
class ChannelConfig:
    rms_delay_spread_s: float = 10e-9
    rician_k_db: float = 15.0
    n_taps: int = 8
    ue_speed_mps: float = 3.0 / 3.6  # 3 km/h
    carrier_hz: float = 60e9

    def validate(self):
        if self.n_taps < 1:
            raise ValueError("n_taps must be >= 1")
        if self.rms_delay_spread_s < 0 or self.ue_speed_mps < 0:
            raise ValueError("delay spread and speed must be non-negative")


@dataclass
class ChannelRealization:
    """One seeded channel draw: tap delays plus analytic gain evolution.

    Tap gains at arbitrary sample times are reconstructed from the stored
    sum-of-sinusoids parameters, so a realization covers any sample span.
    """

    fs_hz: float
    delays_samples: np.ndarray  # int, ascending, first is 0
    nlos_powers: np.ndarray  # per-tap diffuse power, sums to K/(K+1) complement
    los_power: float
    los_doppler_hz: float
    los_phase0: float
    max_doppler_hz: float
    sos_doppler_hz: np.ndarray  # (n_taps, M) per-sinusoid Doppler shifts
    sos_phase: np.ndarray  # (n_taps, M)

    def tap_gains(self, t_samples) -> np.ndarray:
        """Complex tap gains, shape (n_taps, len(t_samples))."""
        t = np.asarray(t_samples, dtype=float) / self.fs_hz
        gains = np.zeros((len(self.delays_samples), t.size), dtype=complex)
        diffuse = np.sqrt(self.nlos_powers / self.sos_doppler_hz.shape[1])
        for i in range(len(self.delays_samples)):
            if self.nlos_powers[i] > 0:
                ph = 2j * np.pi * self.sos_doppler_hz[i][:, None] * t[None, :]
                gains[i] = diffuse[i] * np.exp(ph + 1j * self.sos_phase[i][:, None]).sum(axis=0)
        if self.los_power > 0:
            gains[0] += np.sqrt(self.los_power) * np.exp(
                1j * (2 * np.pi * self.los_doppler_hz * t + self.los_phase0)
            )
        return gains


def max_doppler(speed_mps: float, carrier_hz: float) -> float:
    """Maximum Doppler shift v*fc/c in Hz."""
    if speed_mps < 0 or carrier_hz <= 0:
        raise ValueError("speed must be >= 0 and carrier > 0")
    return speed_mps * carrier_hz / SPEED_OF_LIGHT


def _exp_powers(delays_s, sigma, diffuse_total):
    """Exponential diffuse tap powers over the given delays (first is 0)."""
    p = np.exp(-np.asarray(delays_s) / sigma)
    return p / p.sum() * diffuse_total


def _mixture_rms_ds(delays_s, sigma, diffuse_total, los_power):
    """RMS delay spread of LOS-at-zero plus exponential diffuse taps."""
    p = _exp_powers(delays_s, sigma, diffuse_total)
    p = p.copy()
    p[0] += los_power
    tau = np.asarray(delays_s)
    mean = (p * tau).sum() / p.sum()
    m2 = (p * tau**2).sum() / p.sum()
    return np.sqrt(max(m2 - mean**2, 0.0))


def build_tdl(cfg: ChannelConfig, fs_hz: float, seed) -> ChannelRealization:
    """Draw a TDL realization with the configured delay/Doppler statistics.

    The diffuse taps follow an exponential profile whose decay is solved
    numerically so that the total PDP (including the LOS ray) matches the
    configured RMS delay spread after quantizing delays to the sample grid.
    """
    cfg.validate()
    rng = np.random.default_rng(seed)
    k_lin = 10.0 ** (cfg.rician_k_db / 10.0)
    los_power = k_lin / (k_lin + 1.0)
    diffuse_total = 1.0 / (k_lin + 1.0)
    fd = max_doppler(cfg.ue_speed_mps, cfg.carrier_hz)

    target = cfg.rms_delay_spread_s
    # Continuous-profile decay for the LOS + exponential mixture:
    # DS = sigma * sqrt(w * (2 - w)), w = diffuse fraction.
    w = diffuse_total
    sigma0 = target / np.sqrt(w * (2.0 - w)) if (target > 0 and w > 0) else 0.0

    if cfg.n_taps == 1 or target == 0.0 or w < 1e-9:
        delays = np.array([0])
        powers = np.array([diffuse_total])
    else:
        span = 4.0 * sigma0
        cont = np.linspace(0.0, span, cfg.n_taps)
        delays = np.unique(np.round(cont * fs_hz).astype(int))
        if delays.size < 2:
            warnings.warn(
                f"delay spread {target:g} s unresolvable at fs={fs_hz:g} Hz; "
                "falling back to a flat (single-tap) channel",
                RuntimeWarning,
                stacklevel=2,
            )
            delays = np.array([0])
            powers = np.array([diffuse_total])
        else:
            delays_s = delays / fs_hz

            def err(sig):
                return _mixture_rms_ds(delays_s, sig, diffuse_total, los_power) - target

            sigma = brentq(err, target / 100.0, target * 1e3)
            powers = _exp_powers(delays_s, sigma, diffuse_total)

    n_taps = delays.size
    gains_fd = fd * np.cos(rng.uniform(0.0, 2.0 * np.pi, (n_taps, _N_SINUSOIDS)))
    phases = rng.uniform(0.0, 2.0 * np.pi, (n_taps, _N_SINUSOIDS))
    los_doppler = fd * np.cos(rng.uniform(0.0, 2.0 * np.pi))
    los_phase0 = rng.uniform(0.0, 2.0 * np.pi)
    return ChannelRealization(
        fs_hz=fs_hz,
        delays_samples=delays,
        nlos_powers=powers,
        los_power=los_power,
        los_doppler_hz=los_doppler,
        los_phase0=los_phase0,
        max_doppler_hz=fd,
        sos_doppler_hz=gains_fd,
        sos_phase=phases,
    )


def rms_delay_spread(real: ChannelRealization) -> float:
    """Average-PDP RMS delay spread of a realization, in seconds."""
    tau = real.delays_samples / real.fs_hz
    p = real.nlos_powers.copy()
    p[0] += real.los_power
    mean = (p * tau).sum() / p.sum()
    m2 = (p * tau**2).sum() / p.sum()
    return float(np.sqrt(max(m2 - mean**2, 0.0)))


def propagate(samples: np.ndarray, real: ChannelRealization) -> np.ndarray:
    """Time-varying FIR convolution; output has the input's length."""
    x = np.asarray(samples).ravel()
    t = np.arange(x.size)
    gains = real.tap_gains(t)
    y = np.zeros_like(x, dtype=complex)
    for i, d in enumerate(real.delays_samples):
        if d == 0:
            y += gains[i] * x
        elif d < x.size:
            y[d:] += gains[i, d:] * x[:-d]
    return y


def freq_response(real: ChannelRealization, subcarrier_offsets: np.ndarray,
                  fft_size: int, t_samples) -> np.ndarray:
    """True channel transfer function at signed subcarrier offsets and times.

    Returns shape (len(subcarrier_offsets), len(t_samples)); used for genie
    channel knowledge at the receiver.
    """
    t = np.atleast_1d(np.asarray(t_samples, dtype=float))
    gains = real.tap_gains(t)  # (n_taps, nt)
    phase = np.exp(
        -2j
        * np.pi
        * np.outer(np.asarray(subcarrier_offsets), real.delays_samples)
        / fft_size
    )  # (n_sc, n_taps)
    return phase @ gains


def awgn(samples: np.ndarray, snr_db: float, signal_power_ref: float | None = None,
         seed=None) -> np.ndarray:
    """Add circular complex Gaussian noise at the SNR implied variance.

    `signal_power_ref` fixes the signal-power reference; when omitted the
    measured mean |x|^2 is used. snr_db=inf returns the input unchanged.
    """
    x = np.asarray(samples)
    if np.isinf(snr_db) and snr_db > 0:
        return x.copy()
    ref = float(np.mean(np.abs(x) ** 2)) if signal_power_ref is None else signal_power_ref
    var = ref / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
    return x + np.sqrt(var / 2.0) * noise
