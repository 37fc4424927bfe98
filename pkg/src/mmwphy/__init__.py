"""mmwphy: link-level and link-budget toolkit for wideband mmWave PHY studies."""

from . import channel, linkbudget, numerology, phase_noise, ptrs, receiver, waveform
from .errors import ConfigError, EstimationError, LinkBudgetError

__all__ = [
    "channel",
    "linkbudget",
    "numerology",
    "phase_noise",
    "ptrs",
    "receiver",
    "waveform",
    "ConfigError",
    "EstimationError",
    "LinkBudgetError",
]

__version__ = "0.1.0"
