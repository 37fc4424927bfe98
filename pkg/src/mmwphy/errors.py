"""Shared exception types."""


class ConfigError(ValueError):
    """A configuration value violates a documented bound or schema."""


class LinkBudgetError(RuntimeError):
    """A link budget cannot be closed under the given scenario."""


class EstimationError(RuntimeError):
    """An estimator received an unusable (e.g. rank-deficient) problem."""
