"""Exception types shared across the package.

Both classes derive from ValueError so callers that only care about
"bad input" can catch a single base. The CLI and the HTTP service map
them to exit code 2 and status 400 respectively.
"""


class DomainError(ValueError):
    """A physical parameter is outside the domain of a formula (k <= 0,
    L <= 0, valley calibration below threshold, x beyond the wall, ...)."""


class ConfigError(ValueError):
    """A run configuration is unusable: inconsistent grid/layer sizes,
    packet support touching a boundary, too few widths for a convergence
    curve, and similar."""
