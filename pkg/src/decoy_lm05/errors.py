"""Exception types raised by the estimators and the command-line front end."""


class DecoyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidIntensityError(DecoyError, ValueError):
    """An intensity combination makes a bound's denominator vanish or flip sign."""


class DegenerateChannelError(DecoyError, ArithmeticError):
    """A yield is exactly zero, so the matching error rate is undefined."""


class DegenerateBoundError(DecoyError, ArithmeticError):
    """An error upper bound was requested for a yield/gain lower bound of zero.

    The key-rate layer treats the corresponding contribution as zero.
    """


class NoPositiveRateError(DecoyError):
    """The optimized key rate is not positive at zero distance."""


class ConfigError(DecoyError, ValueError):
    """Invalid run configuration (bad key, bad value or violated invariant)."""
