"""Exception types shared across the package."""


class OutOfRange(ValueError):
    """A scenario parameter lies outside its admissible domain."""


class InvalidCorrelationMatrix(ValueError):
    """The channel correlation matrix is not positive semi-definite."""


class DegenerateStatistics(ArithmeticError):
    """A covariance matrix is singular (or numerically so) and the
    whitening / gain computations are undefined."""


class OutsideFeasibleRegion(ArithmeticError):
    """A strong-eavesdropper correlation tuple leaves Eve's conditional
    covariance without positive definiteness."""


class NoPositiveRate(ArithmeticError):
    """The secret-key rate is non-positive for every resource split, so
    there is nothing to optimize."""


class AssumptionViolated(ValueError):
    """A result was requested outside the assumptions it was derived
    under (e.g. asymmetric eavesdropper in the high-SNR test)."""


class InvalidSample(ValueError):
    """A Monte Carlo batch contains values the estimator cannot digest."""
