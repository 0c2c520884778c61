"""Exception types shared across the package."""

__all__ = ["NumericError", "QuantileRangeError", "SamplingError"]


class NumericError(RuntimeError):
    """A numerical routine failed to converge.

    Carries the last bracket the root solver was working/on so callers can
    report where the search got stuck.
    """

    def __init__(self, message: str, bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.bracket = bracket


class QuantileRangeError(ValueError):
    """A quantile-based construction produced a cut outside the open cube range."""


class SamplingError(RuntimeError):
    """Stratified sampling could not produce a point for some stratum.

    ``stratum`` identifies the starving stratum (0-based index), when known.
    """

    def __init__(self, message: str, stratum: int | None = None):
        super().__init__(message)
        self.stratum = stratum
