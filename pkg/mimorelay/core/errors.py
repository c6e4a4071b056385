"""
Exceptions raised by the simulation core.

Validation problems are reported as data (see config.ValidationReport); the
classes here cover inputs that make a computation undefined.
"""

from typing import Optional


class MimoRelayError(Exception):
    """Base class for all mimorelay errors."""


class ConfigParseError(MimoRelayError):
    """The configuration file is not valid JSON or has wrong value types."""


class ConfigValidationError(MimoRelayError):
    """A configuration violates one or more invariants."""

    def __init__(self, report):
        self.report = report
        lines = [v.message for v in report.violations]
        super().__init__("Invalid configuration:\n  " + "\n  ".join(lines))

    def __reduce__(self):
        return (self.__class__, (self.report,))


class ZeroChannelError(MimoRelayError):
    """An estimated channel vector has zero norm, so MRC/MRT is undefined."""

    def __init__(self, pair: int, subcarrier: int, link: str):
        self.pair = pair
        self.subcarrier = subcarrier
        self.link = link
        super().__init__(
            f"Estimated {link} channel of pair {pair} on subcarrier {subcarrier} is identically zero"
        )

    def __reduce__(self):
        return (self.__class__, (self.pair, self.subcarrier, self.link))


class ZeroPowerRatioError(MimoRelayError):
    """A power (or gain) ratio in the asymptotic limit is undefined."""

    def __init__(self, pair: int, subcarrier: int, field: str):
        self.pair = pair
        self.subcarrier = subcarrier
        self.field = field
        super().__init__(
            f"{field}[{pair}][{subcarrier}] is zero while pair {pair} is active on other subcarriers"
        )

    def __reduce__(self):
        return (self.__class__, (self.pair, self.subcarrier, self.field))


class NonScalarRelayDistortionError(MimoRelayError):
    """Per-chain relay distortion was configured where a scalar is required."""


class TrialError(MimoRelayError):
    """A Monte Carlo trial failed inside a sweep."""

    def __init__(self, num_antennas: int, trial_index: int, cause: str,
                 cause_type: Optional[str] = None):
        self.num_antennas = num_antennas
        self.trial_index = trial_index
        self.cause = cause
        self.cause_type = cause_type
        super().__init__(
            f"Trial {trial_index} at N={num_antennas} failed: {cause}"
        )

    def __reduce__(self):
        return (self.__class__, (self.num_antennas, self.trial_index, self.cause, self.cause_type))
