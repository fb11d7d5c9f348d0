"""
Exception types raised by the simulator.

Validation problems derive from ``ValueError`` and search failures from
``RuntimeError`` so callers can keep catching the standard types.
"""

from typing import Optional


class ConfigError(ValueError):
    """A scenario file or configuration value is invalid."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NoRuleFiredError(ValueError):
    """Defuzzification was asked to reduce an empty fuzzy set."""

    def __init__(self) -> None:
        super().__init__("no rule fired")


class NoUltimateGainError(RuntimeError):
    """The proportional sweep ended without a sustained oscillation."""

    def __init__(self, kp_max: float):
        self.kp_max = kp_max
        super().__init__(f"no ultimate gain found up to kp={kp_max:g}")


class CalibrationError(ValueError):
    """Membership functions cannot be fitted to the calibration data."""


class UnrecognizedColorError(ValueError):
    """Every color rule has zero activation for a reading."""

    def __init__(self) -> None:
        super().__init__("unrecognized color")
