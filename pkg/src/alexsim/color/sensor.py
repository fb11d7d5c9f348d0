"""
Simulated color sensor and its calibration table.

The sensor reports, per color filter, the time taken to count a fixed number
of output edges. Brighter light means a higher output frequency and so a
shorter period. Readings between the near (2 cm) and far (8 cm) calibration
points are interpolated linearly.
"""

import csv
import hashlib
import io
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

NEAR_CM = 2.0
FAR_CM = 8.0

# SHA-256 of the shipped data files.
DATA_CHECKSUMS: Dict[str, str] = {
    "calibration.csv": "df0ba42f3e64d0f8087ae12febdd7a68fe69a3b9bcb5f3ddb22f223c1b86ce9c",
    "rules.csv": "3a2a4aabe127fa68857764413aea1b32118f035a455077cbbd6ca1bc0f351f42",
}


class ColorClass(str, Enum):
    BLACK = "Black"
    GREEN = "Green"
    RED = "Red"
    ORANGE = "Orange"
    BLUE = "Blue"
    PURPLE = "Purple"
    WHITE = "White"


class Channel(str, Enum):
    R = "R"
    G = "G"
    B = "B"


CHANNELS: Tuple[Channel, ...] = tuple(Channel)


class ChannelReading(BaseModel):
    """One period-like reading per color filter."""

    model_config = ConfigDict(frozen=True)

    r_raw: float = Field(gt=0.0)
    g_raw: float = Field(gt=0.0)
    b_raw: float = Field(gt=0.0)

    def raw(self, channel: Channel) -> float:
        return (self.r_raw, self.g_raw, self.b_raw)[CHANNELS.index(channel)]

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.r_raw, self.g_raw, self.b_raw


class ColorCalibration(BaseModel):
    """Near and far readings of every color."""

    model_config = ConfigDict(frozen=True)

    near: Dict[ColorClass, ChannelReading]
    far: Dict[ColorClass, ChannelReading]

    @model_validator(mode="after")
    def _complete(self) -> "ColorCalibration":
        for label, table in (("near", self.near), ("far", self.far)):
            missing = [c.value for c in ColorClass if c not in table]
            if missing:
                raise ValueError(f"{label} calibration lacks {', '.join(missing)}")
        return self

    def extremes(self, channel: Channel) -> Tuple[float, float]:
        """Smallest (brightest) and largest (darkest) raw value on a channel."""
        values = [r.raw(channel) for table in (self.near, self.far) for r in table.values()]
        return min(values), max(values)


def data_resource(filename: str) -> str:
    return (resources.files("alexsim.color") / "data" / filename).read_text(encoding="utf-8")


def data_checksum(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_calibration(text: str) -> ColorCalibration:
    """Parse ``color,far_r,far_g,far_b,near_r,near_g,near_b`` rows."""
    near: Dict[ColorClass, ChannelReading] = {}
    far: Dict[ColorClass, ChannelReading] = {}
    for row in csv.DictReader(io.StringIO(text)):
        try:
            color = ColorClass(row["color"])
            far[color] = ChannelReading(
                r_raw=float(row["far_r"]), g_raw=float(row["far_g"]), b_raw=float(row["far_b"])
            )
            near[color] = ChannelReading(
                r_raw=float(row["near_r"]), g_raw=float(row["near_g"]), b_raw=float(row["near_b"])
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"bad calibration row {row}: {e}") from e
    return ColorCalibration(near=near, far=far)


@lru_cache(maxsize=None)
def _shipped_calibration() -> ColorCalibration:
    return parse_calibration(data_resource("calibration.csv"))


def load_calibration(source: Union[str, Path, None] = None) -> ColorCalibration:
    """The shipped calibration table, or one read from CSV text or a file."""
    if source is None:
        return _shipped_calibration()
    if isinstance(source, Path):
        return parse_calibration(source.read_text(encoding="utf-8"))
    return parse_calibration(source)


def simulate_sensor(
    c: ColorClass,
    distance_cm: float,
    cal: ColorCalibration,
    noise: float = 0.0,
    seed: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> ChannelReading:
    """
    Reading of color ``c`` at ``distance_cm``, with optional multiplicative
    Gaussian noise drawn from ``rng`` (or a generator seeded with ``seed``).
    """
    if not NEAR_CM <= distance_cm <= FAR_CM:
        raise ValueError(f"distance must lie in [{NEAR_CM:g}, {FAR_CM:g}] cm, got {distance_cm}")
    if noise < 0.0:
        raise ValueError(f"noise must be nonnegative, got {noise}")
    c = ColorClass(c)
    f = (distance_cm - NEAR_CM) / (FAR_CM - NEAR_CM)
    near, far = cal.near[c].as_tuple(), cal.far[c].as_tuple()
    raw = [n + f * (d - n) for n, d in zip(near, far)]
    if noise > 0.0:
        gen = rng if rng is not None else np.random.default_rng(seed)
        raw = [max(v * (1.0 + noise * gen.standard_normal()), 1e-9) for v in raw]
    return ChannelReading(r_raw=raw[0], g_raw=raw[1], b_raw=raw[2])


def raw_to_intensity(raw: float, channel: Channel, cal: ColorCalibration) -> float:
    """
    Normalized light intensity: the reciprocal period mapped so the channel's
    darkest calibration reading is 0 and its brightest is 1, then clamped.
    """
    if raw <= 0.0:
        raise ValueError(f"raw reading must be positive, got {raw}")
    lo, hi = cal.extremes(channel)
    v = (1.0 / raw - 1.0 / hi) / (1.0 / lo - 1.0 / hi)
    return min(max(v, 0.0), 1.0)
