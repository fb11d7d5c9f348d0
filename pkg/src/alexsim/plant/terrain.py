"""
Terrain slope profiles and the gravity load they put on the wheels.
"""

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from alexsim.kinematics import ChassisGeometry

GRAVITY = 9.81


class TerrainProfile(BaseModel):
    """
    Piecewise-linear slope angle (rad) against distance traveled (m).

    Before the first knot the first slope holds; beyond the last knot the
    ground is flat. An empty profile is flat everywhere.
    """

    model_config = ConfigDict(frozen=True)

    knots: Tuple[Tuple[float, float], ...] = Field(default=())

    @model_validator(mode="after")
    def _valid(self) -> "TerrainProfile":
        s_prev = -math.inf
        for s, slope in self.knots:
            if s < 0.0:
                raise ValueError(f"knot distance must be >= 0, got {s}")
            if s < s_prev:
                raise ValueError("knot distances must be nondecreasing")
            if not abs(slope) < math.pi / 2:
                raise ValueError(f"slope magnitude must be below 90 degrees, got {slope} rad")
            s_prev = s
        return self

    @property
    def flat(self) -> bool:
        return all(slope == 0.0 for _, slope in self.knots)

    def slope(self, s: float) -> float:
        if not self.knots:
            return 0.0
        xs = [k[0] for k in self.knots]
        ys = [k[1] for k in self.knots]
        return float(np.interp(s, xs, ys, left=ys[0], right=0.0))


FLAT = TerrainProfile()


class WheelTerrain(BaseModel):
    """Slope seen by each wheel; a one-sided hill loads one wheel only."""

    model_config = ConfigDict(frozen=True)

    left: TerrainProfile = FLAT
    right: TerrainProfile = FLAT

    @classmethod
    def both(cls, profile: TerrainProfile) -> "WheelTerrain":
        return cls(left=profile, right=profile)


def slope_load_torque(t: TerrainProfile, s: float, mass: float, g: ChassisGeometry) -> float:
    """
    Gravity torque opposing one wheel at distance ``s``; the robot weight is
    shared equally by the two wheels. Negative downhill.
    """
    if mass <= 0.0:
        raise ValueError(f"mass must be positive, got {mass}")
    return mass * GRAVITY * math.sin(t.slope(s)) * g.r_w / 2.0
