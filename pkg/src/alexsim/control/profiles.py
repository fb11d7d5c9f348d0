"""
Named controller profiles: one gain set per motion axis.
"""

from typing import Dict

from pydantic import BaseModel, ConfigDict

from alexsim.control.pid import PidGains


class ControllerProfile(BaseModel):
    """Forward and steering gains of one robot."""

    model_config = ConfigDict(frozen=True)

    name: str
    forward: PidGains
    steering: PidGains


PROFILES: Dict[str, ControllerProfile] = {
    # Tuned with the four-step method on the "alex-ref" plant.
    "alex-ref": ControllerProfile(
        name="alex-ref",
        forward=PidGains(kp=0.685, ki=0.0001, kd=0.032),
        steering=PidGains(kp=0.685, ki=0.0, kd=0.032),
    ),
    # Gains reported for the physical robot; they limit-cycle on "alex-ref".
    "field-robot": ControllerProfile(
        name="field-robot",
        forward=PidGains(kp=8.0, ki=0.001, kd=1.0),
        steering=PidGains(kp=20.0, ki=0.0, kd=1.35),
    ),
}


def controller_profile(name: str) -> ControllerProfile:
    try:
        return PROFILES[name]
    except KeyError:
        known = sorted(PROFILES)
        raise ValueError(f"unknown controller profile '{name}'; known: {known}") from None
