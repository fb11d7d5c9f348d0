"""
Setpoint autopilot with an encoder watchdog.

A leg toward a stored setpoint first turns in place to the setpoint heading
and then drives straight for the stored number of encoder counts. While
turning, one controller closes the loop on the right encoder and the left
wheel gets the mirrored command; while driving, each wheel closes its own
loop. References ramp up from zero at a fixed turn rate or cruise speed.

The watchdog compares the progress of the two encoders every period. The
wheels should move by opposite amounts while turning and by equal amounts
while driving; a discrepancy beyond the limit halts the robot in the
absorbing ``DISCONNECTED`` phase until :meth:`Autopilot.reset`.
"""

import math
from enum import Enum
from typing import Callable, Dict, NamedTuple, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator

from alexsim.control.commands import forward_command, steering_command
from alexsim.control.pid import Controller, PidGains, pwm_saturate
from alexsim.kinematics import ChassisGeometry


class SetpointId(str, Enum):
    """The eight stored setpoints around the robot."""

    O_LF = "O_LF"
    O_L = "O_L"
    O_LB = "O_LB"
    O_F = "O_F"
    O_B = "O_B"
    O_RF = "O_RF"
    O_R = "O_R"
    O_RB = "O_RB"


DEFAULT_HEADINGS: Dict[SetpointId, float] = {
    SetpointId.O_LF: math.pi / 4,
    SetpointId.O_L: math.pi / 2,
    SetpointId.O_LB: 3 * math.pi / 4,
    SetpointId.O_F: 0.0,
    SetpointId.O_B: math.pi,
    SetpointId.O_RF: -math.pi / 4,
    SetpointId.O_R: -math.pi / 2,
    SetpointId.O_RB: -3 * math.pi / 4,
}


class Setpoint(BaseModel):
    """Distance in encoder counts and heading relative to the current one."""

    model_config = ConfigDict(frozen=True)

    counts: int = Field(gt=0)
    heading: float = Field(default=0.0, description="Radians, in (-pi, pi]")

    @field_validator("heading")
    @classmethod
    def _heading_range(cls, v: float) -> float:
        if not -math.pi < v <= math.pi:
            raise ValueError(f"heading must lie in (-pi, pi], got {v}")
        return v


class SetpointTable(BaseModel):
    """Setpoints stored by id."""

    model_config = ConfigDict(frozen=True)

    entries: Dict[SetpointId, Setpoint]

    def get(self, sid: SetpointId) -> Setpoint:
        try:
            return self.entries[SetpointId(sid)]
        except (KeyError, ValueError):
            raise ValueError(f"unknown setpoint '{sid}'") from None


def default_setpoint_table(counts: int = 1910) -> SetpointTable:
    """All eight setpoints at one distance and their nominal headings."""
    return SetpointTable(
        entries={sid: Setpoint(counts=counts, heading=h) for sid, h in DEFAULT_HEADINGS.items()}
    )


class AutopilotPhase(str, Enum):
    IDLE = "idle"
    ROTATING = "rotating"
    TRANSLATING = "translating"
    DISCONNECTED = "disconnected"


class AutopilotConfig(BaseModel):
    """Watchdog, completion and reference-ramp settings."""

    model_config = ConfigDict(frozen=True)

    watchdog_limit: int = Field(default=50, gt=0, description="Counts")
    tolerance: int = Field(default=5, ge=0, description="Counts")
    settle_periods: int = Field(default=5, gt=0)
    cruise_speed: float = Field(default=0.2, gt=0.0, description="m/s")
    turn_rate: float = Field(default=1.0, gt=0.0, description="rad/s")
    output_limit: int = Field(default=255, gt=0)


class AutopilotState(BaseModel):
    """Phase and progress of the current leg."""

    phase: AutopilotPhase = AutopilotPhase.IDLE
    target: Optional[SetpointId] = None
    sign: int = 1
    heading_counts: int = 0
    distance_counts: int = 0
    start_l: int = 0
    start_r: int = 0
    leg_period: int = 0
    in_band: int = 0
    max_discrepancy: int = 0


class AutopilotOutput(NamedTuple):
    pwm_l: int
    pwm_r: int
    gains_l: PidGains
    gains_r: PidGains


_IDLE_GAINS = PidGains()


class Autopilot:
    """
    Drives legs toward stored setpoints.

    Args:
        geometry: Chassis geometry used to convert headings into counts
        counts_per_rev: Encoder resolution
        forward: Factory for one translation controller; called per wheel
        steering: Factory for the rotation controller
        config: Watchdog, tolerance and ramp settings
    """

    def __init__(
        self,
        geometry: ChassisGeometry,
        counts_per_rev: int,
        forward: Callable[[], Controller],
        steering: Callable[[], Controller],
        config: Optional[AutopilotConfig] = None,
    ):
        self.geometry = geometry
        self.counts_per_rev = counts_per_rev
        self.config = config or AutopilotConfig()
        self._make_forward = forward
        self._make_steering = steering
        self.state = AutopilotState()
        self._left: Optional[Controller] = None
        self._right: Optional[Controller] = None
        self._steer: Optional[Controller] = None

        counts_per_meter = counts_per_rev / (2.0 * math.pi * geometry.r_w)
        # Reference ramp slopes in counts per second.
        self.cruise_counts_rate = forward_command(self.config.cruise_speed).v_r * counts_per_meter
        self.turn_counts_rate = (
            steering_command(self.config.turn_rate, geometry).v_r * counts_per_meter
        )

    def heading_counts(self, heading: float) -> int:
        """Wheel counts needed to turn in place by ``heading`` radians."""
        arc = abs(heading) * self.geometry.d_w / 2.0
        return round(arc / (2.0 * math.pi * self.geometry.r_w) * self.counts_per_rev)

    def reset(self) -> None:
        self.state = AutopilotState()

    def engage(self, target: SetpointId, table: SetpointTable, enc_l: int, enc_r: int) -> None:
        """Start a leg toward ``target`` from the current encoder counts."""
        if self.state.phase is AutopilotPhase.DISCONNECTED:
            raise RuntimeError("autopilot is disconnected; reset it first")
        setpoint = table.get(target)
        s = self.state
        s.target = SetpointId(target)
        s.heading_counts = self.heading_counts(setpoint.heading)
        s.distance_counts = setpoint.counts
        s.sign = 1 if setpoint.heading >= 0.0 else -1
        s.max_discrepancy = 0
        if s.heading_counts > 0:
            self._begin(AutopilotPhase.ROTATING, enc_l, enc_r)
        else:
            self._begin(AutopilotPhase.TRANSLATING, enc_l, enc_r)

    def _begin(self, phase: AutopilotPhase, enc_l: int, enc_r: int) -> None:
        s = self.state
        logger.debug(f"{s.target.value if s.target else '-'}: {s.phase.value} -> {phase.value}")
        s.phase = phase
        s.start_l, s.start_r = enc_l, enc_r
        s.leg_period = 0
        s.in_band = 0
        if phase is AutopilotPhase.ROTATING:
            self._steer = self._make_steering()
        elif phase is AutopilotPhase.TRANSLATING:
            self._left = self._make_forward()
            self._right = self._make_forward()

    def _halt(self, phase: AutopilotPhase) -> AutopilotOutput:
        self.state.phase = phase
        return AutopilotOutput(0, 0, _IDLE_GAINS, _IDLE_GAINS)

    def _trip(self, discrepancy: int) -> AutopilotOutput:
        logger.warning(
            f"watchdog: encoder discrepancy {discrepancy} exceeds {self.config.watchdog_limit}"
        )
        return self._halt(AutopilotPhase.DISCONNECTED)

    def _settled(self, *remaining: int) -> bool:
        s = self.state
        if all(abs(r) <= self.config.tolerance for r in remaining):
            s.in_band += 1
        else:
            s.in_band = 0
        return s.in_band >= self.config.settle_periods

    def step(self, enc_l: int, enc_r: int, dt: float) -> AutopilotOutput:
        """Advance one control period from the latest encoder counts."""
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        s = self.state
        if s.phase in (AutopilotPhase.IDLE, AutopilotPhase.DISCONNECTED):
            return AutopilotOutput(0, 0, _IDLE_GAINS, _IDLE_GAINS)

        prog_l = enc_l - s.start_l
        prog_r = enc_r - s.start_r
        limit = self.config.output_limit

        if s.phase is AutopilotPhase.ROTATING:
            discrepancy = abs(prog_l + prog_r)
            s.max_discrepancy = max(s.max_discrepancy, discrepancy)
            if discrepancy > self.config.watchdog_limit:
                return self._trip(discrepancy)
            if self._settled(s.heading_counts - s.sign * prog_r):
                self._begin(AutopilotPhase.TRANSLATING, enc_l, enc_r)
                return AutopilotOutput(0, 0, _IDLE_GAINS, _IDLE_GAINS)
            ref = min(float(s.heading_counts), self.turn_counts_rate * s.leg_period * dt)
            s.leg_period += 1
            assert self._steer is not None
            u, gains = self._steer.step(ref - s.sign * prog_r, dt)
            pwm = pwm_saturate(u, limit)
            return AutopilotOutput(-s.sign * pwm, s.sign * pwm, gains, gains)

        discrepancy = abs(prog_l - prog_r)
        s.max_discrepancy = max(s.max_discrepancy, discrepancy)
        if discrepancy > self.config.watchdog_limit:
            return self._trip(discrepancy)
        if self._settled(s.distance_counts - prog_l, s.distance_counts - prog_r):
            logger.debug(f"{s.target.value if s.target else '-'}: leg complete")
            return self._halt(AutopilotPhase.IDLE)
        ref = min(float(s.distance_counts), self.cruise_counts_rate * s.leg_period * dt)
        s.leg_period += 1
        assert self._left is not None and self._right is not None
        u_l, gains_l = self._left.step(ref - prog_l, dt)
        u_r, gains_r = self._right.step(ref - prog_r, dt)
        return AutopilotOutput(pwm_saturate(u_l, limit), pwm_saturate(u_r, limit), gains_l, gains_r)


def autopilot_step(
    pilot: Autopilot,
    enc_l: int,
    enc_r: int,
    target: SetpointId,
    table: SetpointTable,
    dt: float,
) -> Tuple[Tuple[int, int], AutopilotState]:
    """
    Functional entry point: engage ``target`` if the pilot is idle on another
    target, then advance one period.
    """
    table.get(target)
    if pilot.state.phase is AutopilotPhase.IDLE and pilot.state.target != target:
        pilot.engage(target, table, enc_l, enc_r)
    out = pilot.step(enc_l, enc_r, dt)
    return (out.pwm_l, out.pwm_r), pilot.state
