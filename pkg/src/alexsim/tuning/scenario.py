"""
Closed-loop step test used by every tuning procedure.
"""

from collections import deque
from enum import Enum

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from alexsim.control.pid import PidController, PidGains, pwm_saturate
from alexsim.plant.sim import PlantConfig, SimState, read_encoders, sim_step
from alexsim.tuning.analysis import ErrorTrace


class LoopAxis(str, Enum):
    """Which of the two decoupled loops the step exercises."""

    FORWARD = "forward"
    STEERING = "steering"


class StepScenario(BaseModel):
    """
    A setpoint step on one loop.

    The forward axis drives both wheels with the same command; the steering
    axis drives them in opposition. Either way the loop closes on the right
    encoder. Commands reach the motors ``actuation_delay`` control periods
    after they are computed.
    """

    model_config = ConfigDict(frozen=True)

    plant: PlantConfig = Field(default_factory=PlantConfig)
    axis: LoopAxis = LoopAxis.FORWARD
    setpoint: int = Field(default=150, gt=0, description="Counts")
    dt_control: float = Field(default=0.02, gt=0.0)
    dt_plant: float = Field(default=0.001, gt=0.0)
    actuation_delay: int = Field(default=1, ge=0, description="Control periods")
    duration: float = Field(default=4.0, gt=0.0)
    output_limit: int = Field(default=255, gt=0, le=255)

    @model_validator(mode="after")
    def _periods(self) -> "StepScenario":
        substeps = round(self.dt_control / self.dt_plant)
        if substeps < 1 or abs(substeps * self.dt_plant - self.dt_control) > 1e-9 * self.dt_control:
            raise ValueError(
                f"dt_control ({self.dt_control}) must be an integer multiple of "
                f"dt_plant ({self.dt_plant})"
            )
        if round(self.duration / self.dt_control) < 3:
            raise ValueError("duration must cover at least 3 control periods")
        return self

    @property
    def substeps(self) -> int:
        return round(self.dt_control / self.dt_plant)

    @property
    def periods(self) -> int:
        return round(self.duration / self.dt_control)


def run_step(scenario: StepScenario, gains: PidGains) -> ErrorTrace:
    """
    Simulate the step from rest and record the error seen at the start of
    every control period, before that period's command is applied.
    """
    cfg = scenario.plant
    rng = cfg.noise.rng() if cfg.noise.enabled else None
    controller = PidController(gains, output_limit=float(scenario.output_limit))
    pending = deque([0] * scenario.actuation_delay)
    state = SimState()
    sign_l = 1 if scenario.axis is LoopAxis.FORWARD else -1

    errors = []
    for _ in range(scenario.periods):
        _, enc_r = read_encoders(state, cfg, rng)
        error = float(scenario.setpoint - enc_r)
        errors.append(error)
        pwm = pwm_saturate(controller.update(error, scenario.dt_control), scenario.output_limit)
        pending.append(pwm)
        applied = pending.popleft()
        for _ in range(scenario.substeps):
            state = sim_step(state, sign_l * applied, applied, cfg, scenario.dt_plant, rng)

    logger.debug(
        f"step {scenario.axis.value} kp={gains.kp:g} ki={gains.ki:g} kd={gains.kd:g}: "
        f"final error {errors[-1]:g}"
    )
    return ErrorTrace(dt=scenario.dt_control, errors=tuple(errors))
