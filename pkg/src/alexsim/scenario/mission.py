"""
Closed-loop missions: the autopilot flying a list of setpoint legs over the
simulated plant.
"""

import math
from collections import deque
from enum import Enum
from typing import Callable, List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, Field

from alexsim.control.autopilot import Autopilot, AutopilotPhase
from alexsim.control.fuzzy_pid import FuzzyPidController
from alexsim.control.pid import Controller, PidController
from alexsim.errors import ConfigError
from alexsim.kinematics import Pose, normalize_angle
from alexsim.plant.sim import SimState, read_encoders, sim_step
from alexsim.scenario.config import ControllerKind, ScenarioConfig
from alexsim.scenario.trace import TraceRow


class MissionStatus(str, Enum):
    COMPLETED = "completed"
    DISCONNECTED = "disconnected"
    TIMEOUT = "timeout"


class MissionResult(BaseModel):
    """Outcome of one mission run."""

    status: MissionStatus
    time: float = Field(description="Time of completion, disconnect or timeout (s)")
    final_pose: Pose
    expected_pose: Pose
    position_error: float
    heading_error: float
    max_discrepancy: int
    legs_completed: int
    rows: List[TraceRow] = Field(default_factory=list, repr=False)

    @property
    def succeeded(self) -> bool:
        return self.status is MissionStatus.COMPLETED


def expected_pose(config: ScenarioConfig) -> Pose:
    """Pose reached by flying every leg exactly."""
    g = config.plant.geometry
    x = y = theta = 0.0
    for leg in config.legs:
        sp = config.setpoints.get(leg)
        theta = normalize_angle(theta + sp.heading)
        d = sp.counts / config.plant.counts_per_rev * 2.0 * math.pi * g.r_w
        x += d * math.cos(theta)
        y += d * math.sin(theta)
    return Pose(x, y, theta)


def controller_factories(
    config: ScenarioConfig, kind: ControllerKind
) -> Tuple[Callable[[], Controller], Callable[[], Controller]]:
    """Translation and rotation controller factories for the autopilot."""
    limit = float(config.autopilot.output_limit)

    def steering() -> Controller:
        return PidController(config.steering, output_limit=limit)

    if kind is ControllerKind.FUZZY_PID:

        def forward() -> Controller:
            return FuzzyPidController(
                config.forward, config.scales, k_e=config.k_e, k_ec=config.k_ec, output_limit=limit
            )

    else:

        def forward() -> Controller:
            return PidController(config.forward, output_limit=limit)

    return forward, steering


def run_mission(
    config: ScenarioConfig, controller: Optional[ControllerKind] = None
) -> MissionResult:
    """
    Fly the scenario's legs in order.

    The loop reads the encoders, advances the autopilot one control period,
    queues the command behind the actuation delay and steps the plant until
    the next period. ``controller`` overrides the scenario's controller kind
    for the translation loops.
    """
    if not config.legs:
        raise ConfigError("mission has no legs")
    kind = ControllerKind(controller) if controller is not None else config.controller
    cfg = config.plant
    dt = config.dt_control
    forward, steering = controller_factories(config, kind)
    pilot = Autopilot(cfg.geometry, cfg.counts_per_rev, forward, steering, config.autopilot)
    rng = cfg.noise.rng() if cfg.noise.enabled else None

    pending = deque([(0, 0)] * config.actuation_delay)
    state = SimState()
    rows: List[TraceRow] = []
    next_leg = 0
    max_discrepancy = 0
    status = MissionStatus.TIMEOUT
    end_time = config.periods * dt

    for k in range(config.periods):
        t = k * dt
        enc_l, enc_r = read_encoders(state, cfg, rng)
        if pilot.state.phase is AutopilotPhase.IDLE:
            pilot.engage(config.legs[next_leg], config.setpoints, enc_l, enc_r)
            next_leg += 1
        out = pilot.step(enc_l, enc_r, dt)
        max_discrepancy = max(max_discrepancy, pilot.state.max_discrepancy)

        pending.append((out.pwm_l, out.pwm_r))
        pwm_l, pwm_r = pending.popleft()
        rows.append(TraceRow.capture(t, state, cfg, enc_l, enc_r, pwm_l, pwm_r, out, pilot.state))

        phase = pilot.state.phase
        if phase is AutopilotPhase.DISCONNECTED:
            status, end_time = MissionStatus.DISCONNECTED, t
            break
        if phase is AutopilotPhase.IDLE and next_leg == len(config.legs):
            status, end_time = MissionStatus.COMPLETED, t
            break
        for _ in range(config.substeps):
            state = sim_step(state, pwm_l, pwm_r, cfg, config.dt_plant, rng)

    legs_done = next_leg if status is MissionStatus.COMPLETED else max(0, next_leg - 1)
    target = expected_pose(config)
    pose = state.pose
    result = MissionResult(
        status=status,
        time=end_time,
        final_pose=pose,
        expected_pose=target,
        position_error=math.hypot(pose.x - target.x, pose.y - target.y),
        heading_error=abs(normalize_angle(pose.theta - target.theta)),
        max_discrepancy=max_discrepancy,
        legs_completed=legs_done,
        rows=rows,
    )
    log = logger.warning if status is MissionStatus.DISCONNECTED else logger.info
    log(f"{config.name} ({kind.value}): {status.value} at {end_time:.2f}s")
    return result
