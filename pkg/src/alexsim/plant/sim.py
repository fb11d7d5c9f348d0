"""
Whole-robot plant: two motors, encoders, terrain and pose.

:func:`sim_step` advances the plant by one fixed mechanical step. Each
wheel's motor is loaded by the slope under that wheel, rim speeds go
through the forward motion equations and the pose is integrated along the
resulting arc.
"""

from typing import NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from alexsim.kinematics import (
    BodyTwist,
    ChassisGeometry,
    Pose,
    WheelSpeeds,
    forward_kinematics,
    integrate_pose,
    wheel_rim_speed,
)
from alexsim.plant.motor import (
    MotorParams,
    counts_for_angle,
    motor_preset,
    motor_step,
    pwm_to_voltage,
)
from alexsim.plant.terrain import WheelTerrain, slope_load_torque


class NoiseModel(BaseModel):
    """Multiplicative Gaussian noise on encoder reads and slope loads."""

    model_config = ConfigDict(frozen=True)

    encoder: float = Field(default=0.0, ge=0.0, description="Relative stddev of encoder reads")
    load: float = Field(default=0.0, ge=0.0, description="Relative stddev of load torque")
    seed: int = Field(default=0)

    @property
    def enabled(self) -> bool:
        return self.encoder > 0.0 or self.load > 0.0

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


class PlantConfig(BaseModel):
    """Everything the plant needs besides its state."""

    model_config = ConfigDict(frozen=True)

    motor: MotorParams = Field(default_factory=lambda: motor_preset("alex-ref"))
    geometry: ChassisGeometry = Field(default_factory=ChassisGeometry)
    terrain: WheelTerrain = Field(default_factory=WheelTerrain)
    mass: float = Field(default=2.0, gt=0.0)
    counts_per_rev: int = Field(default=360, gt=0)
    noise: NoiseModel = Field(default_factory=NoiseModel)


class SimState(NamedTuple):
    """Complete plant state after a step."""

    pose: Pose = Pose()
    omega_l: float = 0.0
    omega_r: float = 0.0
    angle_l: float = 0.0
    angle_r: float = 0.0
    enc_l: int = 0
    enc_r: int = 0
    distance: float = 0.0
    time: float = 0.0
    twist: BodyTwist = BodyTwist()
    torque_l: float = 0.0
    torque_r: float = 0.0
    slope_l: float = 0.0
    slope_r: float = 0.0

    def wheel_speeds(self, g: ChassisGeometry) -> WheelSpeeds:
        return WheelSpeeds(
            wheel_rim_speed(self.omega_l, g.r_w), wheel_rim_speed(self.omega_r, g.r_w)
        )

    @property
    def power_l(self) -> float:
        return self.torque_l * self.omega_l

    @property
    def power_r(self) -> float:
        return self.torque_r * self.omega_r


def sim_step(
    s: SimState,
    pwm_l: int,
    pwm_r: int,
    cfg: PlantConfig,
    dt: float,
    rng: Optional[np.random.Generator] = None,
) -> SimState:
    """
    Advance the plant by ``dt`` with constant PWM on both motors.

    ``rng`` is only drawn from when load noise is configured.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    g = cfg.geometry
    V_l = pwm_to_voltage(pwm_l, cfg.motor)
    V_r = pwm_to_voltage(pwm_r, cfg.motor)

    slope_l = cfg.terrain.left.slope(s.distance)
    slope_r = cfg.terrain.right.slope(s.distance)
    load_l = slope_load_torque(cfg.terrain.left, s.distance, cfg.mass, g)
    load_r = slope_load_torque(cfg.terrain.right, s.distance, cfg.mass, g)
    if rng is not None and cfg.noise.load > 0.0:
        load_l *= 1.0 + cfg.noise.load * rng.standard_normal()
        load_r *= 1.0 + cfg.noise.load * rng.standard_normal()

    left = motor_step(cfg.motor, V_l, s.omega_l, load_l, dt)
    right = motor_step(cfg.motor, V_r, s.omega_r, load_r, dt)
    angle_l = s.angle_l + left.omega * dt
    angle_r = s.angle_r + right.omega * dt

    wheels = WheelSpeeds(wheel_rim_speed(left.omega, g.r_w), wheel_rim_speed(right.omega, g.r_w))
    twist = forward_kinematics(wheels, g)
    return SimState(
        pose=integrate_pose(s.pose, twist, dt),
        omega_l=left.omega,
        omega_r=right.omega,
        angle_l=angle_l,
        angle_r=angle_r,
        enc_l=counts_for_angle(angle_l, cfg.counts_per_rev),
        enc_r=counts_for_angle(angle_r, cfg.counts_per_rev),
        distance=(angle_l + angle_r) / 2.0 * g.r_w,
        time=s.time + dt,
        twist=twist,
        torque_l=left.torque,
        torque_r=right.torque,
        slope_l=slope_l,
        slope_r=slope_r,
    )


def read_encoders(
    s: SimState, cfg: PlantConfig, rng: Optional[np.random.Generator] = None
) -> Tuple[int, int]:
    """Encoder counts as the controller sees them, with optional read noise."""
    if rng is None or cfg.noise.encoder <= 0.0:
        return s.enc_l, s.enc_r
    scale_l = 1.0 + cfg.noise.encoder * rng.standard_normal()
    scale_r = 1.0 + cfg.noise.encoder * rng.standard_normal()
    return (
        counts_for_angle(s.angle_l * scale_l, cfg.counts_per_rev),
        counts_for_angle(s.angle_r * scale_r, cfg.counts_per_rev),
    )
