"""
Permanent-magnet DC motor model.

The electrical side is quasi-static (armature inductance neglected), so the
current follows the terminal and back-EMF voltages instantly. The rotor is
integrated with a fixed-step Euler rule. Gearing is folded into the torque
and back-EMF constants and all speeds are wheel speeds.
"""

import math
from typing import Dict, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

PWM_MAX = 255


class MotorParams(BaseModel):
    """Electrical and mechanical constants of one drive motor."""

    model_config = ConfigDict(frozen=True)

    R_a: float = Field(gt=0.0, description="Armature resistance (ohm)")
    K_t: float = Field(gt=0.0, description="Torque constant (N m/A)")
    K_e: float = Field(gt=0.0, description="Back-EMF constant (V s/rad)")
    J: float = Field(gt=0.0, description="Rotor plus wheel inertia (kg m^2)")
    b: float = Field(gt=0.0, description="Viscous friction (N m s/rad)")
    V_max: float = Field(gt=0.0, description="Supply voltage at full PWM (V)")
    gear_ratio: float = Field(default=1.0, gt=0.0)

    @property
    def torque_constant(self) -> float:
        """Torque constant at the wheel."""
        return self.K_t * self.gear_ratio

    @property
    def emf_constant(self) -> float:
        """Back-EMF constant at the wheel."""
        return self.K_e * self.gear_ratio

    def no_load_speed(self, V: float) -> float:
        """Steady-state wheel speed with no external load."""
        kt, ke = self.torque_constant, self.emf_constant
        return kt * V / (self.R_a * self.b + kt * ke)

    def stall_torque(self, V: float) -> float:
        return self.torque_constant * V / self.R_a

    def time_constant(self) -> float:
        """Mechanical time constant including back-EMF damping."""
        return self.J / (self.b + self.torque_constant * self.emf_constant / self.R_a)


# Desk-scale reference constants; not measured on any hardware.
MOTOR_PRESETS: Dict[str, MotorParams] = {
    "alex-ref": MotorParams(R_a=2.0, K_t=0.05, K_e=0.05, J=1e-4, b=1e-4, V_max=6.0, gear_ratio=1.0),
}


def motor_preset(name: str) -> MotorParams:
    try:
        return MOTOR_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown motor preset '{name}'; known: {sorted(MOTOR_PRESETS)}") from None


class MotorStep(NamedTuple):
    omega: float
    current: float
    torque: float


def pwm_to_voltage(pwm: int, p: MotorParams) -> float:
    if abs(pwm) > PWM_MAX:
        raise ValueError(f"pwm must lie in [-{PWM_MAX}, {PWM_MAX}], got {pwm}")
    return pwm / PWM_MAX * p.V_max


def motor_step(p: MotorParams, V: float, omega: float, T_load: float, dt: float) -> MotorStep:
    """
    Advance the rotor by one Euler step.

    Returns the new speed together with the current and torque that drove it.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    current = (V - p.emf_constant * omega) / p.R_a
    torque = p.torque_constant * current
    omega_next = omega + dt * (torque - T_load - p.b * omega) / p.J
    return MotorStep(omega_next, current, torque)


class SpeedTorqueCurve(NamedTuple):
    torque: np.ndarray
    omega: np.ndarray
    current: np.ndarray
    power: np.ndarray


def speed_torque_curve(p: MotorParams, V: float, n: int = 11) -> SpeedTorqueCurve:
    """
    Steady-state operating line at terminal voltage ``V``, from stall to the
    zero-torque speed, with mechanical output power ``T * omega``.
    """
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    omega = np.linspace(0.0, V / p.emf_constant, n)
    current = (V - p.emf_constant * omega) / p.R_a
    torque = p.torque_constant * current
    return SpeedTorqueCurve(torque, omega, current, torque * omega)


class EncoderModel(BaseModel):
    """Quadrature encoder as an accumulated shaft angle."""

    counts_per_rev: int = Field(default=360, gt=0)
    angle: float = Field(default=0.0, description="Accumulated wheel angle (rad)")


def counts_for_angle(angle: float, counts_per_rev: int) -> int:
    return math.floor(angle / (2.0 * math.pi) * counts_per_rev)


def encoder_read(e: EncoderModel) -> int:
    return counts_for_angle(e.angle, e.counts_per_rev)
