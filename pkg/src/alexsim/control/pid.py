"""
Discrete PID law.

The integral accumulates error with a rectangular rule and is clamped for
anti-windup; the derivative is a backward difference that reads zero on the
first update after a reset. The output is clamped to a symmetric limit and
turned into a signed PWM duty by :func:`pwm_saturate`.
"""

import math
from typing import Optional, Protocol, Tuple

from pydantic import BaseModel, ConfigDict, Field


class PidGains(BaseModel):
    """Proportional, integral and derivative gains."""

    model_config = ConfigDict(frozen=True)

    kp: float = Field(default=0.0, ge=0.0)
    ki: float = Field(default=0.0, ge=0.0)
    kd: float = Field(default=0.0, ge=0.0)


class Controller(Protocol):
    """Anything the autopilot can close a loop with."""

    def step(self, error: float, dt: float) -> Tuple[float, PidGains]:
        """Return the control signal and the gains that produced it."""
        ...

    def reset(self) -> None:
        ...


class PidController:
    """
    Stateful PID controller.

    Args:
        gains: Controller gains
        output_limit: Symmetric bound on the control signal
        integral_limit: Bound on the accumulated error; defaults to
            ``output_limit / ki`` when ``ki > 0`` and unbounded otherwise
    """

    def __init__(
        self,
        gains: PidGains,
        output_limit: float = 255.0,
        integral_limit: Optional[float] = None,
    ):
        if output_limit <= 0.0:
            raise ValueError(f"output_limit must be positive, got {output_limit}")
        self.gains = gains
        self.output_limit = output_limit
        if integral_limit is None:
            integral_limit = output_limit / gains.ki if gains.ki > 0.0 else math.inf
        self.integral_limit = integral_limit
        self.reset()

    def reset(self) -> None:
        self.integral = 0.0
        self.prev_error = 0.0
        self.first_step = True

    def update(self, error: float, dt: float, gains: Optional[PidGains] = None) -> float:
        """
        Advance one control period.

        ``gains`` overrides the stored gains for this period only; the
        integral bound is not recomputed.
        """
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        g = gains or self.gains

        self.integral += error * dt
        if self.integral > self.integral_limit:
            self.integral = self.integral_limit
        elif self.integral < -self.integral_limit:
            self.integral = -self.integral_limit

        derivative = 0.0 if self.first_step else (error - self.prev_error) / dt
        self.first_step = False
        self.prev_error = error

        u = g.kp * error + g.ki * self.integral + g.kd * derivative
        return min(max(u, -self.output_limit), self.output_limit)

    def step(self, error: float, dt: float) -> Tuple[float, PidGains]:
        return self.update(error, dt), self.gains


def pid_update(c: PidController, error: float, dt: float) -> float:
    return c.update(error, dt)


def pwm_saturate(u: float, limit: int = 255) -> int:
    """Clamp to +/-limit and round half away from zero."""
    u = min(max(u, -limit), limit)
    return int(math.copysign(math.floor(abs(u) + 0.5), u))
