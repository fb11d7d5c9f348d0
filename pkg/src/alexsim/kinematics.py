"""
Differential-drive kinematics.

Frames, the rolling/sliding wheel constraints, forward and inverse motion
equations, instantaneous-center geometry and pose integration. Angles are
radians throughout; headings are kept in (-pi, pi].

Small kinematic values (poses, twists, wheel speeds) are immutable named
tuples because the plant creates several of them per millisecond step.
Geometry and mounting constants are validated pydantic models.
"""

import math
from typing import NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

# Below this yaw rate motion is treated as a straight line.
STRAIGHT_EPSILON = 1e-9


class Pose(NamedTuple):
    """Robot pose in the global frame."""

    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0


class WorldVelocity(NamedTuple):
    """Velocity vector (dx, dy, dtheta), in whichever frame the caller says."""

    dx: float = 0.0
    dy: float = 0.0
    dtheta: float = 0.0


class BodyTwist(NamedTuple):
    """Spin-center linear velocity and yaw rate."""

    v_c: float = 0.0
    w: float = 0.0


class WheelSpeeds(NamedTuple):
    """Signed rim speeds of the left and right drive wheels (m/s)."""

    v_l: float = 0.0
    v_r: float = 0.0


class ChassisGeometry(BaseModel):
    """Wheel track and radius of the chassis."""

    model_config = ConfigDict(frozen=True)

    d_w: float = Field(default=0.2, gt=0.0, description="Wheel track (m)")
    r_w: float = Field(default=0.03, gt=0.0, description="Wheel radius (m)")

    @property
    def l(self) -> float:  # noqa: E743
        """Pivot offset from the spin center to each wheel."""
        return self.d_w / 2.0


class WheelMount(BaseModel):
    """Mounting angles of a fixed standard wheel relative to the chassis frame."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    l: float = Field(gt=0.0)  # noqa: E741

    @model_validator(mode="after")
    def _finite(self) -> "WheelMount":
        if not all(math.isfinite(v) for v in (self.alpha, self.beta, self.l)):
            raise ValueError("wheel mount constants must be finite")
        return self


def wheel_mount_left(d_w: float = 0.2) -> WheelMount:
    return WheelMount(alpha=-math.pi / 2, beta=math.pi, l=d_w / 2)


def wheel_mount_right(d_w: float = 0.2) -> WheelMount:
    return WheelMount(alpha=math.pi / 2, beta=0.0, l=d_w / 2)


def normalize_angle(a: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = math.remainder(a, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    return a


def rotation_matrix(theta: float) -> np.ndarray:
    """Orthogonal rotation mapping global-frame velocities into the robot frame."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def world_to_body(theta: float, v: WorldVelocity) -> WorldVelocity:
    """Project a global-frame velocity into the robot frame."""
    out = rotation_matrix(theta) @ np.asarray(v, dtype=float)
    return WorldVelocity(float(out[0]), float(out[1]), float(out[2]))


def body_to_world(theta: float, v: WorldVelocity) -> WorldVelocity:
    """Inverse of :func:`world_to_body`."""
    out = rotation_matrix(theta).T @ np.asarray(v, dtype=float)
    return WorldVelocity(float(out[0]), float(out[1]), float(out[2]))


def forward_kinematics(ws: WheelSpeeds, g: ChassisGeometry) -> BodyTwist:
    """Wheel rim speeds to spin-center velocity and yaw rate."""
    return BodyTwist(v_c=(ws.v_r + ws.v_l) / 2.0, w=(ws.v_r - ws.v_l) / g.d_w)


def inverse_kinematics(t: BodyTwist, g: ChassisGeometry) -> WheelSpeeds:
    """Spin-center velocity and yaw rate to wheel rim speeds."""
    half = g.d_w / 2.0
    return WheelSpeeds(v_l=t.v_c - half * t.w, v_r=t.v_c + half * t.w)


def wheel_rim_speed(omega_w: float, r_w: float) -> float:
    if r_w <= 0.0:
        raise ValueError(f"wheel radius must be positive, got {r_w}")
    return omega_w * r_w


def sliding_constraint_residual(m: WheelMount, theta: float, v: WorldVelocity) -> float:
    """
    Velocity of a wheel orthogonal to its rolling plane.

    Zero when the wheel does not slide sideways.
    """
    row = np.array(
        [math.cos(m.alpha + m.beta), math.sin(m.alpha + m.beta), m.l * math.sin(m.beta)]
    )
    return float(row @ rotation_matrix(theta) @ np.asarray(v, dtype=float))


def rolling_constraint_residual(
    m: WheelMount, theta: float, v: WorldVelocity, r_w: float, phi_dot: float
) -> float:
    """Chassis velocity along the rolling plane minus the rim speed ``r_w * phi_dot``."""
    if r_w <= 0.0:
        raise ValueError(f"wheel radius must be positive, got {r_w}")
    row = np.array(
        [math.sin(m.alpha + m.beta), -math.cos(m.alpha + m.beta), -m.l * math.cos(m.beta)]
    )
    return float(row @ rotation_matrix(theta) @ np.asarray(v, dtype=float)) - r_w * phi_dot


def ddof(dof_workspace: int, c_f: int) -> int:
    """Differential degrees of freedom left after ``c_f`` sliding constraints."""
    if c_f < 0 or dof_workspace < c_f:
        raise ValueError(f"need dof_workspace >= c_f >= 0, got ({dof_workspace}, {c_f})")
    return dof_workspace - c_f


def icr_radius(ws: WheelSpeeds, g: ChassisGeometry) -> Optional[float]:
    """
    Distance from the spin center to the instantaneous center of rotation.

    Returns ``None`` for straight-line motion, where the center is at infinity.
    """
    t = forward_kinematics(ws, g)
    if abs(t.w) < STRAIGHT_EPSILON:
        return None
    return t.v_c / t.w


def integrate_pose(p: Pose, t: BodyTwist, dt: float) -> Pose:
    """
    Advance a pose by holding a twist constant for ``dt`` seconds.

    Uses the closed-form circular arc; nearly straight motion falls back to
    an Euler step.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    dtheta = t.w * dt
    if abs(dtheta) >= STRAIGHT_EPSILON:
        r = t.v_c / t.w
        x = p.x + r * (math.sin(p.theta + dtheta) - math.sin(p.theta))
        y = p.y + r * (math.cos(p.theta) - math.cos(p.theta + dtheta))
    else:
        x = p.x + t.v_c * dt * math.cos(p.theta)
        y = p.y + t.v_c * dt * math.sin(p.theta)
    return Pose(x, y, normalize_angle(p.theta + dtheta))
