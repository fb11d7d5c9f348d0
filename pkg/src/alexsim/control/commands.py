"""
Decoupled wheel commands for the two motion primitives.

Turning in place drives the wheels at equal speed in opposite directions;
straight-line motion drives them at the same speed and direction.
"""

from alexsim.kinematics import ChassisGeometry, WheelSpeeds


def steering_command(w_target: float, g: ChassisGeometry) -> WheelSpeeds:
    v = w_target * g.d_w / 2.0
    return WheelSpeeds(v_l=-v, v_r=v)


def forward_command(v_target: float) -> WheelSpeeds:
    return WheelSpeeds(v_l=v_target, v_r=v_target)
