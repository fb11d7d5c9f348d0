"""Motors, encoders, terrain and the whole-robot plant step."""

from alexsim.plant.motor import (
    MOTOR_PRESETS,
    PWM_MAX,
    EncoderModel,
    MotorParams,
    MotorStep,
    SpeedTorqueCurve,
    counts_for_angle,
    encoder_read,
    motor_preset,
    motor_step,
    pwm_to_voltage,
    speed_torque_curve,
)
from alexsim.plant.sim import NoiseModel, PlantConfig, SimState, read_encoders, sim_step
from alexsim.plant.terrain import FLAT, GRAVITY, TerrainProfile, WheelTerrain, slope_load_torque

__all__ = [
    # Motor
    "MOTOR_PRESETS",
    "PWM_MAX",
    "MotorParams",
    "MotorStep",
    "SpeedTorqueCurve",
    "motor_preset",
    "motor_step",
    "pwm_to_voltage",
    "speed_torque_curve",
    # Encoder
    "EncoderModel",
    "counts_for_angle",
    "encoder_read",
    # Terrain
    "FLAT",
    "GRAVITY",
    "TerrainProfile",
    "WheelTerrain",
    "slope_load_torque",
    # Whole robot
    "NoiseModel",
    "PlantConfig",
    "SimState",
    "read_encoders",
    "sim_step",
]
