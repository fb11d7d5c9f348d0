"""
alexsim: a deterministic differential-drive robot simulator.

The package models the chassis kinematics, DC drive motors and encoders of a
two-wheeled robot, closes PID and fuzzy gain-scheduled PID loops around them,
automates gain tuning and classifies colors from a simulated light sensor.
"""

__version__ = "0.1.0"
__author__ = "alexsim developers"

from alexsim.config import Settings, get_settings, reset_settings
from alexsim.errors import (
    CalibrationError,
    ConfigError,
    NoRuleFiredError,
    NoUltimateGainError,
    UnrecognizedColorError,
)
from alexsim.kinematics import (
    BodyTwist,
    ChassisGeometry,
    Pose,
    WheelSpeeds,
    forward_kinematics,
    integrate_pose,
    inverse_kinematics,
)
from alexsim.scenario import (
    MissionResult,
    MissionStatus,
    ScenarioConfig,
    load_shipped_scenario,
    parse_scenario,
    run_mission,
)

__all__ = [
    # Version
    "__version__",
    # Config
    "Settings",
    "get_settings",
    "reset_settings",
    # Errors
    "CalibrationError",
    "ConfigError",
    "NoRuleFiredError",
    "NoUltimateGainError",
    "UnrecognizedColorError",
    # Kinematics
    "BodyTwist",
    "ChassisGeometry",
    "Pose",
    "WheelSpeeds",
    "forward_kinematics",
    "integrate_pose",
    "inverse_kinematics",
    # Scenarios
    "MissionResult",
    "MissionStatus",
    "ScenarioConfig",
    "load_shipped_scenario",
    "parse_scenario",
    "run_mission",
]
