"""PID and fuzzy-PID control, wheel commands and the setpoint autopilot."""

from alexsim.control.autopilot import (
    DEFAULT_HEADINGS,
    Autopilot,
    AutopilotConfig,
    AutopilotOutput,
    AutopilotPhase,
    AutopilotState,
    Setpoint,
    SetpointId,
    SetpointTable,
    autopilot_step,
    default_setpoint_table,
)
from alexsim.control.commands import forward_command, steering_command
from alexsim.control.fuzzy_pid import (
    FuzzyPidController,
    FuzzyScales,
    fuzzy_pid_update,
    schedule_gains,
)
from alexsim.control.pid import Controller, PidController, PidGains, pid_update, pwm_saturate
from alexsim.control.profiles import PROFILES, ControllerProfile, controller_profile

__all__ = [
    # PID
    "Controller",
    "PidController",
    "PidGains",
    "pid_update",
    "pwm_saturate",
    # Fuzzy PID
    "FuzzyPidController",
    "FuzzyScales",
    "fuzzy_pid_update",
    "schedule_gains",
    # Commands and profiles
    "forward_command",
    "steering_command",
    "PROFILES",
    "ControllerProfile",
    "controller_profile",
    # Autopilot
    "DEFAULT_HEADINGS",
    "Autopilot",
    "AutopilotConfig",
    "AutopilotOutput",
    "AutopilotPhase",
    "AutopilotState",
    "Setpoint",
    "SetpointId",
    "SetpointTable",
    "autopilot_step",
    "default_setpoint_table",
]
