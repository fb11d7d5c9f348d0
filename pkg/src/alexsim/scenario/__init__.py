"""Scenario files, closed-loop missions and their traces."""

from alexsim.scenario.config import (
    SHIPPED_SCENARIOS,
    ControllerKind,
    ScenarioConfig,
    TuningSection,
    load_shipped_scenario,
    parse_scenario,
    scenario_resource,
)
from alexsim.scenario.mission import (
    MissionResult,
    MissionStatus,
    controller_factories,
    expected_pose,
    run_mission,
)
from alexsim.scenario.trace import TRACE_HEADER, TraceRow, trace_text, write_trace, write_trace_to

__all__ = [
    # Config
    "SHIPPED_SCENARIOS",
    "ControllerKind",
    "ScenarioConfig",
    "TuningSection",
    "load_shipped_scenario",
    "parse_scenario",
    "scenario_resource",
    # Missions
    "MissionResult",
    "MissionStatus",
    "controller_factories",
    "expected_pose",
    "run_mission",
    # Traces
    "TRACE_HEADER",
    "TraceRow",
    "trace_text",
    "write_trace",
    "write_trace_to",
]
