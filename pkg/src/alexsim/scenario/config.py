"""
Scenario files.

A scenario is a line-oriented text file of ``[section]`` headers and
``key = value`` pairs. ``#`` starts a comment. Terrain knots repeat::

    [terrain]
    knot = left 0.3 0
    knot = left 1.1 5

Angles are degrees in the file and radians everywhere else. Every problem
is reported as a :class:`ConfigError` carrying the offending line number.
"""

import math
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from alexsim.config import get_settings
from alexsim.control.autopilot import (
    AutopilotConfig,
    Setpoint,
    SetpointId,
    SetpointTable,
    default_setpoint_table,
)
from alexsim.control.fuzzy_pid import FuzzyScales
from alexsim.control.pid import PidGains
from alexsim.control.profiles import controller_profile
from alexsim.errors import ConfigError
from alexsim.kinematics import ChassisGeometry
from alexsim.plant.motor import MotorParams, motor_preset
from alexsim.plant.sim import NoiseModel, PlantConfig
from alexsim.plant.terrain import TerrainProfile, WheelTerrain
from alexsim.tuning.scenario import LoopAxis, StepScenario

SHIPPED_SCENARIOS = ("flat_forward", "hill_left", "tune_forward", "tune_loaded", "square_tour")

_MOTOR_KEYS = ("R_a", "K_t", "K_e", "J", "b", "V_max", "gear_ratio")
_GAIN_KEYS = ("kp", "ki", "kd")

SECTION_KEYS: Dict[str, Tuple[str, ...]] = {
    "scenario": ("name",),
    "plant": ("motor", "mass", "counts_per_rev", *_MOTOR_KEYS),
    "chassis": ("d_w", "r_w"),
    "terrain": ("knot",),
    "controller": ("type", "profile", *_GAIN_KEYS),
    "fuzzy": ("s_p", "s_i", "s_d", "k_e", "k_ec"),
    "steering": _GAIN_KEYS,
    "autopilot": ("watchdog_limit", "tolerance", "settle_periods", "cruise_speed", "turn_rate"),
    "setpoints": tuple(s.value for s in SetpointId),
    "mission": ("legs",),
    "simulation": ("dt_plant", "dt_control", "actuation_delay", "duration", "seed"),
    "noise": ("encoder", "load"),
    "tuning": ("axis", "setpoint", "duration"),
}

_WHEELS = ("left", "right", "both")

E = TypeVar("E", bound=Enum)


class ControllerKind(str, Enum):
    PID = "pid"
    FUZZY_PID = "fuzzy-pid"


class TuningSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    axis: LoopAxis = LoopAxis.FORWARD
    setpoint: int = Field(default=150, gt=0)
    duration: float = Field(default=4.0, gt=0.0)


def _default_scales() -> FuzzyScales:
    s_p, s_i, s_d = get_settings().fuzzy.scales
    return FuzzyScales(s_p=s_p, s_i=s_i, s_d=s_d)


class ScenarioConfig(BaseModel):
    """Everything needed to run a mission or a tuning step test."""

    model_config = ConfigDict(frozen=True)

    name: str = "scenario"
    plant: PlantConfig = Field(default_factory=PlantConfig)
    controller: ControllerKind = ControllerKind.PID
    forward: PidGains = Field(default_factory=lambda: controller_profile("alex-ref").forward)
    steering: PidGains = Field(default_factory=lambda: controller_profile("alex-ref").steering)
    scales: FuzzyScales = Field(default_factory=_default_scales)
    k_e: float = Field(default_factory=lambda: get_settings().fuzzy.k_e, gt=0.0)
    k_ec: float = Field(default_factory=lambda: get_settings().fuzzy.k_ec, gt=0.0)
    autopilot: AutopilotConfig = Field(default_factory=AutopilotConfig)
    setpoints: SetpointTable = Field(default_factory=default_setpoint_table)
    legs: Tuple[SetpointId, ...] = ()
    dt_plant: float = Field(default_factory=lambda: get_settings().simulation.dt_plant, gt=0.0)
    dt_control: float = Field(default_factory=lambda: get_settings().simulation.dt_control, gt=0.0)
    actuation_delay: int = Field(
        default_factory=lambda: get_settings().simulation.actuation_delay, ge=0
    )
    duration: float = Field(default_factory=lambda: get_settings().simulation.duration, gt=0.0)
    seed: int = 0
    tuning: TuningSection = Field(default_factory=TuningSection)

    @model_validator(mode="after")
    def _timing(self) -> "ScenarioConfig":
        substeps = round(self.dt_control / self.dt_plant)
        if substeps < 1 or abs(substeps * self.dt_plant - self.dt_control) > 1e-9 * self.dt_control:
            raise ValueError(
                f"dt_control ({self.dt_control}) must be an integer multiple of "
                f"dt_plant ({self.dt_plant})"
            )
        return self

    @property
    def substeps(self) -> int:
        return round(self.dt_control / self.dt_plant)

    @property
    def periods(self) -> int:
        return round(self.duration / self.dt_control)

    def with_seed(self, seed: int) -> "ScenarioConfig":
        """Copy with a new seed for both the scenario and its noise model."""
        noise = self.plant.noise.model_copy(update={"seed": seed})
        plant = self.plant.model_copy(update={"noise": noise})
        return self.model_copy(update={"seed": seed, "plant": plant})

    def with_controller(self, kind: ControllerKind) -> "ScenarioConfig":
        return self.model_copy(update={"controller": ControllerKind(kind)})

    def step_scenario(self, axis: Optional[LoopAxis] = None) -> StepScenario:
        """The tuning step test this scenario describes."""
        return StepScenario(
            plant=self.plant,
            axis=axis or self.tuning.axis,
            setpoint=self.tuning.setpoint,
            dt_control=self.dt_control,
            dt_plant=self.dt_plant,
            actuation_delay=self.actuation_delay,
            duration=self.tuning.duration,
            output_limit=self.autopilot.output_limit,
        )


class _Entry:
    __slots__ = ("value", "line")

    def __init__(self, value: str, line: int):
        self.value = value
        self.line = line


_Section = Dict[str, _Entry]


def _tokenize(text: str) -> Tuple[Dict[str, _Section], List[_Entry]]:
    sections: Dict[str, _Section] = {}
    knots: List[_Entry] = []
    current: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header '{line}'", number)
            current = line[1:-1].strip()
            if current not in SECTION_KEYS:
                raise ConfigError(f"unknown section [{current}]", number)
            sections.setdefault(current, {})
            continue
        if current is None:
            raise ConfigError("key outside of any section", number)
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got '{line}'", number)
        if key not in SECTION_KEYS[current]:
            raise ConfigError(f"unknown key '{key}' in [{current}]", number)
        if not value:
            raise ConfigError(f"missing value for '{key}'", number)
        if key == "knot":
            knots.append(_Entry(value, number))
            continue
        if key in sections[current]:
            raise ConfigError(f"duplicate key '{key}' in [{current}]", number)
        sections[current][key] = _Entry(value, number)
    return sections, knots


def _float(entry: _Entry) -> float:
    try:
        v = float(entry.value)
    except ValueError:
        raise ConfigError(f"expected a number, got '{entry.value}'", entry.line) from None
    if not math.isfinite(v):
        raise ConfigError(f"expected a finite number, got '{entry.value}'", entry.line)
    return v


def _int(entry: _Entry) -> int:
    try:
        return int(entry.value)
    except ValueError:
        raise ConfigError(f"expected an integer, got '{entry.value}'", entry.line) from None


def _floats(section: _Section, keys: Tuple[str, ...]) -> Dict[str, float]:
    return {k: _float(section[k]) for k in keys if k in section}


def _choice(entry: _Entry, kind: Type[E]) -> E:
    try:
        return kind(entry.value)
    except ValueError:
        choices = ", ".join(m.value for m in kind)  # type: ignore[attr-defined]
        raise ConfigError(f"expected one of {choices}, got '{entry.value}'", entry.line) from None


def _terrain(knots: List[_Entry]) -> WheelTerrain:
    per_wheel: Dict[str, List[Tuple[float, float]]] = {"left": [], "right": []}
    for entry in knots:
        parts = entry.value.split()
        if len(parts) != 3 or parts[0] not in _WHEELS:
            raise ConfigError("knot must be '<left|right|both> <s_m> <slope_deg>'", entry.line)
        try:
            s, deg = float(parts[1]), float(parts[2])
        except ValueError:
            raise ConfigError(f"bad knot numbers '{entry.value}'", entry.line) from None
        if s < 0.0:
            raise ConfigError(f"knot distance must be >= 0, got {s}", entry.line)
        if not abs(deg) < 90.0:
            raise ConfigError(f"slope must be below 90 degrees, got {deg}", entry.line)
        wheels = ("left", "right") if parts[0] == "both" else (parts[0],)
        for wheel in wheels:
            if per_wheel[wheel] and s < per_wheel[wheel][-1][0]:
                raise ConfigError(f"{wheel} knots must be in nondecreasing distance", entry.line)
            per_wheel[wheel].append((s, math.radians(deg)))
    return WheelTerrain(
        left=TerrainProfile(knots=tuple(per_wheel["left"])),
        right=TerrainProfile(knots=tuple(per_wheel["right"])),
    )


def _setpoints(section: _Section) -> SetpointTable:
    entries = dict(default_setpoint_table().entries)
    for key, entry in section.items():
        parts = entry.value.split()
        if len(parts) != 2:
            raise ConfigError("setpoint must be '<counts> <heading_deg>'", entry.line)
        try:
            counts, heading = int(parts[0]), math.radians(float(parts[1]))
            entries[SetpointId(key)] = Setpoint(counts=counts, heading=heading)
        except (ValueError, ValidationError) as e:
            raise ConfigError(f"bad setpoint {key}: {e}", entry.line) from None
    return SetpointTable(entries=entries)


def _legs(entry: _Entry) -> Tuple[SetpointId, ...]:
    try:
        return tuple(SetpointId(token) for token in entry.value.replace(",", " ").split())
    except ValueError as e:
        raise ConfigError(f"unknown setpoint in legs: {e}", entry.line) from None


def _error_line(sections: Dict[str, _Section], loc: List[str]) -> Optional[int]:
    for entries in sections.values():
        for key, entry in entries.items():
            if key in loc:
                return entry.line
    # Cross-field checks carry no location; timing is the only one.
    entry = sections.get("simulation", {}).get("dt_control")
    return entry.line if entry else None


def parse_scenario(source: Union[str, Path]) -> ScenarioConfig:
    """Parse scenario text, or a scenario file when given a ``Path``."""
    text = source.read_text(encoding="utf-8") if isinstance(source, Path) else source
    sections, knots = _tokenize(text)
    try:
        return _build(sections, knots)
    except ValidationError as e:
        err = e.errors()[0]
        loc = [str(p) for p in err["loc"]]
        where = ".".join(loc) or "scenario"
        raise ConfigError(f"{where}: {err['msg']}", _error_line(sections, loc)) from None


def _build(sections: Dict[str, _Section], knots: List[_Entry]) -> ScenarioConfig:
    sim = get_settings().simulation
    empty: _Section = {}
    kwargs: Dict[str, Any] = {}

    if "name" in sections.get("scenario", empty):
        kwargs["name"] = sections["scenario"]["name"].value

    timing = sections.get("simulation", empty)
    seed = _int(timing["seed"]) if "seed" in timing else 0
    kwargs["seed"] = seed
    kwargs.update(_floats(timing, ("dt_plant", "dt_control", "duration")))
    if "actuation_delay" in timing:
        kwargs["actuation_delay"] = _int(timing["actuation_delay"])

    plant = sections.get("plant", empty)
    try:
        motor = motor_preset(plant["motor"].value if "motor" in plant else "alex-ref")
    except ValueError as e:
        raise ConfigError(str(e), plant["motor"].line) from None
    motor = MotorParams(**{**motor.model_dump(), **_floats(plant, _MOTOR_KEYS)})
    kwargs["plant"] = PlantConfig(
        motor=motor,
        geometry=ChassisGeometry(**_floats(sections.get("chassis", empty), ("d_w", "r_w"))),
        terrain=_terrain(knots),
        mass=_float(plant["mass"]) if "mass" in plant else sim.mass,
        counts_per_rev=(
            _int(plant["counts_per_rev"]) if "counts_per_rev" in plant else sim.counts_per_rev
        ),
        noise=NoiseModel(
            **_floats(sections.get("noise", empty), ("encoder", "load")),
            seed=seed,
        ),
    )

    ctl = sections.get("controller", empty)
    try:
        profile = controller_profile(ctl["profile"].value if "profile" in ctl else "alex-ref")
    except ValueError as e:
        raise ConfigError(str(e), ctl["profile"].line) from None
    if "type" in ctl:
        kwargs["controller"] = _choice(ctl["type"], ControllerKind)
    steering = sections.get("steering", empty)
    kwargs["forward"] = PidGains(**{**profile.forward.model_dump(), **_floats(ctl, _GAIN_KEYS)})
    kwargs["steering"] = PidGains(
        **{**profile.steering.model_dump(), **_floats(steering, _GAIN_KEYS)}
    )

    fz = sections.get("fuzzy", empty)
    kwargs["scales"] = FuzzyScales(
        **{**_default_scales().model_dump(), **_floats(fz, ("s_p", "s_i", "s_d"))}
    )
    kwargs.update(_floats(fz, ("k_e", "k_ec")))

    ap = sections.get("autopilot", empty)
    ap_values: Dict[str, Any] = {
        "watchdog_limit": sim.watchdog_limit,
        "tolerance": sim.completion_tolerance,
        "settle_periods": sim.settle_periods,
        "output_limit": int(sim.output_limit),
    }
    for key in ("watchdog_limit", "tolerance", "settle_periods"):
        if key in ap:
            ap_values[key] = _int(ap[key])
    ap_values.update(_floats(ap, ("cruise_speed", "turn_rate")))
    kwargs["autopilot"] = AutopilotConfig(**ap_values)

    kwargs["setpoints"] = _setpoints(sections.get("setpoints", empty))
    mission = sections.get("mission", empty)
    if "legs" in mission:
        kwargs["legs"] = _legs(mission["legs"])

    tuning = sections.get("tuning", empty)
    tuning_values: Dict[str, Any] = _floats(tuning, ("duration",))
    if "axis" in tuning:
        tuning_values["axis"] = _choice(tuning["axis"], LoopAxis)
    if "setpoint" in tuning:
        tuning_values["setpoint"] = _int(tuning["setpoint"])
    kwargs["tuning"] = TuningSection(**tuning_values)

    return ScenarioConfig(**kwargs)


def scenario_resource(name: str) -> str:
    """Text of a shipped scenario file."""
    if name not in SHIPPED_SCENARIOS:
        raise ValueError(f"unknown scenario '{name}'; shipped: {', '.join(SHIPPED_SCENARIOS)}")
    path = resources.files("alexsim.scenario") / "data" / f"{name}.cfg"
    return path.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_shipped_scenario(name: str) -> ScenarioConfig:
    return parse_scenario(scenario_resource(name))
