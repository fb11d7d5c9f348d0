"""
Mission traces: one row per control period, written as CSV with a frozen
header and nine significant digits. Angles and slopes are in radians.
"""

import csv
import io
from pathlib import Path
from typing import IO, Iterable, List, NamedTuple, Union

from alexsim.control.autopilot import AutopilotOutput, AutopilotState
from alexsim.plant.sim import PlantConfig, SimState

TRACE_HEADER: List[str] = [
    "time",
    "x",
    "y",
    "theta",
    "v_c",
    "w",
    "v_l",
    "v_r",
    "enc_l",
    "enc_r",
    "pwm_l",
    "pwm_r",
    "kp_l",
    "ki_l",
    "kd_l",
    "kp_r",
    "ki_r",
    "kd_r",
    "state",
    "slope_l",
    "slope_r",
    "power_l",
    "power_r",
]


class TraceRow(NamedTuple):
    time: float
    x: float
    y: float
    theta: float
    v_c: float
    w: float
    v_l: float
    v_r: float
    enc_l: int
    enc_r: int
    pwm_l: int
    pwm_r: int
    kp_l: float
    ki_l: float
    kd_l: float
    kp_r: float
    ki_r: float
    kd_r: float
    state: str
    slope_l: float
    slope_r: float
    power_l: float
    power_r: float

    @classmethod
    def capture(
        cls,
        t: float,
        s: SimState,
        cfg: PlantConfig,
        enc_l: int,
        enc_r: int,
        pwm_l: int,
        pwm_r: int,
        out: AutopilotOutput,
        pilot: AutopilotState,
    ) -> "TraceRow":
        """Snapshot of the plant and controller at the start of a period."""
        wheels = s.wheel_speeds(cfg.geometry)
        return cls(
            time=t,
            x=s.pose.x,
            y=s.pose.y,
            theta=s.pose.theta,
            v_c=s.twist.v_c,
            w=s.twist.w,
            v_l=wheels.v_l,
            v_r=wheels.v_r,
            enc_l=enc_l,
            enc_r=enc_r,
            pwm_l=pwm_l,
            pwm_r=pwm_r,
            kp_l=out.gains_l.kp,
            ki_l=out.gains_l.ki,
            kd_l=out.gains_l.kd,
            kp_r=out.gains_r.kp,
            ki_r=out.gains_r.ki,
            kd_r=out.gains_r.kd,
            state=pilot.phase.value,
            slope_l=cfg.terrain.left.slope(s.distance),
            slope_r=cfg.terrain.right.slope(s.distance),
            power_l=s.power_l,
            power_r=s.power_r,
        )


def _format(v: object) -> str:
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def write_trace_to(rows: Iterable[TraceRow], f: IO[str]) -> None:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for row in rows:
        writer.writerow([_format(v) for v in row])


def write_trace(rows: Iterable[TraceRow], path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        write_trace_to(rows, f)


def trace_text(rows: Iterable[TraceRow]) -> str:
    buf = io.StringIO()
    write_trace_to(rows, buf)
    return buf.getvalue()
