"""
Tuning journals: one row per candidate gain set, written as CSV, plus the
final gains rendered as a scenario-file block.
"""

import csv
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Optional, Union

from pydantic import BaseModel

from alexsim.control.pid import PidGains
from alexsim.tuning.analysis import OscillationAnalysis, ResponseMetrics

REPORT_HEADER = [
    "phase",
    "kp",
    "ki",
    "kd",
    "decay_ratio",
    "period",
    "rise_time",
    "overshoot",
    "settling_time",
    "steady_state_error",
    "verdict",
]


class TuningPhase(str, Enum):
    SWEEP = "sweep"
    BISECT = "bisect"
    HALVE = "halve"
    INTEGRAL = "integral"
    DERIVATIVE = "derivative"
    ZIEGLER_NICHOLS = "ziegler-nichols"
    EFFECT = "effect"


class TuningCandidate(BaseModel):
    """One simulated gain set and what came out of it."""

    phase: TuningPhase
    gains: PidGains
    oscillation: OscillationAnalysis
    metrics: ResponseMetrics
    verdict: str = ""


def _cell(v: Optional[float]) -> str:
    return "" if v is None else f"{v:.9g}"


def write_tuning_report(
    rows: Iterable[TuningCandidate],
    path: Union[str, Path],
    failure: Optional[str] = None,
) -> None:
    """
    Write candidates in journal order; undefined metrics are left empty.

    A failed search ends the file with a "failed" row carrying the message
    in the verdict column.
    """
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for r in rows:
            writer.writerow(
                [
                    r.phase.value,
                    _cell(r.gains.kp),
                    _cell(r.gains.ki),
                    _cell(r.gains.kd),
                    _cell(r.oscillation.decay_ratio),
                    _cell(r.oscillation.period),
                    _cell(r.metrics.rise_time),
                    _cell(r.metrics.overshoot),
                    _cell(r.metrics.settling_time),
                    _cell(r.metrics.steady_state_error),
                    r.verdict,
                ]
            )
        if failure is not None:
            writer.writerow(["failed", *[""] * (len(REPORT_HEADER) - 2), failure])


def format_gains_block(gains: PidGains, section: str = "controller") -> str:
    """Render gains as a section that a scenario file can include verbatim."""
    lines: List[str] = [f"[{section}]"]
    lines += [f"{name} = {value:.9g}" for name, value in gains.model_dump().items()]
    return "\n".join(lines) + "\n"
