"""Step tests, response analytics and automated PID tuning."""

from alexsim.tuning.analysis import (
    ErrorTrace,
    OscillationAnalysis,
    ResponseMetrics,
    analyze_oscillation,
    response_metrics,
)
from alexsim.tuning.methods import (
    GAIN_EFFECTS,
    Direction,
    Effect,
    EffectComparison,
    EffectVerdict,
    GainEffect,
    Metric,
    UltimateGain,
    ZnKind,
    ZnTuning,
    effects_check,
    find_ultimate_gain,
    new_method_tune,
    zn_gains,
    zn_tune,
)
from alexsim.tuning.report import (
    REPORT_HEADER,
    TuningCandidate,
    TuningPhase,
    format_gains_block,
    write_tuning_report,
)
from alexsim.tuning.scenario import LoopAxis, StepScenario, run_step

__all__ = [
    # Analysis
    "ErrorTrace",
    "OscillationAnalysis",
    "ResponseMetrics",
    "analyze_oscillation",
    "response_metrics",
    # Step test
    "LoopAxis",
    "StepScenario",
    "run_step",
    # Procedures
    "UltimateGain",
    "ZnKind",
    "ZnTuning",
    "find_ultimate_gain",
    "new_method_tune",
    "zn_gains",
    "zn_tune",
    # Effects table
    "GAIN_EFFECTS",
    "Direction",
    "Effect",
    "EffectComparison",
    "EffectVerdict",
    "GainEffect",
    "Metric",
    "effects_check",
    # Reports
    "REPORT_HEADER",
    "TuningCandidate",
    "TuningPhase",
    "format_gains_block",
    "write_tuning_report",
]
