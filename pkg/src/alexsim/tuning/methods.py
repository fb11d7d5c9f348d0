"""
Automated gain tuning.

Three procedures share one closed-loop step test (:func:`run_step`):

- the manual effects check, which raises one gain and compares responses
  against the qualitative effects table;
- Ziegler-Nichols, which finds the ultimate gain and period of a P-only loop
  and maps them through the classic formulas;
- the four-step method: find the ultimate gain, halve it for a
  quarter-amplitude response, then grow ki until the steady-state error is
  small and kd while the settling time keeps improving.

Every candidate can be recorded in a journal for the CSV report.
"""

import math
from enum import Enum
from typing import Dict, List, NamedTuple, Optional

from loguru import logger
from pydantic import BaseModel, Field

from alexsim.config import TuningDefaults, get_settings
from alexsim.control.pid import PidGains
from alexsim.errors import NoUltimateGainError
from alexsim.tuning.analysis import (
    ErrorTrace,
    OscillationAnalysis,
    ResponseMetrics,
    analyze_oscillation,
    response_metrics,
)
from alexsim.tuning.report import TuningCandidate, TuningPhase
from alexsim.tuning.scenario import LoopAxis, StepScenario, run_step

Journal = Optional[List[TuningCandidate]]


class UltimateGain(BaseModel):
    """Proportional gain at the stability margin and its oscillation period."""

    K_u: float = Field(gt=0.0)
    P_u: float = Field(gt=0.0)


class ZnKind(str, Enum):
    P = "P"
    PI = "PI"
    PID = "PID"


def zn_gains(u: UltimateGain, kind: ZnKind) -> PidGains:
    """Ziegler-Nichols gains for a P, PI or PID loop."""
    kind = ZnKind(kind)
    if kind is ZnKind.P:
        return PidGains(kp=0.5 * u.K_u)
    if kind is ZnKind.PI:
        kp = 0.45 * u.K_u
        return PidGains(kp=kp, ki=1.2 * kp / u.P_u)
    kp = 0.6 * u.K_u
    return PidGains(kp=kp, ki=2.0 * kp / u.P_u, kd=kp * u.P_u / 8.0)


class _Evaluation(NamedTuple):
    trace: ErrorTrace
    oscillation: OscillationAnalysis
    metrics: ResponseMetrics


def _evaluate(scenario: StepScenario, gains: PidGains, cfg: TuningDefaults) -> _Evaluation:
    trace = run_step(scenario, gains)
    osc = analyze_oscillation(
        trace,
        distance=cfg.peak_distance,
        prominence=cfg.peak_prominence,
        band=cfg.sustained_band,
    )
    return _Evaluation(trace, osc, response_metrics(trace, scenario.setpoint))


def _record(
    journal: Journal, phase: TuningPhase, gains: PidGains, p: _Evaluation, verdict: str
) -> None:
    logger.debug(
        f"{phase.value}: kp={gains.kp:.6g} ki={gains.ki:.6g} kd={gains.kd:.6g} "
        f"decay={p.oscillation.decay_ratio} settling={p.metrics.settling_time} -> {verdict}"
    )
    if journal is not None:
        journal.append(
            TuningCandidate(
                phase=phase,
                gains=gains,
                oscillation=p.oscillation,
                metrics=p.metrics,
                verdict=verdict,
            )
        )


def _at_margin(osc: OscillationAnalysis, cfg: TuningDefaults) -> bool:
    # Growth past the margin saturates into a limit cycle; both count.
    return osc.decay_ratio is not None and osc.decay_ratio >= cfg.sustained_band[0]


def find_ultimate_gain(
    scenario: StepScenario,
    kp_start: Optional[float] = None,
    kp_factor: Optional[float] = None,
    kp_max: Optional[float] = None,
    journal: Journal = None,
) -> UltimateGain:
    """
    Sweep P-only gains geometrically until the loop oscillates without
    decaying, then bisect the last bracket down to the configured fraction of
    its upper end. Returns the upper end and the period measured there.
    """
    cfg = get_settings().tuning
    kp = cfg.kp_start if kp_start is None else kp_start
    factor = cfg.kp_factor if kp_factor is None else kp_factor
    kp_max = cfg.kp_max if kp_max is None else kp_max
    if kp <= 0.0:
        raise ValueError(f"kp_start must be positive, got {kp}")
    if factor <= 1.0:
        raise ValueError(f"kp_factor must exceed 1, got {factor}")

    lo = 0.0
    while True:
        if kp > kp_max:
            raise NoUltimateGainError(kp_max)
        gains = PidGains(kp=kp)
        ev = _evaluate(scenario, gains, cfg)
        hit = _at_margin(ev.oscillation, cfg)
        _record(journal, TuningPhase.SWEEP, gains, ev, "margin" if hit else "stable")
        if hit:
            break
        lo = kp
        kp *= factor

    hi, hi_ev = kp, ev
    while hi - lo >= cfg.bisection_tolerance * hi:
        mid = (lo + hi) / 2.0
        gains = PidGains(kp=mid)
        ev = _evaluate(scenario, gains, cfg)
        hit = _at_margin(ev.oscillation, cfg)
        _record(journal, TuningPhase.BISECT, gains, ev, "margin" if hit else "stable")
        if hit:
            hi, hi_ev = mid, ev
        else:
            lo = mid

    assert hi_ev.oscillation.period is not None
    u = UltimateGain(K_u=hi, P_u=hi_ev.oscillation.period)
    logger.info(f"ultimate gain K_u={u.K_u:.6g}, period P_u={u.P_u:.6g}s")
    return u


class ZnTuning(NamedTuple):
    ultimate: UltimateGain
    gains: PidGains


def zn_tune(scenario: StepScenario, kind: ZnKind, journal: Journal = None) -> ZnTuning:
    """Ziegler-Nichols gains from the ultimate gain of the scenario's P-only loop."""
    u = find_ultimate_gain(scenario, journal=journal)
    gains = zn_gains(u, kind)
    ev = _evaluate(scenario, gains, get_settings().tuning)
    _record(journal, TuningPhase.ZIEGLER_NICHOLS, gains, ev, ZnKind(kind).value)
    return ZnTuning(u, gains)


def new_method_tune(
    scenario: StepScenario,
    journal: Journal = None,
    tune_integral: Optional[bool] = None,
) -> PidGains:
    """
    Four-step tuning.

    1. Find the ultimate gain.
    2. Halve it.
    3. Grow ki geometrically until the steady-state error drops below the
       configured fraction of the setpoint (skipped for steering loops unless
       ``tune_integral`` says otherwise).
    4. Grow kd geometrically while the settling time does not get worse and
       stop at the first increase.
    """
    cfg = get_settings().tuning
    if tune_integral is None:
        tune_integral = scenario.axis is LoopAxis.FORWARD

    u = find_ultimate_gain(scenario, journal=journal)
    gains = PidGains(kp=u.K_u / 2.0)
    ev = _evaluate(scenario, gains, cfg)
    _record(journal, TuningPhase.HALVE, gains, ev, "accepted")

    if tune_integral:
        sse_limit = cfg.steady_state_tolerance * scenario.setpoint
        ki = cfg.ki_start
        while True:
            trial = gains.model_copy(update={"ki": ki})
            ev = _evaluate(scenario, trial, cfg)
            ok = ev.metrics.steady_state_error < sse_limit
            _record(journal, TuningPhase.INTEGRAL, trial, ev, "accepted" if ok else "rejected")
            if ok:
                gains = trial
                break
            if ki * cfg.ki_factor > cfg.ki_max:
                logger.warning(f"ki reached its cap {cfg.ki_max:g} with error still above limit")
                gains = trial
                break
            ki *= cfg.ki_factor

    best = _settling_or_inf(ev.metrics)
    kd = cfg.kd_start
    while kd <= cfg.kd_max:
        trial = gains.model_copy(update={"kd": kd})
        ev = _evaluate(scenario, trial, cfg)
        settling = _settling_or_inf(ev.metrics)
        if settling > best:
            _record(journal, TuningPhase.DERIVATIVE, trial, ev, "rejected")
            break
        _record(journal, TuningPhase.DERIVATIVE, trial, ev, "accepted")
        gains, best = trial, settling
        kd *= cfg.kd_factor

    logger.info(f"tuned gains kp={gains.kp:.6g} ki={gains.ki:.6g} kd={gains.kd:.6g}")
    return gains


def _settling_or_inf(m: ResponseMetrics) -> float:
    return math.inf if m.settling_time is None else m.settling_time


class Effect(str, Enum):
    """Qualitative entries of the manual tuning table."""

    DECREASE = "Decrease"
    INCREASE = "Increase"
    SMALL_CHANGE = "Small Change"
    DECREASE_SIGNIFICANTLY = "Decrease Significantly"
    MINOR_DECREASE = "Minor Decrease"
    NO_EFFECT = "No Effect"
    DEGRADE = "Degrade"
    IMPROVE = "Improve"


class Metric(str, Enum):
    RISE_TIME = "rise_time"
    OVERSHOOT = "overshoot"
    SETTLING_TIME = "settling_time"
    STEADY_STATE_ERROR = "steady_state_error"
    STABILITY = "stability"


class GainEffect(BaseModel):
    """What raising one gain does to each metric."""

    gain: str
    effects: Dict[Metric, Effect]


GAIN_EFFECTS: Dict[str, GainEffect] = {
    "kp": GainEffect(
        gain="kp",
        effects={
            Metric.RISE_TIME: Effect.DECREASE,
            Metric.OVERSHOOT: Effect.INCREASE,
            Metric.SETTLING_TIME: Effect.SMALL_CHANGE,
            Metric.STEADY_STATE_ERROR: Effect.DECREASE,
            Metric.STABILITY: Effect.DEGRADE,
        },
    ),
    "ki": GainEffect(
        gain="ki",
        effects={
            Metric.RISE_TIME: Effect.DECREASE,
            Metric.OVERSHOOT: Effect.INCREASE,
            Metric.SETTLING_TIME: Effect.INCREASE,
            Metric.STEADY_STATE_ERROR: Effect.DECREASE_SIGNIFICANTLY,
            Metric.STABILITY: Effect.DEGRADE,
        },
    ),
    # Stability improves for small kd only.
    "kd": GainEffect(
        gain="kd",
        effects={
            Metric.RISE_TIME: Effect.MINOR_DECREASE,
            Metric.OVERSHOOT: Effect.MINOR_DECREASE,
            Metric.SETTLING_TIME: Effect.MINOR_DECREASE,
            Metric.STEADY_STATE_ERROR: Effect.NO_EFFECT,
            Metric.STABILITY: Effect.IMPROVE,
        },
    ),
}


class Direction(str, Enum):
    DECREASE = "decrease"
    INCREASE = "increase"
    UNCHANGED = "unchanged"
    UNDEFINED = "undefined"


_EXPECTED_DIRECTION: Dict[Effect, Direction] = {
    Effect.DECREASE: Direction.DECREASE,
    Effect.DECREASE_SIGNIFICANTLY: Direction.DECREASE,
    Effect.MINOR_DECREASE: Direction.DECREASE,
    Effect.INCREASE: Direction.INCREASE,
    # Stability is read off the decay ratio, where larger is worse.
    Effect.DEGRADE: Direction.INCREASE,
    Effect.IMPROVE: Direction.DECREASE,
}


class EffectVerdict(BaseModel):
    """Observed movement of one metric against the table's claim."""

    metric: Metric
    expected: Effect
    before: Optional[float]
    after: Optional[float]
    observed: Direction
    agrees: Optional[bool] = Field(
        default=None, description="None when the claim is not directional or not measurable"
    )


class EffectComparison(BaseModel):
    gain: str
    factor: float
    base: PidGains
    raised: PidGains
    before: ResponseMetrics
    after: ResponseMetrics
    verdicts: List[EffectVerdict]

    def verdict(self, metric: Metric) -> EffectVerdict:
        return next(v for v in self.verdicts if v.metric is metric)


def _metric_value(metric: Metric, m: ResponseMetrics, osc: OscillationAnalysis) -> Optional[float]:
    if metric is Metric.STABILITY:
        return 0.0 if osc.decay_ratio is None else osc.decay_ratio
    return getattr(m, metric.value)


def _direction(before: Optional[float], after: Optional[float]) -> Direction:
    if before is None and after is None:
        return Direction.UNDEFINED
    # Unreached times are infinitely late.
    b = math.inf if before is None else before
    a = math.inf if after is None else after
    if a == b or abs(a - b) <= 1e-12 + 1e-9 * abs(b):
        return Direction.UNCHANGED
    return Direction.INCREASE if a > b else Direction.DECREASE


def effects_check(
    scenario: StepScenario,
    base: PidGains,
    which: str,
    factor: float = 2.0,
    journal: Journal = None,
) -> EffectComparison:
    """Raise one gain by ``factor`` and compare both responses with the table."""
    if which not in GAIN_EFFECTS:
        raise ValueError(f"unknown gain '{which}'; expected one of {sorted(GAIN_EFFECTS)}")
    if factor <= 1.0:
        raise ValueError(f"factor must exceed 1, got {factor}")
    cfg = get_settings().tuning
    raised = base.model_copy(update={which: getattr(base, which) * factor})

    p0 = _evaluate(scenario, base, cfg)
    p1 = _evaluate(scenario, raised, cfg)
    verdicts: List[EffectVerdict] = []
    for metric, effect in GAIN_EFFECTS[which].effects.items():
        b = _metric_value(metric, p0.metrics, p0.oscillation)
        a = _metric_value(metric, p1.metrics, p1.oscillation)
        observed = _direction(b, a)
        expected = _EXPECTED_DIRECTION.get(effect)
        agrees = None
        if expected is not None and observed is not Direction.UNDEFINED:
            agrees = observed is expected
        verdicts.append(
            EffectVerdict(
                metric=metric,
                expected=effect,
                before=b,
                after=a,
                observed=observed,
                agrees=agrees,
            )
        )

    _record(journal, TuningPhase.EFFECT, base, p0, "base")
    _record(journal, TuningPhase.EFFECT, raised, p1, f"{which} x{factor:g}")
    return EffectComparison(
        gain=which,
        factor=factor,
        base=base,
        raised=raised,
        before=p0.metrics,
        after=p1.metrics,
        verdicts=verdicts,
    )

