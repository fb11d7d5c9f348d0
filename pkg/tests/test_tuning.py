"""
Tests for the step test, response analytics and the tuning procedures.
"""

import csv
import math
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from alexsim.control import PidGains
from alexsim.errors import NoUltimateGainError
from alexsim.scenario import load_shipped_scenario
from alexsim.tuning import (
    REPORT_HEADER,
    Direction,
    ErrorTrace,
    Metric,
    OscillationAnalysis,
    ResponseMetrics,
    StepScenario,
    TuningCandidate,
    TuningPhase,
    UltimateGain,
    ZnKind,
    analyze_oscillation,
    effects_check,
    find_ultimate_gain,
    format_gains_block,
    new_method_tune,
    response_metrics,
    run_step,
    write_tuning_report,
    zn_gains,
    zn_tune,
)


def _trace(fn: Callable[[np.ndarray], np.ndarray], duration: float, dt: float) -> ErrorTrace:
    t = np.arange(0.0, duration, dt)
    return ErrorTrace(dt=dt, errors=tuple(float(v) for v in fn(t)))


@pytest.fixture
def forward_step() -> StepScenario:
    return load_shipped_scenario("tune_forward").step_scenario()


class TestZieglerNichols:
    """Classic gain formulas."""

    def test_formulas_on_random_pairs(self) -> None:
        rng = np.random.default_rng(5)
        for K_u, P_u in rng.uniform(0.01, 100.0, size=(1000, 2)):
            u = UltimateGain(K_u=K_u, P_u=P_u)
            assert zn_gains(u, ZnKind.P) == PidGains(kp=0.5 * K_u)
            pi = zn_gains(u, ZnKind.PI)
            assert pi.kp == pytest.approx(0.45 * K_u, rel=1e-12)
            assert pi.ki == pytest.approx(0.54 * K_u / P_u, rel=1e-12)
            assert pi.kd == 0.0
            pid = zn_gains(u, ZnKind.PID)
            assert pid.kp == pytest.approx(0.6 * K_u, rel=1e-12)
            assert pid.ki == pytest.approx(1.2 * K_u / P_u, rel=1e-12)
            assert pid.kd == pytest.approx(0.075 * K_u * P_u, rel=1e-12)

    def test_accepts_plain_strings(self) -> None:
        u = UltimateGain(K_u=2.0, P_u=1.0)
        assert zn_gains(u, "PI") == zn_gains(u, ZnKind.PI)  # type: ignore[arg-type]


class TestAnalysis:
    """Peak detection and step metrics on synthetic traces."""

    def test_sustained_sine(self) -> None:
        osc = analyze_oscillation(_trace(lambda t: np.sin(2 * np.pi * t / 0.5), 5.0, 0.01))
        assert osc.period == pytest.approx(0.5, abs=0.01)
        assert osc.decay_ratio == pytest.approx(1.0, abs=0.02)
        assert osc.sustained

    def test_decaying_oscillation(self) -> None:
        trace = _trace(lambda t: np.exp(-t / 0.5) * np.cos(2 * np.pi * t / 0.5), 4.0, 0.001)
        osc = analyze_oscillation(trace)
        assert osc.period == pytest.approx(0.5, abs=0.01)
        assert osc.decay_ratio == pytest.approx(math.exp(-1.0), rel=0.02)
        assert not osc.sustained

    def test_monotone_trace_has_no_period(self) -> None:
        osc = analyze_oscillation(_trace(lambda t: np.exp(-t), 2.0, 0.01))
        assert osc.period is None
        assert osc.decay_ratio is None
        assert not osc.sustained

    def test_needs_three_samples(self) -> None:
        with pytest.raises(ValueError):
            analyze_oscillation(ErrorTrace(dt=0.1, errors=(1.0, 0.0)))

    def test_first_order_step(self) -> None:
        tau = 0.2
        trace = _trace(lambda t: 100.0 * np.exp(-t / tau), 3.0, 0.001)
        m = response_metrics(trace, 100.0)
        assert m.rise_time == pytest.approx(math.log(9.0) * tau, abs=0.002)
        assert m.overshoot == 0.0
        assert m.settling_time == pytest.approx(math.log(50.0) * tau, abs=0.002)
        assert m.steady_state_error < 1e-3

    def test_overshoot_and_unsettled(self) -> None:
        m = response_metrics(ErrorTrace(dt=0.1, errors=(10.0, 5.0, -5.0, 3.0)), 10.0)
        assert m.overshoot == pytest.approx(0.5)
        assert m.settling_time is None
        assert m.rise_time == pytest.approx(0.1)

    def test_sustained_ripple_never_settles(self) -> None:
        # Last sample sits at a zero crossing, inside the band.
        trace = _trace(lambda t: 0.05 * np.sin(2 * np.pi * t), 10.0, 0.01)
        assert abs(trace.errors[-1]) < 0.02
        assert response_metrics(trace, 1.0).settling_time is None

    def test_brief_entry_into_band_is_not_settling(self) -> None:
        errors = (10.0,) * 95 + (0.0,) * 5
        assert response_metrics(ErrorTrace(dt=0.1, errors=errors), 10.0).settling_time is None
        errors = (10.0,) * 85 + (0.0,) * 15
        m = response_metrics(ErrorTrace(dt=0.1, errors=errors), 10.0)
        assert m.settling_time == pytest.approx(8.5)

    def test_never_rises(self) -> None:
        m = response_metrics(ErrorTrace(dt=0.1, errors=(10.0,) * 5), 10.0)
        assert m.rise_time is None
        assert m.steady_state_error == 10.0

    def test_rejects_zero_setpoint(self) -> None:
        with pytest.raises(ValueError):
            response_metrics(ErrorTrace(dt=0.1, errors=(1.0,)), 0.0)

    def test_from_samples(self) -> None:
        trace = ErrorTrace.from_samples([1.0, 1.5, 2.0], [3.0, 2.0, 1.0])
        assert trace.dt == pytest.approx(0.5)
        assert trace.times == pytest.approx([1.0, 1.5, 2.0])
        with pytest.raises(ValueError):
            ErrorTrace.from_samples([0.0, 0.1, 0.3], [1.0, 1.0, 1.0])
        with pytest.raises(ValueError):
            ErrorTrace.from_samples([0.0], [1.0])


class TestStepTest:
    """Closed-loop step on the simulated plant."""

    def test_first_error_is_setpoint(self, forward_step: StepScenario) -> None:
        trace = run_step(forward_step, PidGains(kp=0.5))
        assert len(trace) == forward_step.periods == 200
        assert trace.errors[0] == forward_step.setpoint

    def test_deterministic(self, forward_step: StepScenario) -> None:
        gains = PidGains(kp=0.685, ki=0.0001, kd=0.032)
        assert run_step(forward_step, gains) == run_step(forward_step, gains)

    def test_zero_gains_never_move(self, forward_step: StepScenario) -> None:
        trace = run_step(forward_step, PidGains())
        assert set(trace.errors) == {float(forward_step.setpoint)}

    def test_timing_validation(self) -> None:
        with pytest.raises(ValueError):
            StepScenario(dt_control=0.0105, dt_plant=0.001)
        with pytest.raises(ValueError):
            StepScenario(duration=0.02, dt_control=0.02)


@pytest.mark.slow
class TestProcedures:
    """Ultimate gain search and the four-step method on the forward loop."""

    def test_ultimate_gain(self, forward_step: StepScenario) -> None:
        journal: list = []
        u = find_ultimate_gain(forward_step, journal=journal)
        assert 1.2 <= u.K_u <= 1.55
        assert u.P_u == pytest.approx(0.32, abs=0.04)
        assert journal[0].phase is TuningPhase.SWEEP
        assert {c.phase for c in journal} <= {TuningPhase.SWEEP, TuningPhase.BISECT}

    def test_no_ultimate_gain(self, forward_step: StepScenario) -> None:
        with pytest.raises(NoUltimateGainError):
            find_ultimate_gain(forward_step, kp_start=0.1, kp_max=0.05)
        with pytest.raises(ValueError):
            find_ultimate_gain(forward_step, kp_factor=1.0)

    def test_zn_tune(self, forward_step: StepScenario) -> None:
        result = zn_tune(forward_step, ZnKind.PID)
        assert result.gains == zn_gains(result.ultimate, ZnKind.PID)

    def test_four_step_method(self, forward_step: StepScenario) -> None:
        journal: list = []
        gains = new_method_tune(forward_step, journal=journal)
        halve = next(c for c in journal if c.phase is TuningPhase.HALVE)
        assert halve.oscillation.decay_ratio == pytest.approx(0.25, abs=0.1)
        assert gains.kp == pytest.approx(halve.gains.kp)
        assert gains.ki > 0.0
        final = response_metrics(run_step(forward_step, gains), forward_step.setpoint)
        assert final.steady_state_error < 0.01 * forward_step.setpoint
        assert gains.kp == pytest.approx(0.685, abs=0.03)


@pytest.mark.slow
class TestEffects:
    """Raising one gain against the qualitative table."""

    BASE = PidGains(kp=0.685, ki=0.0001, kd=0.032)

    def test_kp(self, forward_step: StepScenario) -> None:
        cmp = effects_check(forward_step, self.BASE, "kp")
        assert cmp.raised.kp == pytest.approx(2 * self.BASE.kp)
        assert cmp.verdict(Metric.RISE_TIME).observed is Direction.DECREASE
        assert cmp.verdict(Metric.RISE_TIME).agrees is True
        assert cmp.verdict(Metric.OVERSHOOT).agrees is True

    def test_kd_cuts_overshoot(self, forward_step: StepScenario) -> None:
        cmp = effects_check(forward_step, self.BASE, "kd")
        assert cmp.after.overshoot < cmp.before.overshoot
        assert cmp.verdict(Metric.OVERSHOOT).agrees is True
        assert cmp.verdict(Metric.STEADY_STATE_ERROR).agrees is None

    def test_ki_removes_load_offset(self) -> None:
        loaded = load_shipped_scenario("tune_loaded")
        cmp = effects_check(loaded.step_scenario(), loaded.forward, "ki")
        assert cmp.after.steady_state_error < cmp.before.steady_state_error
        assert cmp.verdict(Metric.STEADY_STATE_ERROR).agrees is True

    def test_journal(self, forward_step: StepScenario) -> None:
        journal: list = []
        effects_check(forward_step, self.BASE, "kp", factor=1.5, journal=journal)
        assert [c.verdict for c in journal] == ["base", "kp x1.5"]

    def test_rejects_bad_arguments(self, forward_step: StepScenario) -> None:
        with pytest.raises(ValueError):
            effects_check(forward_step, self.BASE, "kq")
        with pytest.raises(ValueError):
            effects_check(forward_step, self.BASE, "kp", factor=1.0)


class TestReport:
    """Journal CSV and the gains block."""

    def test_csv(self, tmp_path: Path) -> None:
        row = TuningCandidate(
            phase=TuningPhase.HALVE,
            gains=PidGains(kp=0.685),
            oscillation=OscillationAnalysis(decay_ratio=0.25, period=0.32),
            metrics=ResponseMetrics(rise_time=None, overshoot=0.1, steady_state_error=2.0),
            verdict="accepted",
        )
        path = tmp_path / "journal.csv"
        write_tuning_report([row, row], path)
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == REPORT_HEADER
        assert len(rows) == 3
        assert rows[1] == [
            "halve", "0.685", "0", "0", "0.25", "0.32", "", "0.1", "", "2", "accepted"
        ]

    def test_gains_block(self) -> None:
        text = format_gains_block(PidGains(kp=0.685, ki=0.0001, kd=0.032))
        assert text == "[controller]\nkp = 0.685\nki = 0.0001\nkd = 0.032\n"
        assert format_gains_block(PidGains(), "steering").startswith("[steering]\n")

    def test_failure_row(self, tmp_path: Path) -> None:
        path = tmp_path / "failed.csv"
        write_tuning_report([], path, failure="no ultimate gain found up to kp=5")
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[-1] == ["failed", *[""] * 9, "no ultimate gain found up to kp=5"]
        assert len(rows[-1]) == len(REPORT_HEADER)
