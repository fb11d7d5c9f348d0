"""
Tests for the PID law, fuzzy gain scheduling, wheel commands and the autopilot.
"""

import math

import numpy as np
import pytest

from alexsim.control import (
    Autopilot,
    AutopilotConfig,
    AutopilotPhase,
    FuzzyPidController,
    FuzzyScales,
    PidController,
    PidGains,
    Setpoint,
    SetpointId,
    SetpointTable,
    autopilot_step,
    controller_profile,
    default_setpoint_table,
    forward_command,
    fuzzy_pid_update,
    pid_update,
    pwm_saturate,
    schedule_gains,
    steering_command,
)
from alexsim.fuzzy import GainAdjustment
from alexsim.kinematics import ChassisGeometry, forward_kinematics

G = ChassisGeometry()


class TestPid:
    """Discrete PID law."""

    def test_proportional(self) -> None:
        assert pid_update(PidController(PidGains(kp=2.0)), 3.0, 0.01) == 6.0

    def test_integral_rectangular_sum(self) -> None:
        c = PidController(PidGains(ki=1.0))
        for _ in range(10):
            u = pid_update(c, 1.0, 0.1)
        assert u == pytest.approx(1.0)

    def test_zero_gains(self) -> None:
        c = PidController(PidGains())
        assert all(pid_update(c, e, 0.02) == 0.0 for e in (-5.0, 0.0, 12.0))

    def test_derivative_reads_zero_first(self) -> None:
        c = PidController(PidGains(kd=1.0))
        assert pid_update(c, 5.0, 0.1) == 0.0
        assert pid_update(c, 6.0, 0.1) == pytest.approx(10.0)
        c.reset()
        assert pid_update(c, 9.0, 0.1) == 0.0

    def test_output_and_integral_clamped(self) -> None:
        c = PidController(PidGains(ki=1.0), output_limit=10.0)
        for _ in range(100):
            u = pid_update(c, 1.0, 1.0)
        assert u == 10.0
        assert c.integral == 10.0
        # Unwinds immediately once the error reverses.
        assert pid_update(c, -1.0, 1.0) == pytest.approx(9.0)

    def test_rejects_bad_arguments(self) -> None:
        with pytest.raises(ValueError):
            PidController(PidGains(), output_limit=0.0)
        with pytest.raises(ValueError):
            pid_update(PidController(PidGains()), 1.0, 0.0)
        with pytest.raises(ValueError):
            PidGains(kp=-1.0)

    @pytest.mark.parametrize(
        "u, pwm", [(100.4, 100), (400.0, 255), (-400.0, -255), (2.5, 3), (-2.5, -3), (0.0, 0)]
    )
    def test_pwm_saturate(self, u: float, pwm: int) -> None:
        assert pwm_saturate(u) == pwm


class TestFuzzyPid:
    """Gain-scheduled PID."""

    BASE = PidGains(kp=1.0, ki=0.5, kd=0.2)

    def test_zero_scales_match_plain_pid(self) -> None:
        """With every scale at zero the output is bit-identical to plain PID."""
        fuzzy = FuzzyPidController(self.BASE, FuzzyScales(), k_e=0.1, k_ec=0.01)
        plain = PidController(self.BASE)
        errors = np.random.default_rng(1).normal(0.0, 40.0, size=300)
        for e in errors:
            u, gains = fuzzy_pid_update(fuzzy, float(e), 0.02)
            assert u == pid_update(plain, float(e), 0.02)
            assert gains == self.BASE

    def test_steady_state_keeps_kp_and_ki(self) -> None:
        c = FuzzyPidController(self.BASE, FuzzyScales(s_p=0.1, s_i=0.1, s_d=0.1))
        _, gains = c.update(0.0, 1.0)
        assert gains.kp == pytest.approx(self.BASE.kp, abs=1e-9)
        assert gains.ki == pytest.approx(self.BASE.ki, abs=1e-9)
        assert gains.kd == pytest.approx(self.BASE.kd - 0.1, abs=1e-9)

    def test_large_error_and_rate_cut_kp(self) -> None:
        c = FuzzyPidController(self.BASE, FuzzyScales(s_p=0.1))
        c.update(0.0, 1.0)
        _, gains = c.update(3.0, 1.0)
        assert gains.kp < self.BASE.kp

    def test_gains_floored_at_zero(self) -> None:
        out = schedule_gains(
            self.BASE, FuzzyScales(s_p=10.0, s_i=10.0, s_d=10.0), GainAdjustment(-3, -3, -3)
        )
        assert out == PidGains()

    def test_scheduled_integral_does_not_wind_up(self) -> None:
        base = PidGains(kp=0.685, ki=0.0, kd=0.032)
        c = FuzzyPidController(base, FuzzyScales(s_i=0.01))
        for _ in range(20000):
            u, gains = c.update(100.0, 0.01)
        assert u == 255.0
        assert math.isfinite(c.inner.integral_limit)
        assert c.inner.integral <= c.inner.integral_limit
        assert c.inner.integral < 20000.0
        assert gains.ki * c.inner.integral <= 255.0 + 1e-9

    def test_fixed_integral_limit(self) -> None:
        c = FuzzyPidController(self.BASE, FuzzyScales(s_i=0.1), integral_limit=10.0)
        for _ in range(100):
            c.update(50.0, 0.02)
        assert c.inner.integral == 10.0
        assert c.inner.integral_limit == 10.0

    def test_reset(self) -> None:
        c = FuzzyPidController(self.BASE, FuzzyScales(s_p=0.1))
        c.update(0.0, 1.0)
        c.update(3.0, 1.0)
        c.reset()
        assert c.effective_gains == self.BASE
        assert c.inner.first_step


class TestCommands:
    """Decoupled wheel commands."""

    def test_steering(self) -> None:
        assert steering_command(0.0, G) == (0.0, 0.0)
        ws = steering_command(2.0, G)
        assert ws == pytest.approx((-0.2, 0.2))
        assert forward_kinematics(ws, G) == pytest.approx((0.0, 2.0))

    def test_forward(self) -> None:
        assert forward_command(0.0) == (0.0, 0.0)
        assert forward_command(0.5) == (0.5, 0.5)
        assert forward_kinematics(forward_command(0.5), G) == (0.5, 0.0)

    def test_profiles(self) -> None:
        ref = controller_profile("alex-ref")
        assert ref.forward == PidGains(kp=0.685, ki=0.0001, kd=0.032)
        assert ref.steering == PidGains(kp=0.685, ki=0.0, kd=0.032)
        assert controller_profile("field-robot").steering.kp == 20.0
        with pytest.raises(ValueError):
            controller_profile("nope")


def _pilot(**config: int) -> Autopilot:
    gains = controller_profile("alex-ref")
    return Autopilot(
        G,
        360,
        lambda: PidController(gains.forward),
        lambda: PidController(gains.steering),
        AutopilotConfig(**config),
    )


class TestAutopilot:
    """Setpoint legs and the encoder watchdog."""

    def test_forward_target_skips_rotation(self) -> None:
        pilot = _pilot()
        pilot.engage(SetpointId.O_F, default_setpoint_table(), 0, 0)
        assert pilot.state.phase is AutopilotPhase.TRANSLATING

    def test_heading_counts(self) -> None:
        assert _pilot().heading_counts(math.pi / 2) == 300
        assert _pilot().heading_counts(-math.pi / 2) == 300

    def test_rotation_mirrors_command(self) -> None:
        pilot = _pilot()
        pilot.engage(SetpointId.O_L, default_setpoint_table(), 0, 0)
        assert pilot.state.phase is AutopilotPhase.ROTATING
        pilot.step(0, 0, 0.02)
        out = pilot.step(0, 0, 0.02)
        assert out.pwm_r > 0
        assert out.pwm_l == -out.pwm_r

    def test_right_turn_reverses_wheels(self) -> None:
        pilot = _pilot()
        pilot.engage(SetpointId.O_R, default_setpoint_table(), 0, 0)
        pilot.step(0, 0, 0.02)
        out = pilot.step(0, 0, 0.02)
        assert out.pwm_l > 0 > out.pwm_r

    def test_translation_discrepancy_disconnects(self) -> None:
        pilot = _pilot(watchdog_limit=50)
        pilot.engage(SetpointId.O_F, default_setpoint_table(), 0, 0)
        pilot.step(0, 0, 0.02)
        out = pilot.step(100, 10, 0.02)
        assert pilot.state.phase is AutopilotPhase.DISCONNECTED
        assert (out.pwm_l, out.pwm_r) == (0, 0)
        # Absorbing until reset.
        assert pilot.step(0, 0, 0.02)[:2] == (0, 0)
        assert pilot.state.phase is AutopilotPhase.DISCONNECTED
        with pytest.raises(RuntimeError):
            pilot.engage(SetpointId.O_F, default_setpoint_table(), 0, 0)
        pilot.reset()
        assert pilot.state.phase is AutopilotPhase.IDLE

    def test_rotation_drift_disconnects(self) -> None:
        pilot = _pilot(watchdog_limit=50)
        pilot.engage(SetpointId.O_L, default_setpoint_table(), 0, 0)
        pilot.step(40, 40, 0.02)
        assert pilot.state.phase is AutopilotPhase.DISCONNECTED
        assert pilot.state.max_discrepancy == 80

    def test_completion_needs_settled_periods(self) -> None:
        table = SetpointTable(entries={SetpointId.O_F: Setpoint(counts=10)})
        pilot = _pilot(tolerance=5, settle_periods=5)
        pilot.engage(SetpointId.O_F, table, 0, 0)
        for _ in range(4):
            pilot.step(10, 10, 0.02)
            assert pilot.state.phase is AutopilotPhase.TRANSLATING
        out = pilot.step(10, 10, 0.02)
        assert pilot.state.phase is AutopilotPhase.IDLE
        assert (out.pwm_l, out.pwm_r) == (0, 0)

    def test_progress_is_relative_to_engage(self) -> None:
        table = SetpointTable(entries={SetpointId.O_F: Setpoint(counts=10)})
        pilot = _pilot(settle_periods=1)
        pilot.engage(SetpointId.O_F, table, 500, 700)
        pilot.step(510, 710, 0.02)
        assert pilot.state.phase is AutopilotPhase.IDLE

    def test_functional_entry_point(self) -> None:
        pilot = _pilot()
        table = default_setpoint_table()
        (pwm_l, pwm_r), state = autopilot_step(pilot, 0, 0, SetpointId.O_F, table, 0.02)
        assert state.phase is AutopilotPhase.TRANSLATING
        assert state.target is SetpointId.O_F
        assert (pwm_l, pwm_r) == (0, 0)
        with pytest.raises(ValueError):
            autopilot_step(pilot, 0, 0, "O_X", table, 0.02)  # type: ignore[arg-type]

    def test_setpoint_validation(self) -> None:
        with pytest.raises(ValueError):
            Setpoint(counts=0)
        with pytest.raises(ValueError):
            Setpoint(counts=10, heading=-math.pi)
        with pytest.raises(ValueError):
            SetpointTable(entries={SetpointId.O_F: Setpoint(counts=10)}).get(SetpointId.O_B)
