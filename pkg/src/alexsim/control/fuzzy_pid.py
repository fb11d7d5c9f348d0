"""
Fuzzy gain-scheduled PID.

Every period the error and its rate are run through the three rule tables;
the defuzzified adjustments move each gain away from its base value by
``scale * adjustment`` and the result is floored at zero. An inner PID
controller then runs with those effective gains.
"""

import math
from typing import Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from alexsim.control.pid import PidController, PidGains
from alexsim.fuzzy.engine import FuzzyInference, GainAdjustment
from alexsim.fuzzy.membership import LinguisticVariable
from alexsim.fuzzy.rules import RuleTable, kd_rules, ki_rules, kp_rules


class FuzzyScales(BaseModel):
    """Gain change per universe unit of fuzzy adjustment."""

    model_config = ConfigDict(frozen=True)

    s_p: float = Field(default=0.0, ge=0.0)
    s_i: float = Field(default=0.0, ge=0.0)
    s_d: float = Field(default=0.0, ge=0.0)


def schedule_gains(base: PidGains, scales: FuzzyScales, delta: GainAdjustment) -> PidGains:
    return PidGains(
        kp=max(0.0, base.kp + scales.s_p * delta.d_kp),
        ki=max(0.0, base.ki + scales.s_i * delta.d_ki),
        kd=max(0.0, base.kd + scales.s_d * delta.d_kd),
    )


class FuzzyPidController:
    """
    PID controller whose gains are retuned online by fuzzy rules.

    Args:
        base_gains: Gains before scheduling
        scales: Per-gain scheduling strength; all zero reproduces plain PID
        k_e: Error quantization gain
        k_ec: Error-rate quantization gain, applied to the raw rate
        tables: kp, ki and kd rule tables; the shipped tables by default
        output_limit: Symmetric bound on the control signal
        integral_limit: Fixed bound on the accumulated error. By default the
            bound follows the scheduled gain, ``output_limit / ki`` each
            period, and falls back to the largest ki the rules can reach
            while the scheduled ki is zero
    """

    def __init__(
        self,
        base_gains: PidGains,
        scales: FuzzyScales,
        k_e: float = 1.0,
        k_ec: float = 1.0,
        tables: Optional[Sequence[RuleTable]] = None,
        e_var: Optional[LinguisticVariable] = None,
        ec_var: Optional[LinguisticVariable] = None,
        out_vars: Optional[Sequence[LinguisticVariable]] = None,
        output_limit: float = 255.0,
        integral_limit: Optional[float] = None,
    ):
        self.base_gains = base_gains
        self.scales = scales
        self.inference = FuzzyInference(
            tables or (kp_rules(), ki_rules(), kd_rules()),
            k_e=k_e,
            k_ec=k_ec,
            e_var=e_var,
            ec_var=ec_var,
            out_vars=out_vars,
        )
        self.inner = PidController(
            base_gains, output_limit=output_limit, integral_limit=integral_limit
        )
        self.effective_gains = base_gains
        self.fixed_integral_limit = integral_limit
        ki_var = self.inference.out_vars[1]
        self.ki_ceiling = base_gains.ki + scales.s_i * max(abs(ki_var.lo), abs(ki_var.hi))

    def _integral_bound(self, ki: float) -> float:
        if self.fixed_integral_limit is not None:
            return self.fixed_integral_limit
        if ki > 0.0:
            return self.inner.output_limit / ki
        if self.ki_ceiling > 0.0:
            return self.inner.output_limit / self.ki_ceiling
        return math.inf

    def reset(self) -> None:
        self.inner.reset()
        self.effective_gains = self.base_gains

    def update(self, error: float, dt: float) -> Tuple[float, PidGains]:
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        rate = 0.0 if self.inner.first_step else (error - self.inner.prev_error) / dt
        delta = self.inference.evaluate(error, rate)
        self.effective_gains = schedule_gains(self.base_gains, self.scales, delta)
        self.inner.integral_limit = self._integral_bound(self.effective_gains.ki)
        return self.inner.update(error, dt, self.effective_gains), self.effective_gains

    def step(self, error: float, dt: float) -> Tuple[float, PidGains]:
        return self.update(error, dt)


def fuzzy_pid_update(c: FuzzyPidController, error: float, dt: float) -> Tuple[float, PidGains]:
    return c.update(error, dt)
