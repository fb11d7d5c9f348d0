"""
Mamdani inference and centroid defuzzification.

Rules fire with the minimum of their antecedent degrees; each output term
keeps the maximum firing strength among the rules that conclude it. The
aggregated output is the pointwise maximum of every term clipped at its
degree, reduced to a crisp value by its center of mass.
"""

from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from alexsim.config import get_settings
from alexsim.errors import NoRuleFiredError
from alexsim.fuzzy.membership import (
    TERMS,
    LinguisticVariable,
    Shoulder,
    TermDegrees,
    fuzzify,
    standard_variable,
)
from alexsim.fuzzy.rules import RuleTable


class GainAdjustment(NamedTuple):
    """Defuzzified adjustments for the three PID gains, in universe units."""

    d_kp: float
    d_ki: float
    d_kd: float


def infer(rules: RuleTable, e: TermDegrees, ec: TermDegrees) -> TermDegrees:
    """Min-max composition of two fuzzified inputs through a rule table."""
    out = [0.0] * len(TERMS)
    active_e = list(e.active())
    for ec_term, ec_deg in ec.active():
        row = rules.cells[ec_term.index]
        for e_term, e_deg in active_e:
            strength = e_deg if e_deg < ec_deg else ec_deg
            k = row[e_term.index].index
            if strength > out[k]:
                out[k] = strength
    return TermDegrees(*out)


def aggregate(v: LinguisticVariable, agg: TermDegrees, xs: np.ndarray) -> np.ndarray:
    """Pointwise maximum of every term clipped at its degree, sampled on ``xs``."""
    mu = np.zeros_like(xs)
    for term, degree in agg.active():
        np.fmax(mu, np.fmin(v.mf(term).sample(xs), degree), out=mu)
    return mu


def _edges(v: LinguisticVariable) -> List[Tuple[float, float, float, float]]:
    # Sloped edges as (x0, y0, x1, y1).
    edges = []
    for mf in v.terms:
        if mf.shoulder is not Shoulder.LEFT and mf.b > mf.a:
            edges.append((mf.a, 0.0, mf.b, 1.0))
        if mf.shoulder is not Shoulder.RIGHT and mf.c > mf.b:
            edges.append((mf.b, 1.0, mf.c, 0.0))
    return edges


@lru_cache(maxsize=64)
def _static_points(v: LinguisticVariable, samples: int) -> np.ndarray:
    """Uniform grid plus the corners and mutual edge crossings of all terms."""
    points = [v.grid(samples), v.breakpoints()]
    edges = _edges(v)
    for i, (ax0, ay0, ax1, ay1) in enumerate(edges):
        sa = (ay1 - ay0) / (ax1 - ax0)
        for bx0, by0, bx1, by1 in edges[i + 1 :]:
            sb = (by1 - by0) / (bx1 - bx0)
            if sa == sb:
                continue
            x = (by0 - ay0 + sa * ax0 - sb * bx0) / (sa - sb)
            if max(ax0, bx0) <= x <= min(ax1, bx1):
                points.append(np.array([x]))
    pts = np.unique(np.concatenate(points))
    return pts[(pts >= v.lo) & (pts <= v.hi)]


def _level_points(v: LinguisticVariable, agg: TermDegrees) -> np.ndarray:
    # Where any edge meets the clip level of a fired term.
    pts = [
        x
        for _, level in agg.active()
        if level < 1.0
        for mf in v.terms
        for x in mf.level_crossings(level)
        if v.lo <= x <= v.hi
    ]
    return np.array(pts, dtype=float)


def defuzzify_centroid(
    v: LinguisticVariable, agg: TermDegrees, samples: Optional[int] = None
) -> float:
    """
    Center of mass of the aggregated output set.

    The set is sampled on a uniform grid merged with all of its corner
    points, so the piecewise-linear integral is exact.

    Raises:
        NoRuleFiredError: if every degree is zero
    """
    if not any(d > 0.0 for d in agg):
        raise NoRuleFiredError()
    samples = samples or get_settings().fuzzy.centroid_samples

    xs = np.unique(np.concatenate([_static_points(v, samples), _level_points(v, agg)]))
    mu = aggregate(v, agg, xs)

    x0, x1 = xs[:-1], xs[1:]
    f0, f1 = mu[:-1], mu[1:]
    h = x1 - x0
    area = float(np.sum(h * (f0 + f1)) / 2.0)
    if area <= 0.0:
        raise NoRuleFiredError()
    moment = float(np.sum(h * (x0 * (2.0 * f0 + f1) + x1 * (f0 + 2.0 * f1))) / 6.0)
    return min(max(moment / area, v.lo), v.hi)


class FuzzyInference:
    """
    The full gain-scheduling pipeline: scale, fuzzify, infer, defuzzify.

    Crisp error and error rate are multiplied by the quantization gains
    ``k_e`` and ``k_ec`` before fuzzification; values outside the input
    universes are clamped.
    """

    def __init__(
        self,
        tables: Sequence[RuleTable],
        k_e: float = 1.0,
        k_ec: float = 1.0,
        e_var: Optional[LinguisticVariable] = None,
        ec_var: Optional[LinguisticVariable] = None,
        out_vars: Optional[Sequence[LinguisticVariable]] = None,
        samples: Optional[int] = None,
    ):
        if len(tables) != 3:
            raise ValueError(f"need kp, ki and kd tables, got {len(tables)}")
        self.tables = tuple(tables)
        self.k_e = k_e
        self.k_ec = k_ec
        self.e_var = e_var or standard_variable(name="E")
        self.ec_var = ec_var or standard_variable(name="EC")
        self.out_vars = tuple(out_vars) if out_vars else tuple(
            standard_variable(name=n) for n in ("dKp", "dKi", "dKd")
        )
        if len(self.out_vars) != 3:
            raise ValueError(f"need three output variables, got {len(self.out_vars)}")
        self.samples = samples or get_settings().fuzzy.centroid_samples

    def evaluate_scaled(self, e: float, ec: float) -> GainAdjustment:
        """Adjustments for inputs already expressed in universe units."""
        de = fuzzify(self.e_var, e)
        dec = fuzzify(self.ec_var, ec)
        out = [
            defuzzify_centroid(var, infer(table, de, dec), self.samples)
            for table, var in zip(self.tables, self.out_vars)
        ]
        return GainAdjustment(*out)

    def evaluate(self, error: float, error_rate: float) -> GainAdjustment:
        return self.evaluate_scaled(self.k_e * error, self.k_ec * error_rate)


def evaluate_rules(
    e: float,
    ec: float,
    tables: Sequence[RuleTable],
    k_e: float = 1.0,
    k_ec: float = 1.0,
) -> GainAdjustment:
    """One-shot evaluation of the gain-scheduling pipeline."""
    return FuzzyInference(tables, k_e=k_e, k_ec=k_ec).evaluate(e, ec)


def control_surface(
    table: RuleTable,
    e_var: Optional[LinguisticVariable] = None,
    ec_var: Optional[LinguisticVariable] = None,
    out_var: Optional[LinguisticVariable] = None,
    n: int = 61,
) -> np.ndarray:
    """
    Defuzzified output over an ``n`` x ``n`` grid of the input universes.

    Row ``i`` holds the ``i``-th EC value, column ``j`` the ``j``-th E value.
    """
    if n < 2:
        raise ValueError(f"surface needs at least 2 points per axis, got {n}")
    e_var = e_var or standard_variable(name="E")
    ec_var = ec_var or standard_variable(name="EC")
    out_var = out_var or standard_variable(name="out")

    e_axis = e_var.grid(n)
    ec_axis = ec_var.grid(n)
    e_degrees = [fuzzify(e_var, float(x)) for x in e_axis]
    surface = np.empty((n, n))
    for i, ec in enumerate(ec_axis):
        dec = fuzzify(ec_var, float(ec))
        for j, de in enumerate(e_degrees):
            surface[i, j] = defuzzify_centroid(out_var, infer(table, de, dec))
    return surface
