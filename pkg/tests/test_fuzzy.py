"""
Tests for membership functions, rule tables and Mamdani inference.
"""

from pathlib import Path
from typing import Callable

import numpy as np
import pytest
from scipy.integrate import trapezoid

from alexsim.errors import NoRuleFiredError
from alexsim.fuzzy import (
    GRID_CHECKSUMS,
    TERMS,
    FuzzyInference,
    LinguisticTerm,
    LinguisticVariable,
    MembershipFunction,
    RuleTable,
    Shoulder,
    TermDegrees,
    control_surface,
    defuzzify_centroid,
    dump_rule_grid,
    evaluate_rules,
    fuzzify,
    grid_checksum,
    grid_resource,
    infer,
    kd_rules,
    ki_rules,
    kp_rules,
    load_rule_grid,
    standard_variable,
)

# Rule tables as published, row by row (EC from NB to PB), E from NB to PB.
KP_TABLE = """
PB PB PM PM PS ZO ZO
PB PB PM PS PS ZO NS
PM PM PM PS ZO NS NS
PM PM PS ZO NS NM NM
PS PS ZO NS NS NM NM
PS ZO NS NM NM NM NB
ZO ZO NM NM NM NB NB
"""
KI_TABLE = """
NB NB NB NB NM ZO ZO
NB NB NB NB NM ZO ZO
NM NM NM NM ZO PS PS
NM NM NS ZO PS PM PM
NS NS ZO PM PM PM PM
ZO ZO PM PB PB PB PB
ZO ZO PM PB PB PB PB
"""
KD_TABLE = """
PS NS NB NB NB NM PS
PS NS NB NM NM NS ZO
ZO NS NM NM NS NS ZO
ZO NS NS NS NS NS ZO
ZO ZO ZO ZO ZO ZO ZO
PB NS PS PS PS PS PB
PB PM PM PM PS PS PB
"""

E = standard_variable(name="E")


def _degrees(**kw: float) -> TermDegrees:
    return TermDegrees(**kw)


def _oracle_centroid(agg: TermDegrees, samples: int = 100_001) -> float:
    """Dense trapezoid integration with independently built triangles."""
    xs = np.linspace(-3.0, 3.0, samples)
    mu = np.zeros_like(xs)
    for k, degree in enumerate(agg):
        if degree > 0.0:
            tri = np.clip(1.0 - np.abs(xs - (k - 3)), 0.0, 1.0)
            mu = np.maximum(mu, np.minimum(tri, degree))
    return float(trapezoid(xs * mu, xs) / trapezoid(mu, xs))


class TestMembership:
    """Triangles, shoulders and the standard partition."""

    def test_triangle(self) -> None:
        mf = MembershipFunction(a=0.0, b=1.0, c=3.0)
        assert mf(-1.0) == 0.0
        assert mf(0.5) == pytest.approx(0.5)
        assert mf(1.0) == 1.0
        assert mf(2.0) == pytest.approx(0.5)
        assert mf(3.0) == 0.0

    def test_shoulders(self) -> None:
        left = MembershipFunction(a=-1.0, b=0.0, c=1.0, shoulder=Shoulder.LEFT)
        right = MembershipFunction(a=-1.0, b=0.0, c=1.0, shoulder=Shoulder.RIGHT)
        assert left(-100.0) == 1.0
        assert left(0.5) == pytest.approx(0.5)
        assert right(100.0) == 1.0
        assert right(-0.5) == pytest.approx(0.5)

    def test_rejects_unordered_corners(self) -> None:
        with pytest.raises(ValueError):
            MembershipFunction(a=1.0, b=0.0, c=2.0)

    def test_sample_matches_pointwise(self) -> None:
        xs = np.linspace(-3.0, 3.0, 241)
        for mf in E.terms:
            assert np.allclose(mf.sample(xs), [mf(float(x)) for x in xs], atol=1e-12)

    def test_partition_of_unity(self) -> None:
        for x in np.linspace(-3.0, 3.0, 601):
            assert sum(fuzzify(E, float(x))) == pytest.approx(1.0, abs=1e-12)

    def test_fuzzify_examples(self) -> None:
        assert fuzzify(E, 0.0) == _degrees(ZO=1.0)
        assert fuzzify(E, 0.5) == pytest.approx(tuple(_degrees(ZO=0.5, PS=0.5)))
        assert fuzzify(E, 7.0) == _degrees(PB=1.0)
        assert fuzzify(E, -7.0) == _degrees(NB=1.0)
        # Shoulders already saturate outside the universe.
        assert fuzzify(E, 7.0, clamp=False) == _degrees(PB=1.0)

    def test_variable_validation(self) -> None:
        with pytest.raises(ValueError):
            LinguisticVariable(lo=1.0, hi=1.0, terms=E.terms)
        with pytest.raises(ValueError):
            LinguisticVariable(lo=-3.0, hi=3.0, terms=E.terms[:6])
        with pytest.raises(ValueError):
            LinguisticVariable(lo=-3.0, hi=3.0, terms=tuple(reversed(E.terms)))

    def test_standard_variable_peaks(self) -> None:
        v = standard_variable(-6.0, 6.0)
        assert [mf.b for mf in v.terms] == pytest.approx([-6, -4, -2, 0, 2, 4, 6])
        assert v.width == 12.0


class TestRuleTables:
    """Shipped rule grids."""

    @pytest.mark.parametrize(
        "factory, published",
        [(kp_rules, KP_TABLE), (ki_rules, KI_TABLE), (kd_rules, KD_TABLE)],
    )
    def test_cells_match_published_tables(
        self, factory: Callable[[], RuleTable], published: str
    ) -> None:
        table = factory()
        rows = [line.split() for line in published.strip().splitlines()]
        for ec in TERMS:
            for e in TERMS:
                assert table.lookup(ec, e).value == rows[ec.index][e.index], (ec, e)

    def test_selected_cells(self) -> None:
        T = LinguisticTerm
        assert kp_rules().lookup(T.PM, T.PB) is T.NB
        assert ki_rules().lookup(T.NB, T.PS) is T.NM
        assert all(kd_rules().lookup(T.PS, e) is T.ZO for e in TERMS)

    @pytest.mark.parametrize("filename", sorted(GRID_CHECKSUMS))
    def test_checksums(self, filename: str) -> None:
        assert grid_checksum(grid_resource(filename)) == GRID_CHECKSUMS[filename]

    @pytest.mark.parametrize("filename", sorted(GRID_CHECKSUMS))
    def test_dump_reproduces_file(self, filename: str) -> None:
        text = grid_resource(filename)
        assert dump_rule_grid(load_rule_grid(text)) == text

    def test_load_from_path(self, tmp_path: Path) -> None:
        path = tmp_path / "kp.grid"
        path.write_text(grid_resource("kp.grid"), encoding="utf-8")
        assert load_rule_grid(path).cells == kp_rules().cells

    def test_rejects_bad_grids(self) -> None:
        text = grid_resource("kp.grid")
        with pytest.raises(ValueError):
            load_rule_grid(text.replace("EC\\E", "E\\EC"))
        with pytest.raises(ValueError):
            load_rule_grid("\n".join(text.splitlines()[:-1]))
        with pytest.raises(ValueError):
            load_rule_grid(text.replace("PB PB PM", "PB XX PM", 1))


class TestInference:
    """Min-max rule composition."""

    def test_single_cells(self) -> None:
        assert infer(kp_rules(), _degrees(NB=1.0), _degrees(NB=1.0)) == _degrees(PB=1.0)
        assert infer(kd_rules(), _degrees(ZO=1.0), _degrees(ZO=1.0)) == _degrees(NS=1.0)

    def test_two_active_rules(self) -> None:
        out = infer(kp_rules(), _degrees(ZO=0.5, PS=0.5), _degrees(ZO=1.0))
        assert out == _degrees(ZO=0.5, NS=0.5)

    def test_min_of_antecedents(self) -> None:
        out = infer(kp_rules(), _degrees(NB=0.3), _degrees(NB=0.8))
        assert out == _degrees(PB=0.3)


class TestCentroid:
    """Centroid defuzzification."""

    def test_zero_term_is_centered(self) -> None:
        assert defuzzify_centroid(E, _degrees(ZO=1.0)) == pytest.approx(0.0, abs=1e-9)

    def test_scaling_single_symmetric_term(self) -> None:
        for k in (1.0, 0.6, 0.1):
            assert defuzzify_centroid(E, _degrees(ZO=k)) == pytest.approx(0.0, abs=1e-9)

    def test_shoulder_region(self) -> None:
        # Rising edge of PB up to the universe edge: centroid one third in.
        assert defuzzify_centroid(E, _degrees(PB=1.0)) == pytest.approx(3.0 - 1.0 / 3.0)

    def test_between_peaks(self) -> None:
        x = defuzzify_centroid(E, _degrees(NS=0.5, ZO=0.5))
        assert -1.0 < x < 0.0

    def test_no_rule_fired(self) -> None:
        with pytest.raises(NoRuleFiredError, match="no rule fired"):
            defuzzify_centroid(E, TermDegrees())

    def test_matches_dense_oracle(self) -> None:
        """Agreement with a dense independent integration on random degree vectors."""
        rng = np.random.default_rng(8)
        tolerance = 1e-6 * E.width
        for _ in range(500):
            raw = rng.uniform(0.0, 1.0, size=7)
            raw[rng.uniform(size=7) < 0.4] = 0.0
            if not raw.any():
                raw[3] = 0.5
            agg = TermDegrees(*raw)
            assert defuzzify_centroid(E, agg) == pytest.approx(
                _oracle_centroid(agg), abs=tolerance
            )


class TestGainScheduling:
    """The full error/error-rate pipeline."""

    TABLES = (kp_rules(), ki_rules(), kd_rules())

    def test_zero_point(self) -> None:
        """Zero error and rate fire only the (ZO, ZO) cells."""
        d = evaluate_rules(0.0, 0.0, self.TABLES)
        assert abs(d.d_kp) <= 0.5
        assert abs(d.d_ki) <= 0.5
        assert d.d_kp == pytest.approx(0.0, abs=1e-9)
        assert d.d_ki == pytest.approx(0.0, abs=1e-9)
        assert d.d_kd == pytest.approx(-1.0, abs=1e-9)

    def test_large_positive_inputs_cut_kp(self) -> None:
        assert evaluate_rules(3.0, 3.0, self.TABLES).d_kp < -2.0

    def test_large_negative_inputs_raise_kp(self) -> None:
        assert evaluate_rules(-3.0, -3.0, self.TABLES).d_kp > 2.0

    def test_quantization_gains(self) -> None:
        engine = FuzzyInference(self.TABLES, k_e=0.5, k_ec=0.25)
        assert engine.evaluate(2.0, 4.0) == engine.evaluate_scaled(1.0, 1.0)

    def test_rejects_wrong_table_count(self) -> None:
        with pytest.raises(ValueError):
            FuzzyInference(self.TABLES[:2])

    def test_control_surface(self) -> None:
        surface = control_surface(kd_rules(), n=61)
        assert surface.shape == (61, 61)
        assert surface[30, 30] == pytest.approx(-1.0, abs=1e-9)
        assert np.all((surface >= -3.0) & (surface <= 3.0))
        with pytest.raises(ValueError):
            control_surface(kd_rules(), n=1)
