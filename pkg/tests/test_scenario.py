"""Economics primitives, scenario validation, and file round-trips."""

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtce import defaults
from gtce.pipeline import scenario_digest
from gtce.scenario import (
    CostTable,
    Options,
    Scenario,
    ThermalUnit,
    Zone,
    annualize,
    co2_price,
    crf,
    load_scenario,
    marginal_cost,
    validate,
)
from gtce.synth import displacement_toy, sweep_toy, write_scenario


def annuity_by_discounted_sum(interest: float, years: int) -> float:
    """Independent route: the payment whose discounted sum repays 1."""
    pv = sum(1.0 / (1.0 + interest) ** t for t in range(1, years + 1))
    return 1.0 / pv


class TestCrf:
    def test_study_recovery_factors(self):
        # the two financing packages used throughout the study
        assert crf(0.06, 27) == pytest.approx(0.0757, abs=5e-4)
        assert crf(0.05, 40) == pytest.approx(0.0583, abs=5e-4)

    def test_matches_discounted_sum(self):
        for i, n in [(0.06, 27), (0.05, 40), (0.01, 1), (0.12, 8)]:
            assert crf(i, n) == pytest.approx(annuity_by_discounted_sum(i, n), rel=1e-12)

    @given(st.floats(0.005, 0.3), st.integers(1, 60))
    @settings(max_examples=60, deadline=None)
    def test_bounds_and_monotonicity(self, i, n):
        v = crf(i, n)
        # repayment must at least cover interest, and a 1-year loan costs 1+i
        assert i < v <= 1.0 + i + 1e-12
        assert v >= crf(i, n + 1) - 1e-12  # longer lifetime, smaller annuity

    def test_domain(self):
        with pytest.raises(ValueError):
            crf(0.0, 10)
        with pytest.raises(ValueError):
            crf(1.5, 10)
        with pytest.raises(ValueError):
            crf(0.05, 0)

    def test_annualize(self):
        assert annualize(1000.0, 0.08, 0.01) == pytest.approx(90.0)
        with pytest.raises(ValueError):
            annualize(-1.0, 0.08)


class TestCostTable:
    def test_converter_flavors(self):
        c = CostTable()
        # the multi-terminal converter throughput block is a sixth of ac-dc
        assert c.c_c_varp_dcdc == pytest.approx(c.c_c_varp_acdc / 6.0)
        assert c.c_c_varp_acdc == pytest.approx(750.0)

    def test_recovery_properties(self):
        c = CostTable()
        assert c.crf_owp == pytest.approx(crf(0.06, 27))
        assert c.crf_hvdc == pytest.approx(crf(0.05, 40))

    def test_frozen(self):
        with pytest.raises(dataclasses.FrozenInstanceError):
            CostTable().co2_eur_t = 1.0  # type: ignore[misc]


class TestMarginalCost:
    def test_gas_by_hand(self):
        u = ThermalUnit("g", "Z", 1.0, efficiency=0.55, fuel="natural_gas", om_eur_mwh=2.0)
        expected = (24.9 + 0.20 * 53.0) / 0.55 + 2.0
        assert marginal_cost(u, CostTable()) == pytest.approx(expected)

    def test_coal_with_multiplier(self):
        u = ThermalUnit("c", "Z", 1.0, efficiency=0.40, fuel="hard_coal")
        expected = (15.5 + 0.34 * 53.0 * 2.0) / 0.40
        assert marginal_cost(u, CostTable(), co2_multiplier=2.0) == pytest.approx(expected)

    def test_res_ignores_fuel_math(self):
        u = ThermalUnit("r", "Z", 1.0, fuel="res", om_eur_mwh=7.5)
        assert marginal_cost(u, CostTable(), co2_multiplier=9.0) == 7.5

    def test_co2_price_scaling(self):
        c = CostTable()
        assert co2_price(c, 0.0) == 0.0
        assert co2_price(c, 2.5) == pytest.approx(53.0 * 2.5)
        with pytest.raises(ValueError):
            co2_price(c, -0.1)

    @given(st.floats(0.0, 5.0))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_multiplier(self, m):
        u = ThermalUnit("c", "Z", 1.0, efficiency=0.4, fuel="lignite")
        base = marginal_cost(u, CostTable(), 0.0)
        assert marginal_cost(u, CostTable(), m) >= base - 1e-12


def tiny_scenario() -> Scenario:
    zones = [
        Zone("M1", "mainland", 6.0, 53.5),
        Zone("F1", "offshore", 5.0, 54.5, available_gw=2.0),
    ]
    units = [ThermalUnit("u1", "M1", 1.0, 0.5, "natural_gas")]
    return Scenario(
        name="tiny",
        zones=zones,
        units=units,
        loads={"M1": np.ones(168)},
        res={},
        wind={"F1": np.full(168, 9.0)},
    )


class TestValidate:
    def test_clean(self):
        assert validate(tiny_scenario()) == []

    def test_duplicate_zone(self):
        scn = tiny_scenario()
        scn.zones.append(scn.zones[0])
        assert any("not unique" in v for v in validate(scn))

    def test_unit_in_offshore_zone(self):
        scn = tiny_scenario()
        scn.units.append(ThermalUnit("bad", "F1", 1.0, 0.5, "natural_gas"))
        assert any("mainland" in v for v in validate(scn))

    def test_unknown_fuel(self):
        scn = tiny_scenario()
        scn.units.append(ThermalUnit("bad", "M1", 1.0, 0.5, "plutonium"))
        assert any("fuel" in v for v in validate(scn))

    def test_bad_efficiency(self):
        scn = tiny_scenario()
        scn.units.append(ThermalUnit("bad", "M1", 1.0, 1.5, "natural_gas"))
        assert any("efficiency" in v for v in validate(scn))

    def test_synth_scenarios_are_clean(self):
        assert validate(sweep_toy()) == []
        assert validate(displacement_toy()) == []


class TestRoundTrip:
    def test_write_then_load_preserves_digest(self, tmp_path):
        scn = sweep_toy()
        write_scenario(scn, tmp_path)
        back = load_scenario(tmp_path / "scenario.json")
        assert validate(back) == []
        assert scenario_digest(back) == scenario_digest(scn)

    def test_series_values_survive(self, tmp_path):
        scn = displacement_toy()
        write_scenario(scn, tmp_path)
        back = load_scenario(tmp_path / "scenario.json")
        np.testing.assert_allclose(back.loads["D1"], scn.loads["D1"])
        np.testing.assert_allclose(back.wind["F1"], scn.wind["F1"])
        assert back.wind_kind == scn.wind_kind

    def test_multiplier_override(self):
        scn = tiny_scenario()
        scn2 = scn.with_co2_multiplier(1.8)
        assert scn2.co2_multiplier == 1.8
        assert scn.co2_multiplier == 1.0
        assert scenario_digest(scn2) != scenario_digest(scn)


class TestDefaults:
    def test_year_lengths(self):
        assert defaults.MODEL_YEAR_H == 52 * 168 == 8736
        assert defaults.CALENDAR_YEAR_H == 8760

    def test_fuel_tables_aligned(self):
        assert set(defaults.FUEL_PRICES_EUR_MWH_TH) == set(defaults.EMISSION_FACTORS_T_MWH_TH)
