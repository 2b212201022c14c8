"""Randomized miniature planning scenarios, small enough that the full
investment model can be brute-forced by integer enumeration."""

from __future__ import annotations

import numpy as np

from gtce.scenario import CostTable, Options, Scenario, ThermalUnit, Zone
from gtce.timeclust import RepresentativeWeeks, representative_weeks_from_arrays

FUELS = ["hard_coal", "natural_gas", "mixed"]


def random_toy(
    rng: np.random.Generator,
    index: int = 0,
    weeks_shape: tuple[int, int] = (1, 6),
) -> tuple[Scenario, RepresentativeWeeks]:
    """A 2-mainland / 1-2-offshore scenario with at most ~6 integer vars.

    Costs are drawn at toy scale so that the optimum sometimes builds
    nothing, sometimes a partial system, and sometimes maxes out.
    ``weeks_shape`` is (number of weeks, hours per week).
    """
    two_obz = index % 3 == 0
    n_weeks, hours = weeks_shape
    samples = n_weeks * hours
    ml = [
        Zone("A", "mainland", 6.0, 53.5, landing_cap_gw=float(rng.uniform(1.5, 3.0))),
        Zone("B", "mainland", 4.5, 52.5, landing_cap_gw=float(rng.uniform(1.5, 3.0))),
    ]
    obz = [Zone("F1", "offshore", 5.2, 54.6, available_gw=float(rng.uniform(1.0, 2.5)))]
    if two_obz:
        obz.append(Zone("F2", "offshore", 6.6, 55.0, available_gw=float(rng.uniform(0.8, 2.0))))

    units = [
        ThermalUnit("A_coal", "A", float(rng.uniform(0.8, 2.0)),
                    float(rng.uniform(0.35, 0.45)), "hard_coal", float(rng.uniform(0, 4))),
        ThermalUnit("B_gas", "B", float(rng.uniform(0.8, 2.2)),
                    float(rng.uniform(0.45, 0.60)), "natural_gas", float(rng.uniform(0, 4))),
    ]
    if index % 4 == 1:
        units.append(
            ThermalUnit("A_peak", "A", float(rng.uniform(0.3, 1.0)),
                        float(rng.uniform(0.30, 0.40)), "mixed", float(rng.uniform(0, 6)))
        )
    if index % 5 == 0:
        units.append(ThermalUnit("B_hydro", "B", float(rng.uniform(0.2, 0.8)), 1.0, "hydro", 0.0))

    costs = CostTable(
        c_b_fix=float(rng.uniform(1.0, 15.0)),
        c_b_on_varl=float(rng.uniform(0.2, 1.5)),
        c_b_off_varl=float(rng.uniform(0.3, 2.0)),
        c_b_on_varlp=float(rng.uniform(0.002, 0.02)),
        c_b_off_varlp=float(rng.uniform(0.002, 0.03)),
        c_c_fix=float(rng.uniform(2.0, 30.0)),
        c_c_varp_acdc=float(rng.uniform(5.0, 40.0)),
        c_c_varp_dcdc=float(rng.uniform(2.0, 10.0)),
        c_ntc_varl=float(rng.uniform(0.2, 1.5)),
        c_ntc_varlp=float(rng.uniform(0.002, 0.02)),
        c_owp_varp_meur_mw=float(rng.uniform(0.02, 0.25)),
        ntc_step_gw=1.0,
    )
    options = Options(
        max_steps_per_arc=2,
        ntc_add_max_gw=1.0,
        onshore_expandable=(("A", "B"),) if index % 2 == 0 else (),
    )

    mask = None
    rules = {"mainland": ["A", "B"], "obz_obz": False}
    if two_obz:
        mask = [("F1", "A"), ("F1", "B"), ("F2", "A")]
        rules = None

    load_a = rng.uniform(0.8, 2.6, size=samples)
    load_b = rng.uniform(0.6, 2.2, size=samples)
    res_b = rng.uniform(0.0, 0.5, size=samples) if index % 2 == 1 else np.zeros(samples)
    series = {
        "load_A": load_a,
        "load_B": load_b,
        "res_B": res_b,
        "cf_F1": np.clip(rng.uniform(0.1, 1.0, size=samples), 0.0, 1.0),
    }
    if two_obz:
        series["cf_F2"] = np.clip(rng.uniform(0.1, 1.0, size=samples), 0.0, 1.0)

    ids = sorted(series)
    profiles = np.stack([series[k] for k in ids], axis=1).reshape(n_weeks, hours, len(ids))
    wts = [52 // n_weeks] * n_weeks
    for i in range(52 - sum(wts)):
        wts[i] += 1
    weeks = representative_weeks_from_arrays(profiles, ids, weights=wts, hours_per_week=hours)

    scn = Scenario(
        name=f"toy{index}",
        zones=ml + obz,
        units=units,
        costs=costs,
        options=options,
        co2_multiplier=float(rng.choice([0.5, 1.0, 2.0])),
        ntc={"A": {"B": float(rng.uniform(0.3, 1.2))}},
        mask_pairs=mask or [],
        connection_rules=rules,
    )
    return scn, weeks
