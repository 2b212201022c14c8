"""Deterministic synthetic inputs: weather years, load profiles, demo scenarios.

Everything is driven by a single integer seed so fixtures regenerate
byte-identically.  The North Sea site set is a hand-laid polygon family
whose grid-node spread, clustered at the default 70 km radius, lands in
the twenties of converter positions.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import defaults
from .scenario import CandidateSite, CostTable, Options, Scenario, ThermalUnit, Zone

HOURS_PER_YEAR = 8760


def ar1(rng: np.random.Generator, n: int, phi: float, sigma: float) -> np.ndarray:
    """Stationary AR(1) noise with autocorrelation phi."""
    eps = rng.normal(0.0, sigma, n)
    out = np.empty(n)
    out[0] = eps[0] / np.sqrt(max(1.0 - phi * phi, 1e-12))
    for t in range(1, n):
        out[t] = phi * out[t - 1] + eps[t]
    return out


def wind_speed_series(
    rng: np.random.Generator,
    n_hours: int,
    base: float = 9.8,
    seasonal_amp: float = 2.4,
    phi: float = 0.97,
    sigma: float = 0.85,
) -> np.ndarray:
    """Hourly wind speeds: seasonal swell plus persistent AR(1) weather."""
    h = np.arange(n_hours)
    season = seasonal_amp * np.cos(2.0 * np.pi * (h - 360.0) / HOURS_PER_YEAR)
    yearly = np.repeat(
        rng.normal(0.0, 0.5, int(np.ceil(n_hours / HOURS_PER_YEAR))), HOURS_PER_YEAR
    )[:n_hours]
    v = base + season + yearly + ar1(rng, n_hours, phi, sigma)
    return np.clip(v, 0.0, None)


def load_series(
    rng: np.random.Generator,
    n_hours: int,
    base_gw: float,
    daily_amp: float = 0.14,
    seasonal_amp: float = 0.10,
    noise: float = 0.015,
) -> np.ndarray:
    """Hourly demand: winter-peaking season, two-peak day, small noise."""
    h = np.arange(n_hours)
    season = 1.0 + seasonal_amp * np.cos(2.0 * np.pi * h / HOURS_PER_YEAR)
    hour_of_day = h % 24
    day = 1.0 + daily_amp * (
        np.exp(-((hour_of_day - 9) ** 2) / 18.0) + np.exp(-((hour_of_day - 19) ** 2) / 12.0) - 0.35
    )
    wiggle = 1.0 + noise * ar1(rng, n_hours, 0.8, 1.0)
    return np.clip(base_gw * season * day * wiggle, 0.0, None)


def res_series(
    rng: np.random.Generator,
    n_hours: int,
    wind_peak_gw: float,
    pv_peak_gw: float,
) -> np.ndarray:
    """Zonal non-dispatchable feed-in: onshore-wind-like plus a solar day-bell.

    The wind part rides a slow, persistent weather level rather than fast
    noise so that multi-year series stay compressible into a modest set of
    representative weeks.
    """
    h = np.arange(n_hours)
    wind = wind_peak_gw * np.clip(
        0.38 + 0.10 * np.cos(2.0 * np.pi * (h - 360.0) / HOURS_PER_YEAR)
        + 0.40 * ar1(rng, n_hours, 0.98, 0.18), 0.0, 1.0,
    )
    hour_of_day = h % 24
    bell = np.clip(np.cos((hour_of_day - 13.0) / 12.0 * np.pi), 0.0, None) ** 1.5
    season = 0.55 + 0.45 * np.cos(2.0 * np.pi * (h - 4380.0) / HOURS_PER_YEAR)
    clouds = np.clip(1.0 - 0.40 * np.abs(ar1(rng, n_hours, 0.82, 0.35)), 0.1, 1.0)
    pv = pv_peak_gw * bell * season * clouds
    return wind + pv


def north_sea_sites() -> list[CandidateSite]:
    """Candidate build areas laid over the North Sea (lon/lat rectangles)."""
    boxes = [
        ("area_bight", 6.0, 54.0, 7.8, 55.2),
        ("area_jutland", 5.0, 55.4, 7.0, 56.2),
        ("area_dogger", 2.0, 54.4, 3.6, 55.4),
        ("area_hornsea", 1.0, 53.2, 2.4, 54.0),
        ("area_ijmuiden", 3.2, 52.6, 4.4, 53.6),
        ("area_frisian", 4.6, 53.8, 5.8, 54.6),
        ("area_farne", 0.4, 55.0, 1.8, 55.9),
        ("area_forties", 2.2, 56.2, 4.0, 57.0),
        ("area_skagerrak", 6.2, 56.6, 7.6, 57.4),
        ("area_norfolk", 0.2, 52.4, 1.4, 53.0),
        ("area_lingbank", 4.8, 56.8, 5.8, 57.6),
        ("area_horns_rev", 8.0, 55.6, 8.8, 56.6),
        ("area_viking", 0.8, 56.4, 2.0, 57.3),
        ("area_gabbard", 1.8, 51.9, 2.8, 52.5),
        ("area_borssele", 2.9, 51.6, 3.8, 52.2),
        ("area_sylt", 8.2, 54.2, 9.0, 55.2),
        ("area_cleaver", 0.2, 53.8, 1.0, 54.6),
        ("area_outer", 3.9, 55.3, 4.7, 56.1),
    ]
    return [
        CandidateSite(id=name, polygon=((x1, y1), (x2, y1), (x2, y2), (x1, y2)))
        for name, x1, y1, x2, y2 in boxes
    ]


_DEMO_ZONES = [
    Zone(id="M1", kind="mainland", lon=7.5, lat=53.6),
    Zone(id="M2", kind="mainland", lon=4.7, lat=52.8),
    Zone(id="M3", kind="mainland", lon=0.5, lat=52.8),
]

_DEMO_UNITS = [
    ThermalUnit(id="M1_nuclear", zone="M1", capacity_gw=8.0, efficiency=0.33, fuel="nuclear"),
    ThermalUnit(id="M1_coal", zone="M1", capacity_gw=18.0, efficiency=0.42, fuel="hard_coal"),
    ThermalUnit(id="M1_gas", zone="M1", capacity_gw=14.0, efficiency=0.55, fuel="natural_gas"),
    ThermalUnit(id="M2_gas", zone="M2", capacity_gw=16.0, efficiency=0.54, fuel="natural_gas"),
    ThermalUnit(id="M2_coal", zone="M2", capacity_gw=6.0, efficiency=0.40, fuel="hard_coal"),
    ThermalUnit(id="M3_nuclear", zone="M3", capacity_gw=7.0, efficiency=0.33, fuel="nuclear"),
    ThermalUnit(id="M3_gas", zone="M3", capacity_gw=20.0, efficiency=0.52, fuel="natural_gas"),
    ThermalUnit(id="M3_hydro", zone="M3", capacity_gw=3.0, efficiency=0.90, fuel="hydro"),
]

_DEMO_LOAD_GW = {"M1": 32.0, "M2": 14.0, "M3": 26.0}
_DEMO_RES_GW = {"M1": (14.0, 10.0), "M2": (6.0, 4.0), "M3": (10.0, 5.0)}


def demo_scenario(years: int = 1, seed: int = 7) -> Scenario:
    """A three-zone coastal system with the full North Sea site family."""
    rng = np.random.default_rng(seed)
    n = years * HOURS_PER_YEAR
    sites = north_sea_sites()

    shared = ar1(rng, n, 0.97, 0.85)
    wind = {}
    for i, s in enumerate(sites):
        lat = float(np.mean([p[1] for p in s.polygon]))
        own = ar1(rng, n, 0.95, 0.7)
        h = np.arange(n)
        season = 2.4 * np.cos(2.0 * np.pi * (h - 360.0) / HOURS_PER_YEAR)
        base = 9.4 + 0.25 * (lat - 54.5)
        wind[s.id] = np.clip(base + season + 0.75 * shared + 0.45 * own, 0.0, None)

    loads = {z: load_series(rng, n, gw) for z, gw in _DEMO_LOAD_GW.items()}
    res = {z: res_series(rng, n, w, p) for z, (w, p) in _DEMO_RES_GW.items()}

    return Scenario(
        name="north_sea_demo",
        zones=list(_DEMO_ZONES),
        units=list(_DEMO_UNITS),
        ntc={
            "M1": {"M2": 4.0, "M3": 1.4},
            "M2": {"M1": 4.0, "M3": 2.0},
            "M3": {"M1": 1.4, "M2": 2.0},
        },
        connection_rules={"mainland": ["M1", "M2", "M3"], "obz_obz": True},
        sites=sites,
        loads=loads,
        res=res,
        wind=wind,
        wind_kind="speed",
    )


def sweep_toy(seed: int = 3, weeks: int = 2) -> Scenario:
    """The documented sweep fixture: two mainland zones, one offshore area.

    Sized so the park is unattractive at the base CO2 price and clearly
    profitable at triple the price, with coal setting the price in zone T1
    most hours.
    """
    rng = np.random.default_rng(seed)
    n = weeks * defaults.HOURS_PER_WEEK
    h = np.arange(n)
    load1 = 5.0 + 0.6 * np.sin(2.0 * np.pi * h / 24.0) + 0.15 * ar1(rng, n, 0.8, 1.0)
    load2 = 3.0 + 0.4 * np.sin(2.0 * np.pi * (h - 3) / 24.0) + 0.1 * ar1(rng, n, 0.8, 1.0)
    cf = np.clip(0.45 + 0.35 * ar1(rng, n, 0.92, 0.35), 0.0, 1.0)
    return Scenario(
        name="sweep_toy",
        zones=[
            Zone(id="T1", kind="mainland", lon=7.0, lat=53.5),
            Zone(id="T2", kind="mainland", lon=4.5, lat=52.8),
            Zone(id="F1", kind="offshore", lon=6.2, lat=54.6, available_gw=3.0),
        ],
        units=[
            ThermalUnit(id="T1_coal", zone="T1", capacity_gw=2.0, efficiency=0.40, fuel="hard_coal"),
            ThermalUnit(id="T1_gas", zone="T1", capacity_gw=3.5, efficiency=0.55, fuel="natural_gas"),
            ThermalUnit(id="T2_gas", zone="T2", capacity_gw=3.0, efficiency=0.50, fuel="natural_gas"),
            ThermalUnit(id="T2_oilpeak", zone="T2", capacity_gw=1.5, efficiency=0.38, fuel="mixed"),
        ],
        ntc={"T1": {"T2": 1.0}, "T2": {"T1": 1.0}},
        mask_pairs=[("F1", "T1"), ("F1", "T2")],
        loads={"T1": np.clip(load1, 0.0, None), "T2": np.clip(load2, 0.0, None)},
        wind={"F1": cf},
        wind_kind="cf",
    )


def displacement_toy() -> Scenario:
    """Hand-sized fixture where offshore wind displaces the price setter.

    Zone D1 carries 2 GW flat load, a 1 GW cheap base unit (20 EUR/MWh)
    and a 1.5 GW expensive unit (about 100 EUR/MWh); a 1.2 GW park at
    full availability pushes the expensive unit out of the money.
    """
    n = defaults.HOURS_PER_WEEK
    return Scenario(
        name="displacement_toy",
        zones=[
            Zone(id="D1", kind="mainland", lon=7.0, lat=53.5),
            Zone(id="F1", kind="offshore", lon=6.5, lat=54.3, available_gw=2.0),
        ],
        units=[
            ThermalUnit(id="D1_base", zone="D1", capacity_gw=1.0, efficiency=1.0,
                        fuel="res", om_eur_mwh=20.0),
            ThermalUnit(id="D1_peak", zone="D1", capacity_gw=1.5, efficiency=0.38, fuel="mixed"),
        ],
        mask_pairs=[("F1", "D1")],
        loads={"D1": np.full(n, 2.0)},
        wind={"F1": np.ones(n)},
        wind_kind="cf",
    )


def _write_series_csv(path: Path, table: dict[str, np.ndarray]) -> None:
    # repr() is the shortest exact float representation, so a written
    # scenario reloads bit-identical (digests must survive the round trip)
    keys = list(table)
    n = len(next(iter(table.values())))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["hour", *keys])
        cols = [np.asarray(table[k], dtype=float) for k in keys]
        for h in range(n):
            w.writerow([h, *(repr(float(c[h])) for c in cols)])


def write_scenario(scn: Scenario, out_dir: str | Path) -> Path:
    """Materialize a scenario as JSON plus CSV series for the command line."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc: dict = {
        "name": scn.name,
        "zones": [
            {
                "id": z.id, "kind": z.kind, "lon": z.lon, "lat": z.lat,
                "landing_cap_gw": z.landing_cap_gw, "available_gw": z.available_gw,
            }
            for z in scn.zones
        ],
        "units": [
            {
                "id": u.id, "zone": u.zone, "capacity_gw": u.capacity_gw,
                "efficiency": u.efficiency, "fuel": u.fuel, "om_eur_mwh": u.om_eur_mwh,
            }
            for u in scn.units
        ],
        "co2_multiplier": scn.co2_multiplier,
        "ntc": scn.ntc,
        "series": {"wind_kind": scn.wind_kind},
    }
    default_costs = CostTable()
    cost_over = {}
    for f in ("c_b_fix", "c_b_on_varl", "c_b_off_varl", "c_b_on_varlp", "c_b_off_varlp",
              "c_c_fix", "c_c_varp_acdc", "c_c_varp_dcdc", "c_hvdc_varom",
              "c_ntc_varl", "c_ntc_varlp", "c_owp_varp_meur_mw", "c_owp_varom",
              "interest_owp", "lifetime_owp", "interest_hvdc", "lifetime_hvdc",
              "co2_eur_t", "ntc_step_gw"):
        if getattr(scn.costs, f) != getattr(default_costs, f):
            cost_over[f] = getattr(scn.costs, f)
    if cost_over:
        doc["costs"] = cost_over
    default_opts = Options()
    opt_over = {}
    for f in ("voll_eur_mwh", "hydro_week_availability", "cut_in_ms", "rated_ms",
              "cut_out_ms", "onshore_tail_km", "grid_spacing_km", "max_steps_per_arc",
              "ntc_add_max_gw", "nrmse_norm", "weighted_site_clustering",
              "multivariate_weeks", "onshore_expandable"):
        if getattr(scn.options, f) != getattr(default_opts, f):
            v = getattr(scn.options, f)
            opt_over[f] = [list(p) for p in v] if f == "onshore_expandable" and v else v
    if opt_over:
        doc["options"] = opt_over
    if scn.mask_pairs:
        doc["mask"] = [list(p) for p in scn.mask_pairs]
    if scn.connection_rules is not None:
        doc["connection_rules"] = scn.connection_rules
    if scn.arc_overrides:
        doc["arcs"] = [
            {"a": a, "b": b, **vals} for (a, b), vals in sorted(scn.arc_overrides.items())
        ]
    if scn.sites:
        doc["sites"] = [
            {"id": s.id, "polygon": [list(p) for p in s.polygon],
             "density_mw_km2": s.density_mw_km2}
            for s in scn.sites
        ]
    if scn.loads:
        _write_series_csv(out / "load.csv", scn.loads)
        doc["series"]["load_csv"] = "load.csv"
    if scn.res:
        _write_series_csv(out / "res.csv", scn.res)
        doc["series"]["res_csv"] = "res.csv"
    if scn.wind:
        _write_series_csv(out / "wind.csv", scn.wind)
        doc["series"]["wind_csv"] = "wind.csv"
    path = out / "scenario.json"
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return path
