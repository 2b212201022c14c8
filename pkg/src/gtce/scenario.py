"""Scenario data model, economics primitives, and validation.

A scenario bundles the market description (zones, thermal units, NTCs,
hourly series) with candidate offshore sites, permissible-connection
rules, and the cost table.  Scenario files are JSON with hourly series
in CSV files referenced by relative path.
"""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from . import defaults

ID_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

MAINLAND = "mainland"
OFFSHORE = "offshore"


class ScenarioError(ValueError):
    """Raised when a scenario file cannot be interpreted at all."""


def crf(interest: float, years: float) -> float:
    """Capital recovery factor: the annuity per unit of capex.

    crf = i (1+i)^n / ((1+i)^n - 1) for interest rate ``i`` over a
    lifetime of ``n`` years.
    """
    if not 0.0 < interest < 1.0:
        raise ValueError(f"interest rate out of (0, 1): {interest}")
    if years < 1:
        raise ValueError(f"lifetime must be >= 1 year, got {years}")
    q = (1.0 + interest) ** years
    return interest * q / (q - 1.0)


def annualize(capex: float, recovery: float, om_share: float = 0.0) -> float:
    """Annual cost of an investment: capex * (crf + O&M share)."""
    if capex < 0 or recovery < 0 or om_share < 0:
        raise ValueError("annualize expects non-negative arguments")
    return capex * (recovery + om_share)


@dataclass(frozen=True)
class Zone:
    id: str
    kind: str  # "mainland" | "offshore"
    lon: float
    lat: float
    landing_cap_gw: float = defaults.LANDING_CAP_GW  # per direction, mainland only
    available_gw: float = 0.0  # pooled installable OWP capacity, offshore only

    @property
    def location(self) -> tuple[float, float]:
        return (self.lon, self.lat)


@dataclass(frozen=True)
class ThermalUnit:
    """A dispatchable (or bounded-availability) generation block in a zone.

    Fuel "hydro" gets a weekly energy budget instead of free dispatch;
    fuel "res" marks a zero-cost unit whose hourly ceiling follows the
    zone's res series.
    """

    id: str
    zone: str
    capacity_gw: float
    efficiency: float = 1.0
    fuel: str = "mixed"
    om_eur_mwh: float = 0.0


@dataclass(frozen=True)
class CandidateSite:
    id: str
    polygon: tuple[tuple[float, float], ...]  # (lon, lat) ring, not closed
    density_mw_km2: float = defaults.OWP_DENSITY_MW_KM2


@dataclass(frozen=True)
class CostTable:
    c_b_fix: float = defaults.C_B_FIX
    c_b_on_varl: float = defaults.C_B_ON_VARL
    c_b_off_varl: float = defaults.C_B_OFF_VARL
    c_b_on_varlp: float = defaults.C_B_ON_VARLP
    c_b_off_varlp: float = defaults.C_B_OFF_VARLP
    c_c_fix: float = defaults.C_C_FIX
    c_c_varp_acdc: float = defaults.C_C_VARP_ACDC
    c_c_varp_dcdc: float = defaults.C_C_VARP_DCDC
    c_hvdc_varom: float = defaults.C_HVDC_VAROM
    c_ntc_varl: float = defaults.C_NTC_VARL
    c_ntc_varlp: float = defaults.C_NTC_VARLP
    c_owp_varp_meur_mw: float = defaults.C_OWP_VARP
    c_owp_varom: float = defaults.C_OWP_VAROM
    interest_owp: float = defaults.INTEREST_OWP
    lifetime_owp: float = defaults.LIFETIME_OWP
    interest_hvdc: float = defaults.INTEREST_HVDC
    lifetime_hvdc: float = defaults.LIFETIME_HVDC
    co2_eur_t: float = defaults.CO2_PRICE_EUR_T
    ntc_step_gw: float = defaults.NTC_STEP_GW
    fuel_prices: tuple[tuple[str, float], ...] = tuple(
        sorted(defaults.FUEL_PRICES_EUR_MWH_TH.items())
    )
    emission_factors: tuple[tuple[str, float], ...] = tuple(
        sorted(defaults.EMISSION_FACTORS_T_MWH_TH.items())
    )

    @property
    def crf_owp(self) -> float:
        return crf(self.interest_owp, self.lifetime_owp)

    @property
    def crf_hvdc(self) -> float:
        return crf(self.interest_hvdc, self.lifetime_hvdc)

    def fuel_price(self, fuel: str) -> float:
        return dict(self.fuel_prices)[fuel]

    def emission_factor(self, fuel: str) -> float:
        return dict(self.emission_factors)[fuel]


def co2_price(costs: CostTable, multiplier: float = 1.0) -> float:
    """Effective CO2 price in EUR/t under a sweep multiplier."""
    if multiplier < 0:
        raise ValueError("CO2 multiplier must be non-negative")
    return costs.co2_eur_t * multiplier


def marginal_cost(unit: ThermalUnit, costs: CostTable, co2_multiplier: float = 1.0) -> float:
    """Short-run marginal cost of a unit in EUR/MWh electric.

    (fuel price + emission factor * CO2 price) / efficiency + O&M.
    """
    if unit.fuel == "res":
        return unit.om_eur_mwh
    fuel = costs.fuel_price(unit.fuel)
    ef = costs.emission_factor(unit.fuel)
    thermal = fuel + ef * co2_price(costs, co2_multiplier)
    return thermal / unit.efficiency + unit.om_eur_mwh


@dataclass(frozen=True)
class Options:
    voll_eur_mwh: float = defaults.VOLL_EUR_MWH
    hydro_week_availability: float = defaults.HYDRO_WEEK_AVAILABILITY
    cut_in_ms: float = defaults.CUT_IN_MS
    rated_ms: float = defaults.RATED_MS
    cut_out_ms: float = defaults.CUT_OUT_MS
    onshore_tail_km: float = defaults.ONSHORE_TAIL_KM
    grid_spacing_km: float = defaults.GRID_SPACING_KM
    max_steps_per_arc: int = defaults.MAX_STEPS_PER_ARC
    ntc_add_max_gw: float = defaults.NTC_ADD_MAX_GW
    nrmse_norm: str = defaults.NRMSE_NORM  # "range" | "mean"
    weighted_site_clustering: bool = False
    multivariate_weeks: bool = False
    # mainland pairs open for NTC reinforcement; None = pairs with existing NTC
    onshore_expandable: tuple[tuple[str, str], ...] | None = None


@dataclass
class Scenario:
    name: str
    zones: list[Zone]
    units: list[ThermalUnit]
    costs: CostTable = field(default_factory=CostTable)
    options: Options = field(default_factory=Options)
    co2_multiplier: float = 1.0
    ntc: dict[str, dict[str, float]] = field(default_factory=dict)
    mask_pairs: list[tuple[str, str]] = field(default_factory=list)
    # {"mainland": [ids...], "obz_obz": bool} applied to clusters at build time
    connection_rules: dict | None = None
    # (a, b) -> {"distance_km": float, "onshore_share": float} overrides
    arc_overrides: dict[tuple[str, str], dict] = field(default_factory=dict)
    sites: list[CandidateSite] = field(default_factory=list)
    loads: dict[str, np.ndarray] = field(default_factory=dict)
    res: dict[str, np.ndarray] = field(default_factory=dict)
    wind: dict[str, np.ndarray] = field(default_factory=dict)
    wind_kind: str = "speed"  # "speed" | "cf"
    source_path: Path | None = None

    def zone(self, zid: str) -> Zone:
        for z in self.zones:
            if z.id == zid:
                return z
        raise KeyError(zid)

    @property
    def mainland(self) -> list[Zone]:
        return [z for z in self.zones if z.kind == MAINLAND]

    @property
    def offshore(self) -> list[Zone]:
        return [z for z in self.zones if z.kind == OFFSHORE]

    def units_in(self, zid: str) -> list[ThermalUnit]:
        return [u for u in self.units if u.zone == zid]

    def ntc_between(self, a: str, b: str) -> float:
        return float(self.ntc.get(a, {}).get(b, 0.0))

    def with_co2_multiplier(self, multiplier: float) -> "Scenario":
        return dataclasses.replace(self, co2_multiplier=multiplier)

    def arc_override(self, a: str, b: str) -> dict:
        return self.arc_overrides.get((a, b)) or self.arc_overrides.get((b, a)) or {}


def validate(scn: Scenario) -> list[str]:
    """Collect structural violations; an empty list means the scenario is usable."""
    bad: list[str] = []
    ids = [z.id for z in scn.zones]
    if len(set(ids)) != len(ids):
        bad.append("zone ids are not unique")
    for z in scn.zones:
        if not ID_RE.match(z.id):
            bad.append(f"zone id {z.id!r} is not a plain identifier")
        if z.kind not in (MAINLAND, OFFSHORE):
            bad.append(f"zone {z.id}: unknown kind {z.kind!r}")
        if not (-180.0 <= z.lon <= 180.0 and -90.0 <= z.lat <= 90.0):
            bad.append(f"zone {z.id}: location ({z.lon}, {z.lat}) out of range")
        if z.kind == MAINLAND and z.landing_cap_gw <= 0:
            bad.append(f"zone {z.id}: landing cap must be positive")
        if z.kind == OFFSHORE and z.available_gw < 0:
            bad.append(f"zone {z.id}: negative available capacity")

    zone_ids = set(ids)
    mainland_ids = {z.id for z in scn.zones if z.kind == MAINLAND}
    unit_ids = [u.id for u in scn.units]
    if len(set(unit_ids)) != len(unit_ids):
        bad.append("unit ids are not unique")
    known_fuels = {k for k, _ in scn.costs.fuel_prices} | {"res"}
    for u in scn.units:
        if not ID_RE.match(u.id):
            bad.append(f"unit id {u.id!r} is not a plain identifier")
        if u.zone not in zone_ids:
            bad.append(f"unit {u.id}: unknown zone {u.zone}")
        elif u.zone not in mainland_ids:
            bad.append(f"unit {u.id}: units must sit in mainland zones")
        if u.capacity_gw < 0:
            bad.append(f"unit {u.id}: negative capacity")
        if not 0.0 < u.efficiency <= 1.0:
            bad.append(f"unit {u.id}: efficiency {u.efficiency} out of (0, 1]")
        if u.fuel not in known_fuels:
            bad.append(f"unit {u.id}: unknown fuel {u.fuel!r}")
        elif u.fuel not in ("res", "hydro") and scn.costs.emission_factor(u.fuel) < 0:
            bad.append(f"unit {u.id}: negative emission factor")
        if u.om_eur_mwh < 0:
            bad.append(f"unit {u.id}: negative O&M cost")

    for a, row in scn.ntc.items():
        if a not in mainland_ids:
            bad.append(f"ntc: unknown mainland zone {a}")
            continue
        for b, v in row.items():
            if b not in mainland_ids:
                bad.append(f"ntc: unknown mainland zone {b}")
                continue
            if a == b:
                bad.append(f"ntc: self-coupling {a}")
            if v < 0:
                bad.append(f"ntc {a}-{b}: negative capacity")
            back = scn.ntc.get(b, {}).get(a)
            if back is None or abs(back - v) > 1e-9:
                bad.append(f"ntc {a}-{b}: not symmetric ({v} vs {back})")

    for a, b in scn.mask_pairs:
        for end in (a, b):
            if end not in zone_ids:
                bad.append(f"mask: unknown zone {end}")
        if a in mainland_ids and b in mainland_ids:
            bad.append(f"mask {a}-{b}: both ends mainland; mask covers offshore arcs only")
        if a == b:
            bad.append(f"mask: self-arc {a}")

    if scn.connection_rules is not None:
        for m in scn.connection_rules.get("mainland", []):
            if m not in mainland_ids:
                bad.append(f"connection_rules: unknown mainland zone {m}")

    site_ids = [s.id for s in scn.sites]
    if len(set(site_ids)) != len(site_ids):
        bad.append("site ids are not unique")
    for s in scn.sites:
        if not ID_RE.match(s.id):
            bad.append(f"site id {s.id!r} is not a plain identifier")
        if len(s.polygon) < 3:
            bad.append(f"site {s.id}: polygon needs at least 3 vertices")
        if s.density_mw_km2 <= 0:
            bad.append(f"site {s.id}: density must be positive")

    lengths = {}
    for label, table in (("load", scn.loads), ("res", scn.res), ("wind", scn.wind)):
        for key, arr in table.items():
            lengths[f"{label}:{key}"] = len(arr)
            if np.any(~np.isfinite(arr)):
                bad.append(f"{label} series {key}: non-finite values")
            if label in ("load", "res") and np.any(np.asarray(arr) < 0):
                bad.append(f"{label} series {key}: negative values")
    if len(set(lengths.values())) > 1:
        bad.append(f"series lengths differ: {sorted(set(lengths.values()))}")
    for z in scn.mainland:
        if scn.loads and z.id not in scn.loads:
            bad.append(f"zone {z.id}: no load series")
    for zid in scn.loads:
        if zid not in mainland_ids:
            bad.append(f"load series for non-mainland zone {zid}")
    for zid in scn.res:
        if zid not in mainland_ids:
            bad.append(f"res series for non-mainland zone {zid}")

    if scn.co2_multiplier < 0:
        bad.append("co2_multiplier must be non-negative")
    if scn.wind_kind not in ("speed", "cf"):
        bad.append(f"wind_kind {scn.wind_kind!r} not in ('speed', 'cf')")
    if scn.wind_kind == "cf":
        for key, arr in scn.wind.items():
            if np.any((np.asarray(arr) < 0) | (np.asarray(arr) > 1)):
                bad.append(f"wind cf series {key}: values outside [0, 1]")

    c = scn.costs
    for name in (
        "c_b_fix", "c_b_on_varl", "c_b_off_varl", "c_b_on_varlp", "c_b_off_varlp",
        "c_c_fix", "c_c_varp_acdc", "c_c_varp_dcdc", "c_hvdc_varom",
        "c_ntc_varl", "c_ntc_varlp", "c_owp_varp_meur_mw", "c_owp_varom", "co2_eur_t",
    ):
        if getattr(c, name) < 0:
            bad.append(f"costs.{name} is negative")
    if c.ntc_step_gw <= 0:
        bad.append("costs.ntc_step_gw must be positive")
    if c.c_c_varp_dcdc > c.c_c_varp_acdc:
        bad.append("dc-dc converter cost exceeds ac-dc cost")
    for iname, nname in (("interest_owp", "lifetime_owp"), ("interest_hvdc", "lifetime_hvdc")):
        try:
            crf(getattr(c, iname), getattr(c, nname))
        except ValueError as e:
            bad.append(f"costs.{iname}/{nname}: {e}")

    if scn.options.nrmse_norm not in ("range", "mean"):
        bad.append(f"options.nrmse_norm {scn.options.nrmse_norm!r} unknown")
    if not 0 < scn.options.hydro_week_availability <= 1:
        bad.append("options.hydro_week_availability out of (0, 1]")
    if not 0 <= scn.options.cut_in_ms < scn.options.rated_ms < scn.options.cut_out_ms:
        bad.append("turbine curve breakpoints must satisfy cut-in < rated < cut-out")

    return bad


def _read_series_csv(path: Path) -> dict[str, np.ndarray]:
    # round_trip parsing: values written with repr() reload bit-identical,
    # which content digests over the raw series bytes rely on
    df = pd.read_csv(path, float_precision="round_trip")
    if df.shape[1] < 2:
        raise ScenarioError(f"{path}: expected a timestamp column plus series columns")
    out = {}
    for col in df.columns[1:]:
        out[str(col)] = df[col].to_numpy(dtype=float)
    return out


def load_scenario(path: str | Path) -> Scenario:
    """Read a scenario JSON file, pulling referenced CSV series alongside it."""
    path = Path(path)
    with open(path) as fh:
        raw = json.load(fh)
    base = path.parent

    zones = [
        Zone(
            id=z["id"],
            kind=z.get("kind", MAINLAND),
            lon=float(z["lon"]),
            lat=float(z["lat"]),
            landing_cap_gw=float(z.get("landing_cap_gw", defaults.LANDING_CAP_GW)),
            available_gw=float(z.get("available_gw", 0.0)),
        )
        for z in raw.get("zones", [])
    ]
    units = [
        ThermalUnit(
            id=u["id"],
            zone=u["zone"],
            capacity_gw=float(u["capacity_gw"]),
            efficiency=float(u.get("efficiency", 1.0)),
            fuel=u.get("fuel", "mixed"),
            om_eur_mwh=float(u.get("om_eur_mwh", 0.0)),
        )
        for u in raw.get("units", [])
    ]

    cost_kwargs = dict(raw.get("costs", {}))
    fuel_prices = dict(defaults.FUEL_PRICES_EUR_MWH_TH)
    fuel_prices.update(raw.get("fuel_prices", {}))
    efs = dict(defaults.EMISSION_FACTORS_T_MWH_TH)
    efs.update(raw.get("emission_factors", {}))
    costs = CostTable(
        fuel_prices=tuple(sorted(fuel_prices.items())),
        emission_factors=tuple(sorted(efs.items())),
        **cost_kwargs,
    )
    options = Options(**{
        k: (tuple(tuple(p) for p in v) if k == "onshore_expandable" and v is not None else v)
        for k, v in raw.get("options", {}).items()
    })

    sites = [
        CandidateSite(
            id=s["id"],
            polygon=tuple((float(p[0]), float(p[1])) for p in s["polygon"]),
            density_mw_km2=float(s.get("density_mw_km2", defaults.OWP_DENSITY_MW_KM2)),
        )
        for s in raw.get("sites", [])
    ]

    arc_overrides = {}
    for a in raw.get("arcs", []):
        arc_overrides[(a["a"], a["b"])] = {
            k: float(v) for k, v in a.items() if k in ("distance_km", "onshore_share")
        }

    series = raw.get("series", {})
    loads = _read_series_csv(base / series["load_csv"]) if "load_csv" in series else {}
    res = _read_series_csv(base / series["res_csv"]) if "res_csv" in series else {}
    wind = _read_series_csv(base / series["wind_csv"]) if "wind_csv" in series else {}

    return Scenario(
        name=raw.get("name", path.stem),
        zones=zones,
        units=units,
        costs=costs,
        options=options,
        co2_multiplier=float(raw.get("co2_multiplier", 1.0)),
        ntc={a: {b: float(v) for b, v in row.items()} for a, row in raw.get("ntc", {}).items()},
        mask_pairs=[(p[0], p[1]) for p in raw.get("mask", [])],
        connection_rules=raw.get("connection_rules"),
        arc_overrides=arc_overrides,
        sites=sites,
        loads=loads,
        res=res,
        wind=wind,
        wind_kind=series.get("wind_kind", "speed"),
        source_path=path,
    )
