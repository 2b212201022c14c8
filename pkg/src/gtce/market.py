"""Downstream market evaluation on a frozen grid topology.

With topology, wind park capacities, and NTC reinforcements fixed, each
representative week is a pure dispatch LP.  Zone prices are the duals of
the hourly balance rows; surplus deltas compare a reference run (no
offshore build, but the same onshore reinforcements) against the
offshore-expanded run.  Monetary annual figures are scaled from the
52-week model year (8736 h) to the 8760 h calendar year.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import defaults
from .errors import InfeasibleError
from .expansion import (
    TAG_BALANCE,
    TAG_HYDRO,
    TAG_LANDING,
    TAG_OBZ_BALANCE,
    TAG_RATE_OFF,
    FixedTopology,
    Prep,
    prepare,
)
from .lp import EQ, LE, LinearProgram
from .scenario import Scenario
from .solve import OPTIMAL, solve_lp
from .timeclust import RepresentativeWeeks

ANNUALIZE = defaults.CALENDAR_YEAR_H / defaults.MODEL_YEAR_H  # 8760/8736


@dataclass
class MarketOutcome:
    zones: list[str]  # mainland then offshore, fixed order
    weights: np.ndarray
    hours: int
    prices: dict[str, np.ndarray]  # EUR/MWh, (weeks, hours)
    dispatch: dict[str, np.ndarray]  # per unit, GW
    res_used: dict[str, np.ndarray]
    unserved: dict[str, np.ndarray]
    loads: dict[str, np.ndarray]
    owp_feed: dict[str, np.ndarray]
    flows: dict[tuple[str, str], np.ndarray]  # directed
    curtailed_twh: dict[str, float]
    unit_zone: dict[str, str]
    unit_cost: dict[str, float]
    opex_meur: float  # weighted model-year dispatch cost
    fingerprint: str

    def annual_price_volume(self, zone: str) -> float:
        """Week-weighted demand payment in MEUR per calendar year."""
        if zone not in self.loads:
            return 0.0
        hourly = self.loads[zone] * self.prices[zone] * 1e-3  # MEUR/h
        return float(np.sum(self.weights[:, None] * hourly)) * ANNUALIZE


def scenario_fingerprint(scn: Scenario, weeks: RepresentativeWeeks,
                         ntc_added: dict[tuple[str, str], float]) -> str:
    """Hash of everything the surplus comparison requires to be identical."""
    h = hashlib.sha256()
    payload = {
        "zones": [(z.id, z.kind, z.lon, z.lat, z.landing_cap_gw, z.available_gw) for z in scn.zones],
        "units": [(u.id, u.zone, u.capacity_gw, u.efficiency, u.fuel, u.om_eur_mwh) for u in scn.units],
        "co2_multiplier": scn.co2_multiplier,
        "costs": scn.costs.fuel_prices + scn.costs.emission_factors + (scn.costs.co2_eur_t,),
        "ntc": sorted((a, b, v) for a, row in scn.ntc.items() for b, v in row.items()),
        "ntc_added": sorted((a, b, round(v, 9)) for (a, b), v in ntc_added.items()),
        "voll": scn.options.voll_eur_mwh,
    }
    h.update(json.dumps(payload, sort_keys=True).encode())
    h.update(np.ascontiguousarray(weeks.profiles).tobytes())
    h.update(np.ascontiguousarray(weeks.weights).tobytes())
    return h.hexdigest()


def reference_topology(off: FixedTopology) -> FixedTopology:
    """The no-offshore counterfactual: same onshore reinforcements, no parks."""
    return FixedTopology(
        steps={},
        adjacency=set(),
        owp_capacity_gw={},
        rating_on_gw={},
        rating_off_gw={},
        ntc_added_gw=dict(off.ntc_added_gw),
        corridors=set(off.corridors),
    )


def _week_dispatch_lp(scn: Scenario, prep: Prep, topo: FixedTopology, z: int) -> LinearProgram:
    lp = LinearProgram(name=f"dispatch_w{z}")
    hours = prep.hours
    step_gw = scn.costs.ntc_step_gw
    built = [a for a in prep.arcs if topo.steps.get(a.key, 0) > 0]
    active_obz = [c for c in prep.obz
                  if topo.owp_capacity_gw.get(c.id, 0.0) > 0
                  or any(c.id in a.key for a in built)]
    directed = [(a.a, a.b) for a in built] + [(a.b, a.a) for a in built]
    cap_of = {a.key: topo.steps[a.key] * step_gw for a in built}
    incident_in: dict[str, list[str]] = {}
    incident_out: dict[str, list[str]] = {}
    for a, b in directed:
        incident_out.setdefault(a, []).append(f"flow_{a}.{b}")
        incident_in.setdefault(b, []).append(f"flow_{a}.{b}")

    for t in range(hours):
        sfx = f"_h{t}"
        for u in scn.units:
            j = lp.add_var(f"disp_{u.id}{sfx}", 0.0, u.capacity_gw)
            lp.add_objective("opex", j, prep.unit_cost[u.id] * 1e-3)
        for m in prep.ml:
            if prep.res[m.id] is not None:
                lp.add_var(f"res_{m.id}{sfx}", 0.0, float(prep.res[m.id][z, t]))
            j = lp.add_var(f"uns_{m.id}{sfx}", 0.0, max(float(prep.loads[m.id][z, t]), 0.0))
            lp.add_objective("opex", j, scn.options.voll_eur_mwh * 1e-3)
        for c in active_obz:
            cap = topo.owp_capacity_gw.get(c.id, 0.0)
            lp.add_var(f"owp_{c.id}{sfx}", 0.0, float(prep.cf[c.id][z, t] * cap))
        for a, b in directed:
            lp.add_var(f"flow_{a}.{b}{sfx}", 0.0, cap_of[tuple(sorted((a, b)))])
        for oa in prep.onshore:
            ub = oa.existing_gw + topo.ntc_added_gw.get((oa.a, oa.b), 0.0)
            lp.add_var(f"onflow_{oa.a}.{oa.b}{sfx}", 0.0, ub)
            lp.add_var(f"onflow_{oa.b}.{oa.a}{sfx}", 0.0, ub)

    for t in range(hours):
        sfx = f"_h{t}"
        for m in prep.ml:
            coeffs = [(lp.var_index(f"disp_{u.id}{sfx}"), 1.0) for u in scn.units if u.zone == m.id]
            if prep.res[m.id] is not None:
                coeffs.append((lp.var_index(f"res_{m.id}{sfx}"), 1.0))
            coeffs.append((lp.var_index(f"uns_{m.id}{sfx}"), 1.0))
            for nm in incident_in.get(m.id, ()):
                coeffs.append((lp.var_index(f"{nm}{sfx}"), 1.0))
            for nm in incident_out.get(m.id, ()):
                coeffs.append((lp.var_index(f"{nm}{sfx}"), -1.0))
            for oa in prep.onshore:
                if m.id == oa.a:
                    coeffs.append((lp.var_index(f"onflow_{oa.b}.{oa.a}{sfx}"), 1.0))
                    coeffs.append((lp.var_index(f"onflow_{oa.a}.{oa.b}{sfx}"), -1.0))
                elif m.id == oa.b:
                    coeffs.append((lp.var_index(f"onflow_{oa.a}.{oa.b}{sfx}"), 1.0))
                    coeffs.append((lp.var_index(f"onflow_{oa.b}.{oa.a}{sfx}"), -1.0))
            lp.add_row(f"bal_{m.id}{sfx}", coeffs, EQ, float(prep.loads[m.id][z, t]), tag=TAG_BALANCE)
        for c in active_obz:
            fid = c.id
            coeffs = [(lp.var_index(f"owp_{fid}{sfx}"), 1.0)]
            for nm in incident_in.get(fid, ()):
                coeffs.append((lp.var_index(f"{nm}{sfx}"), 1.0))
            for nm in incident_out.get(fid, ()):
                coeffs.append((lp.var_index(f"{nm}{sfx}"), -1.0))
            lp.add_row(f"bal_{fid}{sfx}", coeffs, EQ, 0.0, tag=TAG_OBZ_BALANCE)
            rating = topo.rating_off_gw.get(fid)
            if rating is not None:
                for label, names in (("in", incident_in.get(fid, ())), ("out", incident_out.get(fid, ()))):
                    if names:
                        lp.add_row(
                            f"rate_off_{label}_{fid}{sfx}",
                            [(lp.var_index(f"{nm}{sfx}"), 1.0) for nm in names],
                            LE, float(rating), tag=TAG_RATE_OFF,
                        )
        for m in prep.ml:
            names_in = incident_in.get(m.id, ())
            names_out = incident_out.get(m.id, ())
            if not names_in and not names_out:
                continue
            cap = scn.zone(m.id).landing_cap_gw
            rating = topo.rating_on_gw.get(m.id)
            lim = cap if rating is None else min(cap, rating)
            if names_in:
                lp.add_row(f"land_in_{m.id}{sfx}",
                           [(lp.var_index(f"{nm}{sfx}"), 1.0) for nm in names_in],
                           LE, float(lim), tag=TAG_LANDING)
            if names_out:
                lp.add_row(f"land_out_{m.id}{sfx}",
                           [(lp.var_index(f"{nm}{sfx}"), 1.0) for nm in names_out],
                           LE, float(lim), tag=TAG_LANDING)

    for u in scn.units:
        if u.fuel != "hydro":
            continue
        budget = u.capacity_gw * hours * scn.options.hydro_week_availability
        lp.add_row(
            f"hydro_{u.id}",
            [(lp.var_index(f"disp_{u.id}_h{t}"), 1.0) for t in range(hours)],
            LE, budget, tag=TAG_HYDRO,
        )
    return lp


def fixed_topology_dispatch(
    scn: Scenario,
    clusters,
    weeks: RepresentativeWeeks,
    topo: FixedTopology,
    jobs: int = 1,
) -> MarketOutcome:
    """Per-week dispatch with prices, flows, and curtailment aggregated."""
    prep = prepare(scn, clusters, weeks)
    k, hours = len(prep.weights), prep.hours
    built = [a for a in prep.arcs if topo.steps.get(a.key, 0) > 0]
    active_obz = [c for c in prep.obz
                  if topo.owp_capacity_gw.get(c.id, 0.0) > 0
                  or any(c.id in a.key for a in built)]
    directed = [(a.a, a.b) for a in built] + [(a.b, a.a) for a in built]
    directed += [(oa.a, oa.b) for oa in prep.onshore] + [(oa.b, oa.a) for oa in prep.onshore]

    def run_week(z: int):
        lp = _week_dispatch_lp(scn, prep, topo, z)
        res = solve_lp(lp)
        if res.status != OPTIMAL:
            raise InfeasibleError(
                f"fixed-topology dispatch failed in week {z}: {res.status}", res.certificate
            )
        return lp, res

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            solved = list(pool.map(run_week, range(k)))
    else:
        solved = [run_week(z) for z in range(k)]

    zones = prep.ml_ids + [c.id for c in active_obz]
    prices = {m: np.zeros((k, hours)) for m in zones}
    dispatch = {u.id: np.zeros((k, hours)) for u in scn.units}
    res_used = {m.id: np.zeros((k, hours)) for m in prep.ml if prep.res[m.id] is not None}
    unserved = {m.id: np.zeros((k, hours)) for m in prep.ml}
    owp_feed = {c.id: np.zeros((k, hours)) for c in active_obz}
    flows = {d: np.zeros((k, hours)) for d in directed}
    opex = 0.0

    built_keys = {a.key for a in built}
    for z, (lp, res) in enumerate(solved):
        opex += float(prep.weights[z]) * res.objective
        for t in range(hours):
            sfx = f"_h{t}"
            for m in prep.ml_ids:
                prices[m][z, t] = res.duals[lp.row_index(f"bal_{m}{sfx}")] * 1000.0
            for c in active_obz:
                prices[c.id][z, t] = res.duals[lp.row_index(f"bal_{c.id}{sfx}")] * 1000.0
                owp_feed[c.id][z, t] = res.x[lp.var_index(f"owp_{c.id}{sfx}")]
            for u in scn.units:
                dispatch[u.id][z, t] = res.x[lp.var_index(f"disp_{u.id}{sfx}")]
            for m in res_used:
                res_used[m][z, t] = res.x[lp.var_index(f"res_{m}{sfx}")]
            for m in unserved:
                unserved[m][z, t] = res.x[lp.var_index(f"uns_{m}{sfx}")]
            for a, b in directed:
                name = (f"flow_{a}.{b}{sfx}" if tuple(sorted((a, b))) in built_keys
                        else f"onflow_{a}.{b}{sfx}")
                flows[(a, b)][z, t] = res.x[lp.var_index(name)]

    curtailed = {}
    for c in active_obz:
        cap = topo.owp_capacity_gw.get(c.id, 0.0)
        possible = prep.cf[c.id] * cap
        missed = np.sum(prep.weights[:, None] * (possible - owp_feed[c.id]))
        curtailed[c.id] = float(missed) * 1e-3 * ANNUALIZE  # TWh per year

    return MarketOutcome(
        zones=zones,
        weights=prep.weights.copy(),
        hours=hours,
        prices=prices,
        dispatch=dispatch,
        res_used=res_used,
        unserved=unserved,
        loads={m: prep.loads[m].copy() for m in prep.ml_ids},
        owp_feed=owp_feed,
        flows=flows,
        curtailed_twh=curtailed,
        unit_zone={u.id: u.zone for u in scn.units},
        unit_cost=dict(prep.unit_cost),
        opex_meur=opex,
        fingerprint=scenario_fingerprint(scn, weeks, topo.ntc_added_gw),
    )


def _require_comparable(ref: MarketOutcome, off: MarketOutcome) -> None:
    if ref.fingerprint != off.fingerprint:
        raise ValueError("outcomes stem from different scenarios; surplus deltas undefined")


def consumer_surplus_delta(ref: MarketOutcome, off: MarketOutcome, zone: str) -> float:
    """Change in consumer surplus for one zone, MEUR per calendar year.

    Positive when the offshore case lowers the payments for the (inelastic)
    demand: reference payments minus offshore payments.
    """
    _require_comparable(ref, off)
    return ref.annual_price_volume(zone) - off.annual_price_volume(zone)


def _producer_margin(o: MarketOutcome, zone: str) -> float:
    total = 0.0
    if zone in o.prices:
        pi = o.prices[zone]
        for uid, zid in o.unit_zone.items():
            if zid != zone:
                continue
            margin = (pi - o.unit_cost[uid]) * o.dispatch[uid] * 1e-3
            total += float(np.sum(o.weights[:, None] * margin))
        if zone in o.res_used:
            total += float(np.sum(o.weights[:, None] * o.res_used[zone] * pi * 1e-3))
    return total * ANNUALIZE


def producer_surplus_delta(ref: MarketOutcome, off: MarketOutcome, zone: str) -> float:
    """Change in producer surplus for one zone's suppliers, MEUR per year.

    Offshore-case margins minus reference margins over all units located
    in the zone (zero-cost renewable infeed counts as a supplier).
    """
    _require_comparable(ref, off)
    return _producer_margin(off, zone) - _producer_margin(ref, zone)


def owp_margin(o: MarketOutcome, fid: str) -> float:
    """Wind park operator margin (price times feed-in), MEUR per year."""
    if fid not in o.owp_feed:
        return 0.0
    m = o.owp_feed[fid] * o.prices[fid] * 1e-3
    return float(np.sum(o.weights[:, None] * m)) * ANNUALIZE


def congestion_rent(o: MarketOutcome) -> float:
    """Price-spread revenue over all directed flows, MEUR per year."""
    total = 0.0
    for (a, b), f in o.flows.items():
        if a in o.prices and b in o.prices:
            total += float(np.sum(o.weights[:, None] * f * (o.prices[b] - o.prices[a]) * 1e-3))
    return total * ANNUALIZE


def duration_curve(series: np.ndarray, weights) -> np.ndarray:
    """Descending annual curve: each week's hours repeated by its weight."""
    series = np.asarray(series, dtype=float)
    weights = np.asarray(weights, dtype=int)
    if series.ndim != 2 or series.shape[0] != weights.shape[0]:
        raise ValueError("series must be (weeks, hours) matching the weights")
    expanded = np.repeat(series, weights, axis=0).ravel()
    return np.sort(expanded)[::-1]


def trade_balance(o: MarketOutcome) -> dict[tuple[str, str], float]:
    """Net annual energy sent a->b in TWh; antisymmetric by construction."""
    pairs = {tuple(sorted(d)) for d in o.flows}
    out: dict[tuple[str, str], float] = {}
    for a, b in sorted(pairs):
        fwd = o.flows.get((a, b))
        back = o.flows.get((b, a))
        net = 0.0
        if fwd is not None:
            net += float(np.sum(o.weights[:, None] * fwd))
        if back is not None:
            net -= float(np.sum(o.weights[:, None] * back))
        net = net * 1e-3 * ANNUALIZE
        out[(a, b)] = net
        out[(b, a)] = -net
    return out
