"""The capacity expansion model: offshore wind parks plus an HVDC grid.

Decides, for a multi-zone market over representative weeks, the installed
capacity of each offshore wind park (its own bidding zone behind a
converter platform), the number of standardized HVDC connections on each
permissible arc, converter ratings, and onshore NTC reinforcements, so
that annualized investment plus weighted dispatch cost is minimal.

Conventions: power in GW, money in MEUR, one model year = 52 weighted
representative weeks.  Cost terms that appear per ordered zone pair are
halved so that symmetric adjacency/step variables count each physical
asset exactly once; the per-pair halving is kept literal (an arc between
two offshore zones carries the converter fixed block twice, once per
endpoint platform).

Every constraint row carries a tag naming its functional block; the tag
census is exported with results so solved models stay auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import defaults
from .bnb import INT_TOL, branch_and_bound
from .errors import InfeasibleError
from .geo import ConverterCluster, clusters_from_zones, haversine_km
from .lp import EQ, LE, LinearProgram
from .lpfile import write_lp
from .scenario import OFFSHORE, Scenario, Zone, marginal_cost
from .solve import solve_lp
from .timeclust import RepresentativeWeeks

TAG_BALANCE = "balance-mainland"
TAG_OBZ_BALANCE = "balance-obz"
TAG_NET_EXPORT = "net-export"
TAG_OWP_FEEDIN = "owp-feedin-cap"
TAG_OWP_AVAIL = "owp-capacity-cap"
TAG_FLOW_FROM_OBZ = "flowcap-from-obz"
TAG_FLOW_TO_OBZ = "flowcap-to-obz"
TAG_LANDING = "landing-cap"
TAG_RATE_ON = "rating-mainland"
TAG_RATE_OFF = "rating-offshore"
TAG_BIGM = "adjacency-bigm"
TAG_STEP_SYM = "step-symmetry"
TAG_ADJ_SYM = "adjacency-symmetry"
TAG_ONSHORE = "onshore-flow-cap"
TAG_CORRIDOR = "onshore-corridor"
TAG_HYDRO = "hydro-budget"

OBJ_TERMS = (
    "opex",
    "owp_capex",
    "cable_fix",
    "cable_length",
    "cable_capacity",
    "converter_fix",
    "converter_acdc",
    "converter_dcdc",
    "onshore_ntc",
)


@dataclass(frozen=True)
class ArcGeometry:
    """Undirected corridor geometry; shares split the route into land and sea."""

    a: str
    b: str
    distance_km: float
    onshore_share: float

    def __post_init__(self):
        if self.distance_km < 0:
            raise ValueError(f"arc {self.a}-{self.b}: negative distance")
        if not 0.0 <= self.onshore_share <= 1.0:
            raise ValueError(f"arc {self.a}-{self.b}: onshore share outside [0, 1]")

    @property
    def offshore_share(self) -> float:
        return 1.0 - self.onshore_share

    @property
    def key(self) -> tuple[str, str]:
        return (self.a, self.b)


def cable_cost_varL(arc: ArcGeometry, costs) -> float:
    """Length-dependent cable cost in MEUR: land and sea rates by route share."""
    d_on = arc.distance_km * arc.onshore_share
    d_off = arc.distance_km * arc.offshore_share
    return d_on * costs.c_b_on_varl + d_off * costs.c_b_off_varl


def cable_cost_varLP(arc: ArcGeometry, costs) -> float:
    """Capacity-proportional cable cost in MEUR per GW."""
    d_on = arc.distance_km * arc.onshore_share
    d_off = arc.distance_km * arc.offshore_share
    return d_on * costs.c_b_on_varlp + d_off * costs.c_b_off_varlp


@dataclass(frozen=True)
class OnshoreArc:
    a: str
    b: str
    distance_km: float
    existing_gw: float
    expandable: bool


@dataclass
class Prep:
    """Shared groundwork for the expansion model and fixed-topology dispatch."""

    ml: list[Zone]
    obz: list[ConverterCluster]
    arcs: list[ArcGeometry]
    onshore: list[OnshoreArc]
    big_m: dict[tuple[str, str], int]
    loads: dict[str, np.ndarray]  # (weeks, hours)
    res: dict[str, np.ndarray]
    cf: dict[str, np.ndarray]
    unit_cost: dict[str, float]  # EUR/MWh marginal
    weights: np.ndarray
    hours: int

    @property
    def ml_ids(self) -> list[str]:
        return [z.id for z in self.ml]

    @property
    def obz_ids(self) -> list[str]:
        return [c.id for c in self.obz]

    def avail(self, fid: str) -> float:
        for c in self.obz:
            if c.id == fid:
                return c.pooled_gw
        raise KeyError(fid)


def _resolve_mask(scn: Scenario, obz_ids: list[str]) -> list[tuple[str, str]]:
    ml_ids = {z.id for z in scn.mainland}
    known = ml_ids | set(obz_ids)
    pairs: set[tuple[str, str]] = set()
    for a, b in scn.mask_pairs:
        if a not in known or b not in known:
            raise ValueError(f"mask references unknown zone: {a}-{b}")
        if a in ml_ids and b in ml_ids:
            raise ValueError(f"mask pair {a}-{b} has no offshore end")
        pairs.add(tuple(sorted((a, b))))
    rules = scn.connection_rules or {}
    for m in rules.get("mainland", []):
        for f in obz_ids:
            pairs.add(tuple(sorted((f, m))))
    if rules.get("obz_obz"):
        for i, f1 in enumerate(obz_ids):
            for f2 in obz_ids[i + 1:]:
                pairs.add(tuple(sorted((f1, f2))))
    return sorted(pairs)


def _arc_geometry(scn: Scenario, locs: dict[str, tuple[float, float]],
                  kinds: dict[str, str], a: str, b: str) -> ArcGeometry:
    override = scn.arc_override(a, b)
    (lon1, lat1), (lon2, lat2) = locs[a], locs[b]
    d = override.get("distance_km", haversine_km(lon1, lat1, lon2, lat2))
    if "onshore_share" in override:
        share = override["onshore_share"]
    elif kinds[a] == OFFSHORE and kinds[b] == OFFSHORE:
        share = 0.0
    elif kinds[a] != OFFSHORE and kinds[b] != OFFSHORE:
        share = 1.0
    else:
        share = min(scn.options.onshore_tail_km, d) / d if d > 0 else 0.0
    return ArcGeometry(a=a, b=b, distance_km=float(d), onshore_share=float(share))


def prepare(scn: Scenario, clusters: list[ConverterCluster] | None,
            weeks: RepresentativeWeeks) -> Prep:
    """Resolve zones, arcs, series, and big-M values for model assembly."""
    if clusters is None:
        clusters = clusters_from_zones(scn.zones)
    ml = scn.mainland
    obz_ids = [c.id for c in clusters]
    if len(set(obz_ids)) != len(obz_ids):
        raise ValueError("duplicate cluster ids")
    overlap = set(obz_ids) & {z.id for z in ml}
    if overlap:
        raise ValueError(f"cluster ids collide with mainland zones: {sorted(overlap)}")

    locs = {z.id: (z.lon, z.lat) for z in ml}
    kinds = {z.id: z.kind for z in ml}
    avail = {}
    for c in clusters:
        locs[c.id] = (c.lon, c.lat)
        kinds[c.id] = OFFSHORE
        avail[c.id] = c.pooled_gw

    arcs = [_arc_geometry(scn, locs, kinds, a, b) for a, b in _resolve_mask(scn, obz_ids)]

    landing = {z.id: z.landing_cap_gw for z in ml}
    step = scn.costs.ntc_step_gw
    global_cap = scn.options.max_steps_per_arc * step
    big_m = {}
    for arc in arcs:
        ends = (arc.a, arc.b)
        cap = global_cap
        for e in ends:
            cap = min(cap, avail[e] if kinds[e] == OFFSHORE else landing[e])
        big_m[arc.key] = int(math.ceil(cap / step - 1e-9)) if cap > 0 else 0

    expandable = scn.options.onshore_expandable
    onshore_pairs: dict[tuple[str, str], float] = {}
    for z1 in ml:
        for z2 in ml:
            v = scn.ntc_between(z1.id, z2.id)
            if v > 0 and z1.id < z2.id:
                onshore_pairs[(z1.id, z2.id)] = v
    if expandable is None:
        expand_set = set(onshore_pairs)
    else:
        expand_set = {tuple(sorted(p)) for p in expandable}
        for p in expand_set:
            onshore_pairs.setdefault(p, scn.ntc_between(*p))
    onshore = [
        OnshoreArc(
            a=a, b=b,
            distance_km=_arc_geometry(scn, locs, kinds, a, b).distance_km,
            existing_gw=v,
            expandable=(a, b) in expand_set,
        )
        for (a, b), v in sorted(onshore_pairs.items())
    ]

    k, hours = weeks.profiles.shape[0], weeks.hours_per_week
    loads, res = {}, {}
    for z in ml:
        lid = f"load_{z.id}"
        if not weeks.has_series(lid):
            raise ValueError(f"weeks are missing series {lid}")
        loads[z.id] = weeks.series(lid)
        rid = f"res_{z.id}"
        res[z.id] = weeks.series(rid) if weeks.has_series(rid) else None

    cf = {}
    for c in clusters:
        sid = f"cf_{c.id}"
        if weeks.has_series(sid):
            cf[c.id] = np.clip(weeks.series(sid), 0.0, 1.0)
        else:
            mix = np.zeros((k, hours))
            got = False
            for site, w in c.site_weights:
                ssid = f"cf_{site}"
                if weeks.has_series(ssid):
                    mix += w * weeks.series(ssid)
                    got = True
            if not got and c.pooled_gw > 0:
                raise ValueError(f"no capacity factor series for cluster {c.id}")
            cf[c.id] = np.clip(mix, 0.0, 1.0)

    unit_cost = {u.id: marginal_cost(u, scn.costs, scn.co2_multiplier) for u in scn.units}
    return Prep(
        ml=ml, obz=list(clusters), arcs=arcs, onshore=onshore, big_m=big_m,
        loads=loads, res=res, cf=cf, unit_cost=unit_cost,
        weights=np.asarray(weeks.weights, dtype=float), hours=hours,
    )


@dataclass
class ExpansionModel:
    lp: LinearProgram
    prep: Prep
    scenario: Scenario
    weeks: RepresentativeWeeks
    warnings: list[str] = field(default_factory=list)

    def census(self) -> dict[str, int]:
        return self.lp.census()

    def var(self, name: str) -> int:
        return self.lp.var_index(name)


def _supply_ceiling_warnings(prep: Prep, scn: Scenario) -> list[str]:
    out = []
    step = scn.costs.ntc_step_gw
    for z in prep.ml:
        fixed = sum(u.capacity_gw for u in scn.units if u.zone == z.id)
        fixed += sum(
            prep.big_m[a.key] * step for a in prep.arcs if z.id in (a.a, a.b)
        )
        fixed += sum(
            a.existing_gw + (scn.options.ntc_add_max_gw if a.expandable else 0.0)
            for a in prep.onshore if z.id in (a.a, a.b)
        )
        res = prep.res[z.id] if prep.res[z.id] is not None else 0.0
        gap = prep.loads[z.id] - res - fixed
        worst = float(np.max(gap))
        if worst > 1e-9:
            out.append(
                f"zone {z.id}: load exceeds the supply ceiling by up to {worst:.3f} GW; "
                "lost load will be priced in"
            )
    return out


def build_model(
    scn: Scenario,
    clusters: list[ConverterCluster] | None,
    weeks: RepresentativeWeeks,
) -> ExpansionModel:
    """Assemble the mixed-integer expansion model over the given weeks."""
    prep = prepare(scn, clusters, weeks)
    lp = LinearProgram(name=f"gtce_{scn.name}")
    k, hours = len(prep.weights), prep.hours
    costs = scn.costs
    opts = scn.options
    step_gw = costs.ntc_step_gw
    crf_h, crf_o = costs.crf_hvdc, costs.crf_owp
    fac_h = crf_h + costs.c_hvdc_varom  # capacity-linked HVDC blocks carry O&M

    directed = [(a.a, a.b) for a in prep.arcs] + [(a.b, a.a) for a in prep.arcs]
    directed_geom = {}
    for a in prep.arcs:
        directed_geom[(a.a, a.b)] = a
        directed_geom[(a.b, a.a)] = a
    kind = {z.id: "ml" for z in prep.ml}
    kind.update({c.id: "obz" for c in prep.obz})
    incident: dict[str, list[tuple[str, str]]] = {}
    for d in directed:
        incident.setdefault(d[0], []).append(d)
        incident.setdefault(d[1], []).append(d)

    # --- investment and topology variables -----------------------------
    for c in prep.obz:
        j = lp.add_var(f"owpcap_{c.id}", 0.0, c.pooled_gw)
        lp.add_objective("owp_capex", j, 1000.0 * costs.c_owp_varp_meur_mw * (crf_o + costs.c_owp_varom))

    ml_connected = sorted({a.a for a in prep.arcs if kind[a.a] == "ml"}
                          | {a.b for a in prep.arcs if kind[a.b] == "ml"})
    for m in ml_connected:
        cap = scn.zone(m).landing_cap_gw
        j = lp.add_var(f"ponmax_{m}", 0.0, cap)
        lp.add_objective("converter_acdc", j, costs.c_c_varp_acdc / 2.0 * fac_h)
    for c in prep.obz:
        flow_room = sum(prep.big_m[directed_geom[d].key] * step_gw for d in incident.get(c.id, ()))
        j = lp.add_var(f"poffmax_{c.id}", 0.0, flow_room)
        lp.add_objective("converter_acdc", j, costs.c_c_varp_acdc / 2.0 * fac_h)

    for a, b in directed:
        arc = directed_geom[(a, b)]
        m_ab = prep.big_m[arc.key]
        j = lp.add_var(f"step_{a}.{b}", 0.0, float(m_ab), integer=True)
        lp.add_objective("cable_capacity", j, step_gw * cable_cost_varLP(arc, costs) / 2.0 * fac_h)
        if kind[a] == "obz" and kind[b] == "obz":
            lp.add_objective("converter_dcdc", j, step_gw * costs.c_c_varp_dcdc / 2.0 * fac_h)
        j = lp.add_var(f"adj_{a}.{b}", 0.0, 1.0, integer=True)
        lp.add_objective("cable_fix", j, costs.c_b_fix / 2.0 * crf_h)
        lp.add_objective("cable_length", j, cable_cost_varL(arc, costs) / 2.0 * crf_h)
        if kind[a] == "obz":
            lp.add_objective("converter_fix", j, costs.c_c_fix / 2.0 * fac_h)

    for oa in prep.onshore:
        if not oa.expandable:
            continue
        j = lp.add_var(f"corr_{oa.a}.{oa.b}", 0.0, 1.0, integer=True)
        lp.add_objective("onshore_ntc", j, costs.c_ntc_varl * oa.distance_km * crf_h)
        j = lp.add_var(f"ntcadd_{oa.a}.{oa.b}", 0.0, opts.ntc_add_max_gw)
        lp.add_objective("onshore_ntc", j, costs.c_ntc_varlp * oa.distance_km * crf_h)

    # --- hourly variables ----------------------------------------------
    voll = opts.voll_eur_mwh
    for z in range(k):
        n_z = prep.weights[z]
        for t in range(hours):
            for u in scn.units:
                j = lp.add_var(f"disp_{u.id}_w{z}_h{t}", 0.0, u.capacity_gw)
                lp.add_objective("opex", j, n_z * prep.unit_cost[u.id] * 1e-3)
            for m in prep.ml:
                if prep.res[m.id] is not None:
                    lp.add_var(f"res_{m.id}_w{z}_h{t}", 0.0, float(prep.res[m.id][z, t]))
                j = lp.add_var(f"uns_{m.id}_w{z}_h{t}", 0.0, max(float(prep.loads[m.id][z, t]), 0.0))
                lp.add_objective("opex", j, n_z * voll * 1e-3)
            for c in prep.obz:
                lp.add_var(f"owp_{c.id}_w{z}_h{t}", 0.0, c.pooled_gw)
                room = sum(prep.big_m[directed_geom[d].key] * step_gw for d in incident.get(c.id, ()))
                lp.add_var(f"nex_{c.id}_w{z}_h{t}", -room, room)
            for a, b in directed:
                lp.add_var(f"flow_{a}.{b}_w{z}_h{t}", 0.0, prep.big_m[directed_geom[(a, b)].key] * step_gw)
            for oa in prep.onshore:
                ub = oa.existing_gw + (opts.ntc_add_max_gw if oa.expandable else 0.0)
                lp.add_var(f"onflow_{oa.a}.{oa.b}_w{z}_h{t}", 0.0, ub)
                lp.add_var(f"onflow_{oa.b}.{oa.a}_w{z}_h{t}", 0.0, ub)

    # --- per-arc structural rows ----------------------------------------
    for c in prep.obz:
        lp.add_row(f"owpavail_{c.id}", [(lp.var_index(f"owpcap_{c.id}"), 1.0)], LE,
                   c.pooled_gw, tag=TAG_OWP_AVAIL)
    for a, b in directed:
        arc = directed_geom[(a, b)]
        lp.add_row(
            f"bigm_{a}.{b}",
            [(lp.var_index(f"step_{a}.{b}"), 1.0), (lp.var_index(f"adj_{b}.{a}"), -float(prep.big_m[arc.key]))],
            LE, 0.0, tag=TAG_BIGM,
        )
    for arc in prep.arcs:
        a, b = arc.a, arc.b
        lp.add_row(f"stepsym_{a}.{b}",
                   [(lp.var_index(f"step_{a}.{b}"), 1.0), (lp.var_index(f"step_{b}.{a}"), -1.0)],
                   EQ, 0.0, tag=TAG_STEP_SYM)
        lp.add_row(f"adjsym_{a}.{b}",
                   [(lp.var_index(f"adj_{a}.{b}"), 1.0), (lp.var_index(f"adj_{b}.{a}"), -1.0)],
                   EQ, 0.0, tag=TAG_ADJ_SYM)
    for oa in prep.onshore:
        if oa.expandable:
            lp.add_row(
                f"corrbigm_{oa.a}.{oa.b}",
                [(lp.var_index(f"ntcadd_{oa.a}.{oa.b}"), 1.0),
                 (lp.var_index(f"corr_{oa.a}.{oa.b}"), -opts.ntc_add_max_gw)],
                LE, 0.0, tag=TAG_CORRIDOR,
            )

    # --- hourly rows -----------------------------------------------------
    for z in range(k):
        for t in range(hours):
            sfx = f"_w{z}_h{t}"
            for m in prep.ml:
                coeffs = [(lp.var_index(f"disp_{u.id}{sfx}"), 1.0) for u in scn.units if u.zone == m.id]
                if prep.res[m.id] is not None:
                    coeffs.append((lp.var_index(f"res_{m.id}{sfx}"), 1.0))
                coeffs.append((lp.var_index(f"uns_{m.id}{sfx}"), 1.0))
                for a, b in incident.get(m.id, ()):
                    if b == m.id:
                        coeffs.append((lp.var_index(f"flow_{a}.{b}{sfx}"), 1.0))
                    else:
                        coeffs.append((lp.var_index(f"flow_{a}.{b}{sfx}"), -1.0))
                for oa in prep.onshore:
                    if m.id == oa.a:
                        coeffs.append((lp.var_index(f"onflow_{oa.b}.{oa.a}{sfx}"), 1.0))
                        coeffs.append((lp.var_index(f"onflow_{oa.a}.{oa.b}{sfx}"), -1.0))
                    elif m.id == oa.b:
                        coeffs.append((lp.var_index(f"onflow_{oa.a}.{oa.b}{sfx}"), 1.0))
                        coeffs.append((lp.var_index(f"onflow_{oa.b}.{oa.a}{sfx}"), -1.0))
                lp.add_row(f"bal_{m.id}{sfx}", coeffs, EQ, float(prep.loads[m.id][z, t]),
                           tag=TAG_BALANCE)
            for c in prep.obz:
                fid = c.id
                coeffs = [(lp.var_index(f"nex_{fid}{sfx}"), 1.0)]
                for a, b in incident.get(fid, ()):
                    if a == fid:
                        coeffs.append((lp.var_index(f"flow_{a}.{b}{sfx}"), -1.0))
                    else:
                        coeffs.append((lp.var_index(f"flow_{a}.{b}{sfx}"), 1.0))
                lp.add_row(f"nex_{fid}{sfx}", coeffs, EQ, 0.0, tag=TAG_NET_EXPORT)
                lp.add_row(
                    f"bal_{fid}{sfx}",
                    [(lp.var_index(f"owp_{fid}{sfx}"), 1.0), (lp.var_index(f"nex_{fid}{sfx}"), -1.0)],
                    EQ, 0.0, tag=TAG_OBZ_BALANCE,
                )
                lp.add_row(
                    f"owpcf_{fid}{sfx}",
                    [(lp.var_index(f"owp_{fid}{sfx}"), 1.0),
                     (lp.var_index(f"owpcap_{fid}"), -float(prep.cf[fid][z, t]))],
                    LE, 0.0, tag=TAG_OWP_FEEDIN,
                )
            for a, b in directed:
                tag = TAG_FLOW_FROM_OBZ if kind[a] == "obz" else TAG_FLOW_TO_OBZ
                lp.add_row(
                    f"fcap_{a}.{b}{sfx}",
                    [(lp.var_index(f"flow_{a}.{b}{sfx}"), 1.0),
                     (lp.var_index(f"step_{a}.{b}"), -step_gw)],
                    LE, 0.0, tag=tag,
                )
            for m in ml_connected:
                cap = scn.zone(m).landing_cap_gw
                inflow = [(lp.var_index(f"flow_{a}.{b}{sfx}"), 1.0)
                          for a, b in incident.get(m, ()) if b == m]
                outflow = [(lp.var_index(f"flow_{a}.{b}{sfx}"), 1.0)
                           for a, b in incident.get(m, ()) if a == m]
                lp.add_row(f"land_in_{m}{sfx}", inflow, LE, cap, tag=TAG_LANDING)
                lp.add_row(f"land_out_{m}{sfx}", outflow, LE, cap, tag=TAG_LANDING)
                pj = lp.var_index(f"ponmax_{m}")
                lp.add_row(f"rate_on_in_{m}{sfx}", inflow + [(pj, -1.0)], LE, 0.0, tag=TAG_RATE_ON)
                lp.add_row(f"rate_on_out_{m}{sfx}", outflow + [(pj, -1.0)], LE, 0.0, tag=TAG_RATE_ON)
            for c in prep.obz:
                fid = c.id
                inflow = [(lp.var_index(f"flow_{a}.{b}{sfx}"), 1.0)
                          for a, b in incident.get(fid, ()) if b == fid]
                outflow = [(lp.var_index(f"flow_{a}.{b}{sfx}"), 1.0)
                           for a, b in incident.get(fid, ()) if a == fid]
                pj = lp.var_index(f"poffmax_{fid}")
                lp.add_row(f"rate_off_in_{fid}{sfx}", inflow + [(pj, -1.0)], LE, 0.0, tag=TAG_RATE_OFF)
                lp.add_row(f"rate_off_out_{fid}{sfx}", outflow + [(pj, -1.0)], LE, 0.0, tag=TAG_RATE_OFF)
            for oa in prep.onshore:
                if not oa.expandable:
                    continue
                addj = lp.var_index(f"ntcadd_{oa.a}.{oa.b}")
                for x, y in ((oa.a, oa.b), (oa.b, oa.a)):
                    lp.add_row(
                        f"onfcap_{x}.{y}{sfx}",
                        [(lp.var_index(f"onflow_{x}.{y}{sfx}"), 1.0), (addj, -1.0)],
                        LE, oa.existing_gw, tag=TAG_ONSHORE,
                    )

    # --- weekly energy budgets -------------------------------------------
    for u in scn.units:
        if u.fuel != "hydro":
            continue
        budget = u.capacity_gw * hours * opts.hydro_week_availability
        for z in range(k):
            coeffs = [(lp.var_index(f"disp_{u.id}_w{z}_h{t}"), 1.0) for t in range(hours)]
            lp.add_row(f"hydro_{u.id}_w{z}", coeffs, LE, budget, tag=TAG_HYDRO)

    model = ExpansionModel(lp=lp, prep=prep, scenario=scn, weeks=weeks)
    model.warnings = _supply_ceiling_warnings(prep, scn)
    return model


def export_lp(model: ExpansionModel, path=None) -> str:
    return write_lp(model.lp, path)


@dataclass
class Solution:
    status: str  # "optimal" | "node_limit"
    objective: float
    values: dict[str, float]
    breakdown: dict[str, float]
    gap: float
    bound: float
    nodes: int
    log: list[str] = field(default_factory=list)


@dataclass
class FixedTopology:
    """Integer and capacity decisions frozen for downstream dispatch."""

    steps: dict[tuple[str, str], int]  # undirected arc key -> connection count
    adjacency: set[tuple[str, str]]
    owp_capacity_gw: dict[str, float]
    rating_on_gw: dict[str, float]
    rating_off_gw: dict[str, float]
    ntc_added_gw: dict[tuple[str, str], float]
    corridors: set[tuple[str, str]]


def solve_mip(model: ExpansionModel, rel_gap: float = defaults.REL_GAP,
              node_limit: int = defaults.NODE_LIMIT) -> Solution:
    """Solve to proven gap; raises InfeasibleError when no solution exists."""
    res = branch_and_bound(model.lp, rel_gap=rel_gap, node_limit=node_limit)
    if res.status == "infeasible":
        diag = solve_lp(model.lp, diagnose=True)
        raise InfeasibleError(
            f"model {model.lp.name} has no feasible solution", diag.certificate
        )
    if res.x is None:
        from .errors import SolverLimitError

        raise SolverLimitError(
            f"node limit {node_limit} hit before any integral solution was found"
        )
    values = {}
    x = res.x.copy()
    for j in model.lp.compile().integers:
        if abs(x[j] - round(x[j])) > INT_TOL:
            raise RuntimeError(f"non-integral integer variable {model.lp.vars[j].name}")
        x[j] = round(x[j])
    for v, xv in zip(model.lp.vars, x):
        values[v.name] = float(xv)
    breakdown = cost_breakdown(values, model)
    sol = Solution(
        status=res.status if res.status != "node_limit" else "node_limit",
        objective=float(res.objective),
        values=values,
        breakdown=breakdown,
        gap=float(res.gap),
        bound=float(res.bound),
        nodes=res.nodes,
        log=list(res.log),
    )
    problems = check_solution(model, sol)
    if problems:
        raise RuntimeError("solution violates model invariants: " + "; ".join(problems))
    return sol


def cost_breakdown(values: dict[str, float], model: ExpansionModel) -> dict[str, float]:
    """Re-evaluate every cost term from variable values, independent of the
    solver's objective vector, and cross-check their sum."""
    scn, prep = model.scenario, model.prep
    costs = scn.costs
    crf_h, crf_o = costs.crf_hvdc, costs.crf_owp
    fac_h = crf_h + costs.c_hvdc_varom
    step_gw = costs.ntc_step_gw
    k, hours = len(prep.weights), prep.hours
    kind = {z.id: "ml" for z in prep.ml}
    kind.update({c.id: "obz" for c in prep.obz})

    out = {t: 0.0 for t in OBJ_TERMS}
    for z in range(k):
        n_z = prep.weights[z]
        for t in range(hours):
            sfx = f"_w{z}_h{t}"
            for u in scn.units:
                out["opex"] += n_z * prep.unit_cost[u.id] * 1e-3 * values[f"disp_{u.id}{sfx}"]
            for m in prep.ml:
                out["opex"] += n_z * scn.options.voll_eur_mwh * 1e-3 * values[f"uns_{m.id}{sfx}"]
    for c in prep.obz:
        out["owp_capex"] += (
            1000.0 * costs.c_owp_varp_meur_mw * (crf_o + costs.c_owp_varom) * values[f"owpcap_{c.id}"]
        )
    for arc in prep.arcs:
        for a, b in ((arc.a, arc.b), (arc.b, arc.a)):
            adj = values[f"adj_{a}.{b}"]
            stp = values[f"step_{a}.{b}"]
            out["cable_fix"] += costs.c_b_fix / 2.0 * crf_h * adj
            out["cable_length"] += cable_cost_varL(arc, costs) / 2.0 * crf_h * adj
            out["cable_capacity"] += step_gw * cable_cost_varLP(arc, costs) / 2.0 * fac_h * stp
            if kind[a] == "obz":
                out["converter_fix"] += costs.c_c_fix / 2.0 * fac_h * adj
            if kind[a] == "obz" and kind[b] == "obz":
                out["converter_dcdc"] += step_gw * costs.c_c_varp_dcdc / 2.0 * fac_h * stp
    for name, v in values.items():
        if name.startswith("ponmax_") or name.startswith("poffmax_"):
            out["converter_acdc"] += costs.c_c_varp_acdc / 2.0 * fac_h * v
    for oa in prep.onshore:
        if oa.expandable:
            out["onshore_ntc"] += costs.c_ntc_varl * oa.distance_km * crf_h * values[f"corr_{oa.a}.{oa.b}"]
            out["onshore_ntc"] += costs.c_ntc_varlp * oa.distance_km * crf_h * values[f"ntcadd_{oa.a}.{oa.b}"]
    return out


def breakdown_gap(solution: Solution) -> float:
    total = sum(solution.breakdown.values())
    return abs(total - solution.objective) / max(abs(solution.objective), 1e-9)


def extract_topology(model: ExpansionModel, solution: Solution) -> FixedTopology:
    prep = model.prep
    v = solution.values
    steps = {}
    adjacency = set()
    for arc in prep.arcs:
        s_ab = int(round(v[f"step_{arc.a}.{arc.b}"]))
        s_ba = int(round(v[f"step_{arc.b}.{arc.a}"]))
        if s_ab != s_ba:
            raise RuntimeError(f"asymmetric steps on {arc.a}-{arc.b}")
        if s_ab > 0:
            steps[arc.key] = s_ab
        if round(v[f"adj_{arc.a}.{arc.b}"]) == 1:
            adjacency.add(arc.key)
    return FixedTopology(
        steps=steps,
        adjacency=adjacency,
        owp_capacity_gw={c.id: v[f"owpcap_{c.id}"] for c in prep.obz},
        rating_on_gw={m: v[f"ponmax_{m}"] for m in prep.ml_ids if f"ponmax_{m}" in v},
        rating_off_gw={c.id: v[f"poffmax_{c.id}"] for c in prep.obz},
        ntc_added_gw={
            (oa.a, oa.b): v[f"ntcadd_{oa.a}.{oa.b}"]
            for oa in prep.onshore if oa.expandable
        },
        corridors={
            (oa.a, oa.b)
            for oa in prep.onshore
            if oa.expandable and round(v[f"corr_{oa.a}.{oa.b}"]) == 1
        },
    )


def check_solution(model: ExpansionModel, solution: Solution, tol: float = 1e-6) -> list[str]:
    """Structural invariants every accepted solution must satisfy."""
    prep, scn = model.prep, model.scenario
    v = solution.values
    bad: list[str] = []
    k, hours = len(prep.weights), prep.hours
    step_gw = scn.costs.ntc_step_gw

    for j in model.lp.compile().integers:
        name = model.lp.vars[j].name
        if abs(v[name] - round(v[name])) > tol:
            bad.append(f"{name} not integral")

    for arc in prep.arcs:
        a, b = arc.a, arc.b
        if abs(v[f"step_{a}.{b}"] - v[f"step_{b}.{a}"]) > tol:
            bad.append(f"steps asymmetric on {a}-{b}")
        if abs(v[f"adj_{a}.{b}"] - v[f"adj_{b}.{a}"]) > tol:
            bad.append(f"adjacency asymmetric on {a}-{b}")
        if round(v[f"adj_{a}.{b}"]) == 0:
            if v[f"step_{a}.{b}"] > tol:
                bad.append(f"steps without adjacency on {a}-{b}")
            peak = max(
                v[f"flow_{a}.{b}_w{z}_h{t}"] + v[f"flow_{b}.{a}_w{z}_h{t}"]
                for z in range(k) for t in range(hours)
            )
            if peak > tol:
                bad.append(f"flow on unbuilt arc {a}-{b}")

    incident_in: dict[str, list[str]] = {}
    incident_out: dict[str, list[str]] = {}
    for arc in prep.arcs:
        for a, b in ((arc.a, arc.b), (arc.b, arc.a)):
            incident_out.setdefault(a, []).append(f"flow_{a}.{b}")
            incident_in.setdefault(b, []).append(f"flow_{a}.{b}")

    for z in range(k):
        for t in range(hours):
            sfx = f"_w{z}_h{t}"
            for m in prep.ml:
                cap = scn.zone(m.id).landing_cap_gw
                inflow = sum(v[f"{nm}{sfx}"] for nm in incident_in.get(m.id, ()))
                outflow = sum(v[f"{nm}{sfx}"] for nm in incident_out.get(m.id, ()))
                if inflow > cap + tol or outflow > cap + tol:
                    bad.append(f"landing cap exceeded at {m.id} w{z} h{t}")
                if f"ponmax_{m.id}" in v and max(inflow, outflow) > v[f"ponmax_{m.id}"] + tol:
                    bad.append(f"converter rating exceeded at {m.id} w{z} h{t}")
                supply = sum(v[f"disp_{u.id}{sfx}"] for u in scn.units if u.zone == m.id)
                if prep.res[m.id] is not None:
                    supply += v[f"res_{m.id}{sfx}"]
                supply += v[f"uns_{m.id}{sfx}"] + inflow - outflow
                for oa in prep.onshore:
                    if m.id == oa.a:
                        supply += v[f"onflow_{oa.b}.{oa.a}{sfx}"] - v[f"onflow_{oa.a}.{oa.b}{sfx}"]
                    elif m.id == oa.b:
                        supply += v[f"onflow_{oa.a}.{oa.b}{sfx}"] - v[f"onflow_{oa.b}.{oa.a}{sfx}"]
                if abs(supply - prep.loads[m.id][z, t]) > tol:
                    bad.append(f"balance residual at {m.id} w{z} h{t}")
            for c in prep.obz:
                fid = c.id
                feed = v[f"owp_{fid}{sfx}"]
                capterm = prep.cf[fid][z, t] * v[f"owpcap_{fid}"]
                if feed < -tol or feed > capterm + tol:
                    bad.append(f"feed-in outside [0, cf*cap] at {fid} w{z} h{t}")
                inflow = sum(v[f"{nm}{sfx}"] for nm in incident_in.get(fid, ()))
                outflow = sum(v[f"{nm}{sfx}"] for nm in incident_out.get(fid, ()))
                if abs(feed - (outflow - inflow)) > tol:
                    bad.append(f"obz balance residual at {fid} w{z} h{t}")
                if max(inflow, outflow) > v[f"poffmax_{fid}"] + tol:
                    bad.append(f"offshore rating exceeded at {fid} w{z} h{t}")
            for arc in prep.arcs:
                for a, b in ((arc.a, arc.b), (arc.b, arc.a)):
                    if v[f"flow_{a}.{b}{sfx}"] > step_gw * v[f"step_{a}.{b}"] + tol:
                        bad.append(f"flow above stepped capacity on {a}->{b} w{z} h{t}")
    return bad
