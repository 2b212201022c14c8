"""End-to-end runs: clustering, solving, evaluating, and bundle writing.

Every run writes a self-contained bundle under ``<out>/<run-id>/`` where
the run id is a content hash of the semantic inputs (scenario digest,
seed, tolerances) — never of the output location or the worker count, so
reruns land on the same directory with byte-identical files.  Wall-clock
timestamps appear only in ``log.txt``.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import re
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import defaults
from .errors import InfeasibleError, SolverLimitError, ValidationError
from .expansion import (
    FixedTopology,
    build_model,
    export_lp,
    extract_topology,
    solve_mip,
)
from .geo import ConverterCluster, cluster_sites, clusters_from_zones, superimpose_grid, write_clusters_csv
from .market import (
    MarketOutcome,
    congestion_rent,
    consumer_surplus_delta,
    duration_curve,
    fixed_topology_dispatch,
    owp_margin,
    producer_surplus_delta,
    reference_topology,
    trade_balance,
)
from .scenario import Scenario, validate
from .timeclust import (
    RepresentativeWeeks,
    cluster_weeks,
    slice_weeks,
    wind_capacity_factor,
    write_weeks_csv,
)
from .topo import TopologyConfig, cluster_topologies, config_from_topology, topology_to_dict

ANNUALIZE = defaults.CALENDAR_YEAR_H / defaults.MODEL_YEAR_H


# --------------------------------------------------------------------------
# identity


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def scenario_digest(scn: Scenario) -> str:
    """Content hash over everything that can influence results."""
    h = hashlib.sha256()
    doc = {
        "name": scn.name,
        "zones": [(z.id, z.kind, z.lon, z.lat, z.landing_cap_gw, z.available_gw) for z in scn.zones],
        "units": [(u.id, u.zone, u.capacity_gw, u.efficiency, u.fuel, u.om_eur_mwh) for u in scn.units],
        "costs": [(f.name, getattr(scn.costs, f.name)) for f in dataclasses.fields(scn.costs)],
        "options": [(f.name, getattr(scn.options, f.name)) for f in dataclasses.fields(scn.options)],
        "co2_multiplier": scn.co2_multiplier,
        "ntc": sorted((a, b, v) for a, row in scn.ntc.items() for b, v in row.items()),
        "mask": sorted(tuple(p) for p in scn.mask_pairs),
        "connection_rules": scn.connection_rules,
        "arc_overrides": sorted((k, sorted(v.items())) for k, v in scn.arc_overrides.items()),
        "sites": [(s.id, s.polygon, s.density_mw_km2) for s in scn.sites],
        "wind_kind": scn.wind_kind,
    }
    h.update(json.dumps(doc, sort_keys=True, default=list).encode())
    for label, table in (("load", scn.loads), ("res", scn.res), ("wind", scn.wind)):
        for key in sorted(table):
            h.update(f"{label}:{key}".encode())
            h.update(np.ascontiguousarray(table[key], dtype=float).tobytes())
    return h.hexdigest()


def run_manifest(stage: str, scn: Scenario, *, seed: int, rel_gap: float,
                 max_dist_km: float, nrmse_tol: float, extra: dict | None = None) -> dict:
    m = {
        "stage": stage,
        "scenario_digest": scenario_digest(scn),
        "scenario_name": scn.name,
        "co2_multiplier": scn.co2_multiplier,
        "seed": seed,
        "rel_gap": rel_gap,
        "max_dist_km": max_dist_km,
        "nrmse_tol": nrmse_tol,
    }
    if extra:
        m["extra"] = extra
    return m


def run_id(manifest: dict) -> str:
    return hashlib.sha256(canonical_json(manifest).encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# bundle plumbing


class Bundle:
    """One run directory; text artifacts written deterministically."""

    def __init__(self, out_dir: str | Path, rid: str):
        self.dir = Path(out_dir) / rid
        self.dir.mkdir(parents=True, exist_ok=True)
        self._log: list[str] = []

    def log(self, message: str) -> None:
        stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        self._log.append(f"[{stamp}] {message}")

    def write_text(self, name: str, text: str) -> None:
        (self.dir / name).write_text(text)

    def write_json(self, name: str, obj) -> None:
        self.write_text(name, canonical_json(obj))

    def write_csv(self, name: str, header: list[str], rows: list[list]) -> None:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(
                repr(float(v)) if isinstance(v, float) else str(v) for v in row
            ))
        self.write_text(name, "\n".join(lines) + "\n")

    def flush_log(self) -> None:
        self.write_text("log.txt", "\n".join(self._log) + "\n")


def topology_payload(topo: FixedTopology, step_gw: float) -> dict:
    return {
        "step_gw": step_gw,
        "steps": [
            {"a": a, "b": b, "count": n, "capacity_gw": n * step_gw}
            for (a, b), n in sorted(topo.steps.items())
        ],
        "adjacency": [[a, b] for a, b in sorted(topo.adjacency)],
        "owp_capacity_gw": dict(sorted(topo.owp_capacity_gw.items())),
        "rating_on_gw": dict(sorted(topo.rating_on_gw.items())),
        "rating_off_gw": dict(sorted(topo.rating_off_gw.items())),
        "ntc_added_gw": [
            {"a": a, "b": b, "gw": v} for (a, b), v in sorted(topo.ntc_added_gw.items())
        ],
        "corridors": [[a, b] for a, b in sorted(topo.corridors)],
    }


def topology_from_payload(doc: dict) -> FixedTopology:
    return FixedTopology(
        steps={(s["a"], s["b"]): int(s["count"]) for s in doc.get("steps", [])},
        adjacency={tuple(p) for p in doc.get("adjacency", [])},
        owp_capacity_gw={k: float(v) for k, v in doc.get("owp_capacity_gw", {}).items()},
        rating_on_gw={k: float(v) for k, v in doc.get("rating_on_gw", {}).items()},
        rating_off_gw={k: float(v) for k, v in doc.get("rating_off_gw", {}).items()},
        ntc_added_gw={(e["a"], e["b"]): float(e["gw"]) for e in doc.get("ntc_added_gw", [])},
        corridors={tuple(p) for p in doc.get("corridors", [])},
    )


# --------------------------------------------------------------------------
# stages


def stage_clusters(scn: Scenario, seed: int, max_dist_km: float) -> list[ConverterCluster]:
    if scn.sites:
        nodes = superimpose_grid(scn.sites, scn.options.grid_spacing_km)
        return cluster_sites(
            nodes, max_dist_km=max_dist_km, seed=seed,
            weighted=scn.options.weighted_site_clustering,
        )
    return clusters_from_zones(scn.zones)


def clustering_series(scn: Scenario) -> dict[str, np.ndarray]:
    """Hourly series feeding the week clustering: loads, RES, site CFs."""
    series: dict[str, np.ndarray] = {}
    for z, arr in scn.loads.items():
        series[f"load_{z}"] = np.asarray(arr, dtype=float)
    for z, arr in scn.res.items():
        series[f"res_{z}"] = np.asarray(arr, dtype=float)
    opts = scn.options
    for sid, arr in scn.wind.items():
        if scn.wind_kind == "speed":
            series[f"cf_{sid}"] = wind_capacity_factor(
                np.asarray(arr, dtype=float), opts.cut_in_ms, opts.rated_ms, opts.cut_out_ms
            )
        else:
            series[f"cf_{sid}"] = np.clip(np.asarray(arr, dtype=float), 0.0, 1.0)
    return series


def stage_weeks(scn: Scenario, seed: int, nrmse_tol: float) -> RepresentativeWeeks:
    matrix = slice_weeks(clustering_series(scn))
    return cluster_weeks(
        matrix,
        tolerance=nrmse_tol,
        seed=seed,
        multivariate=scn.options.multivariate_weeks,
        norm=scn.options.nrmse_norm,
    )


def _cluster_summary(clusters: list[ConverterCluster]) -> list[dict]:
    return [
        {
            "id": c.id, "lon": c.lon, "lat": c.lat, "pooled_gw": c.pooled_gw,
            "members": len(c.member_ids), "max_member_km": c.max_member_km,
        }
        for c in clusters
    ]


def _weeks_summary(weeks: RepresentativeWeeks) -> dict:
    return {
        "k": int(weeks.k),
        "weights": [int(w) for w in weeks.weights],
        "source_weeks": [int(w) for w in weeks.source_weeks],
        "nrmse": weeks.nrmse,
        "basis": list(weeks.basis_ids),
        "energy_error": {k: v for k, v in sorted(weeks.energy_error.items())},
    }


def _solution_summary(sol) -> dict:
    return {
        "status": sol.status,
        "objective_meur": sol.objective,
        "bound_meur": sol.bound,
        "rel_gap": sol.gap,
        "nodes": sol.nodes,
        "breakdown_meur": {k: v for k, v in sorted(sol.breakdown.items())},
    }


def _require_valid(scn: Scenario) -> None:
    violations = validate(scn)
    if violations:
        raise ValidationError(violations)


def _market_csvs(bundle: Bundle, off: MarketOutcome, ref: MarketOutcome,
                 topo: FixedTopology, mainland: list[str]) -> dict:
    rows = []
    for zone in off.zones:
        p = off.prices[zone]
        for w in range(p.shape[0]):
            for h in range(p.shape[1]):
                rows.append([zone, w, h, float(p[w, h])])
    bundle.write_csv("mcp.csv", ["zone", "week", "hour", "price_eur_mwh"], rows)

    surplus_rows = []
    summary_cs, summary_ps, margins = {}, {}, {}
    for zone in mainland:
        dcs = consumer_surplus_delta(ref, off, zone)
        dps = producer_surplus_delta(ref, off, zone)
        summary_cs[zone], summary_ps[zone] = dcs, dps
        surplus_rows.append([zone, float(dcs), float(dps)])
    for fid in sorted(topo.owp_capacity_gw):
        margin = owp_margin(off, fid)
        margins[fid] = margin
        surplus_rows.append([fid, 0.0, float(margin)])
    bundle.write_csv("surplus.csv", ["zone", "delta_cs_meur", "delta_ps_meur"], surplus_rows)

    balance = trade_balance(off)
    bundle.write_csv(
        "balance.csv", ["from", "to", "twh"],
        [[a, b, float(v)] for (a, b), v in sorted(balance.items())],
    )

    for fid in sorted(off.owp_feed):
        if topo.owp_capacity_gw.get(fid, 0.0) <= 0:
            continue
        curve = duration_curve(off.owp_feed[fid], off.weights)
        bundle.write_csv(
            f"duration_{fid}.csv", ["rank", "hours_at_or_above", "feed_gw"],
            [[i, float((i + 1) * ANNUALIZE), float(v)] for i, v in enumerate(curve)],
        )

    unserved = {
        z: float(np.sum(off.weights[:, None] * off.unserved[z])) * 1e-3 * ANNUALIZE
        for z in sorted(off.unserved)
    }
    return {
        "opex_off_meur": off.opex_meur * ANNUALIZE,
        "opex_ref_meur": ref.opex_meur * ANNUALIZE,
        "delta_cs_meur": summary_cs,
        "delta_ps_meur": summary_ps,
        "owp_margin_meur": margins,
        "congestion_rent_off_meur": congestion_rent(off),
        "congestion_rent_ref_meur": congestion_rent(ref),
        "curtailed_twh": {k: v for k, v in sorted(off.curtailed_twh.items())},
        "unserved_twh": unserved,
        "trade_balance_twh": {f"{a}->{b}": v for (a, b), v in sorted(balance.items())},
    }


def _built_summary(topo: FixedTopology, step_gw: float) -> dict:
    return {
        "owp_gw": dict(sorted(topo.owp_capacity_gw.items())),
        "total_owp_gw": sum(topo.owp_capacity_gw.values()),
        "arcs": [
            {"a": a, "b": b, "steps": n, "capacity_gw": n * step_gw}
            for (a, b), n in sorted(topo.steps.items())
        ],
        "n_arcs": len(topo.steps),
        "ntc_added_gw": {f"{a}-{b}": v for (a, b), v in sorted(topo.ntc_added_gw.items())},
        "corridors": [f"{a}-{b}" for a, b in sorted(topo.corridors)],
    }


def run_solve(
    scn: Scenario,
    out_dir: str | Path,
    *,
    seed: int = 0,
    rel_gap: float = defaults.REL_GAP,
    jobs: int = 1,
    max_dist_km: float = defaults.MAX_DIST_KM,
    nrmse_tol: float = defaults.NRMSE_TOL,
    extra: dict | None = None,
) -> tuple[Path, dict]:
    """Full pipeline at one price point; returns the bundle path and summary."""
    _require_valid(scn)
    manifest = run_manifest("solve", scn, seed=seed, rel_gap=rel_gap,
                            max_dist_km=max_dist_km, nrmse_tol=nrmse_tol, extra=extra)
    rid = run_id(manifest)
    bundle = Bundle(out_dir, rid)
    bundle.log(f"run {rid}: scenario {scn.name}, co2 multiplier {scn.co2_multiplier}")

    clusters = stage_clusters(scn, seed, max_dist_km)
    bundle.log(f"site clustering: {len(clusters)} converter positions")
    weeks = stage_weeks(scn, seed, nrmse_tol)
    bundle.log(f"week clustering: k={weeks.k}, nrmse={weeks.nrmse:.4f}")

    model = build_model(scn, clusters, weeks)
    export_lp(model, bundle.dir / "model.lp")
    bundle.log(f"model: {len(model.lp.vars)} vars, {len(model.lp.rows)} rows")
    for w in model.warnings:
        bundle.log(f"warning: {w}")

    sol = solve_mip(model, rel_gap=rel_gap)
    bundle.log(f"solve: {sol.status}, objective {sol.objective:.4f}, nodes {sol.nodes}")
    topo = extract_topology(model, sol)

    investment = {name: v for name, v in sol.values.items() if not _is_hourly(name)}
    bundle.write_json("solution.json", {
        **_solution_summary(sol),
        "investment": dict(sorted(investment.items())),
    })
    step_gw = scn.costs.ntc_step_gw
    bundle.write_json("topology.json", topology_payload(topo, step_gw))

    off = fixed_topology_dispatch(scn, clusters, weeks, topo, jobs=jobs)
    ref = fixed_topology_dispatch(scn, clusters, weeks, reference_topology(topo), jobs=jobs)
    bundle.log("market evaluation: off and ref dispatch complete")
    mainland = [z.id for z in scn.mainland]
    market = _market_csvs(bundle, off, ref, topo, mainland)

    summary = {
        "run_id": rid,
        "manifest": manifest,
        "census": model.census(),
        "clusters": _cluster_summary(clusters),
        "weeks": _weeks_summary(weeks),
        "solution": _solution_summary(sol),
        "built": _built_summary(topo, step_gw),
        "market": market,
        "warnings": list(model.warnings),
    }
    bundle.write_json("summary.json", summary)
    bundle.flush_log()
    return bundle.dir, summary


_HOURLY_RE = re.compile(r"_w\d+_h\d+$")


def _is_hourly(name: str) -> bool:
    return bool(_HOURLY_RE.search(name))


def run_evaluate(
    scn: Scenario,
    out_dir: str | Path,
    *,
    seed: int = 0,
    rel_gap: float = defaults.REL_GAP,
    jobs: int = 1,
    max_dist_km: float = defaults.MAX_DIST_KM,
    nrmse_tol: float = defaults.NRMSE_TOL,
) -> tuple[Path, dict]:
    """Refresh market artifacts for an existing solve bundle."""
    _require_valid(scn)
    manifest = run_manifest("solve", scn, seed=seed, rel_gap=rel_gap,
                            max_dist_km=max_dist_km, nrmse_tol=nrmse_tol)
    rid = run_id(manifest)
    bundle_dir = Path(out_dir) / rid
    topo_path = bundle_dir / "topology.json"
    if not topo_path.exists():
        raise FileNotFoundError(
            f"no solve bundle for this scenario at {bundle_dir}; run solve first"
        )
    topo = topology_from_payload(json.loads(topo_path.read_text()))
    stored_summary = json.loads((bundle_dir / "summary.json").read_text())

    bundle = Bundle(out_dir, rid)
    bundle.log(f"evaluate {rid}: reusing stored topology")
    clusters = stage_clusters(scn, seed, max_dist_km)
    weeks = stage_weeks(scn, seed, nrmse_tol)
    off = fixed_topology_dispatch(scn, clusters, weeks, topo, jobs=jobs)
    ref = fixed_topology_dispatch(scn, clusters, weeks, reference_topology(topo), jobs=jobs)
    bundle.log("market evaluation: off and ref dispatch complete")
    mainland = [z.id for z in scn.mainland]
    market = _market_csvs(bundle, off, ref, topo, mainland)

    summary = dict(stored_summary)
    summary["market"] = market
    bundle.write_json("summary.json", summary)
    bundle.flush_log()
    return bundle.dir, summary


def run_cluster_sites(
    scn: Scenario, out_dir: str | Path, *, seed: int = 0,
    max_dist_km: float = defaults.MAX_DIST_KM,
) -> tuple[Path, dict]:
    _require_valid(scn)
    manifest = run_manifest("cluster-sites", scn, seed=seed, rel_gap=0.0,
                            max_dist_km=max_dist_km, nrmse_tol=0.0)
    rid = run_id(manifest)
    bundle = Bundle(out_dir, rid)
    bundle.log(f"cluster-sites {rid}")
    clusters = stage_clusters(scn, seed, max_dist_km)
    bundle.log(f"{len(clusters)} converter positions")
    write_clusters_csv(clusters, bundle.dir / "clusters.csv")
    summary = {
        "run_id": rid,
        "manifest": manifest,
        "clusters": _cluster_summary(clusters),
        "n_clusters": len(clusters),
    }
    bundle.write_json("summary.json", summary)
    bundle.flush_log()
    return bundle.dir, summary


def run_cluster_weeks(
    scn: Scenario, out_dir: str | Path, *, seed: int = 0,
    nrmse_tol: float = defaults.NRMSE_TOL,
) -> tuple[Path, dict]:
    _require_valid(scn)
    manifest = run_manifest("cluster-weeks", scn, seed=seed, rel_gap=0.0,
                            max_dist_km=0.0, nrmse_tol=nrmse_tol)
    rid = run_id(manifest)
    bundle = Bundle(out_dir, rid)
    bundle.log(f"cluster-weeks {rid}")
    weeks = stage_weeks(scn, seed, nrmse_tol)
    bundle.log(f"k={weeks.k}, nrmse={weeks.nrmse:.4f}")
    write_weeks_csv(weeks, bundle.dir / "weeks.csv")
    summary = {"run_id": rid, "manifest": manifest, "weeks": _weeks_summary(weeks)}
    bundle.write_json("summary.json", summary)
    bundle.flush_log()
    return bundle.dir, summary


def run_sweep(
    scn: Scenario,
    multipliers: list[float],
    out_dir: str | Path,
    *,
    seed: int = 0,
    rel_gap: float = defaults.REL_GAP,
    jobs: int = 1,
    max_dist_km: float = defaults.MAX_DIST_KM,
    nrmse_tol: float = defaults.NRMSE_TOL,
) -> tuple[list[dict], int]:
    """One full run per CO2 multiplier; failures skip the point, not the sweep."""
    if not multipliers:
        raise ValidationError(["sweep needs at least one multiplier"])
    if any(m <= 0 for m in multipliers):
        raise ValidationError([f"multipliers must be positive: {multipliers}"])
    if sorted(multipliers) != list(multipliers):
        raise ValidationError([f"multipliers must be ascending: {multipliers}"])
    _require_valid(scn)

    def run_point(mult: float) -> dict:
        point = scn.with_co2_multiplier(mult)
        co2 = point.costs.co2_eur_t * mult
        try:
            bundle_dir, summary = run_solve(
                point, out_dir, seed=seed, rel_gap=rel_gap, jobs=1,
                max_dist_km=max_dist_km, nrmse_tol=nrmse_tol,
            )
        except (InfeasibleError, SolverLimitError, ValidationError, OSError) as e:
            return {
                "multiplier": mult, "co2_eur_t": co2, "error": str(e),
                "kind": type(e).__name__,
            }
        return {
            "multiplier": mult,
            "co2_eur_t": co2,
            "run_id": summary["run_id"],
            "built_owp_gw": summary["built"]["total_owp_gw"],
            "built_arcs": summary["built"]["n_arcs"],
            "objective_meur": summary["solution"]["objective_meur"],
            "opex_meur": summary["solution"]["breakdown_meur"]["opex"],
        }

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_point, multipliers))
    else:
        rows = [run_point(m) for m in multipliers]

    failures = sum(1 for r in rows if "error" in r)
    table_rows = [
        [
            r["multiplier"], r["co2_eur_t"],
            r.get("built_owp_gw", ""), r.get("built_arcs", ""),
            r.get("objective_meur", ""), r.get("opex_meur", ""),
            r.get("run_id", r.get("kind", "")),
        ]
        for r in rows
    ]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["multiplier,co2_eur_t,built_owp_gw,built_arcs,objective_meur,opex_meur,run_id"]
    for row in table_rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row))
    (out / "sweep_summary.csv").write_text("\n".join(lines) + "\n")
    return rows, failures


def _year_slices(scn: Scenario) -> list[Scenario]:
    tables = [t for t in (scn.loads, scn.res, scn.wind) if t]
    if not tables:
        raise ValidationError(["single-year study needs hourly series"])
    lengths = {len(v) for t in tables for v in t.values()}
    if len(lengths) != 1:
        raise ValidationError([f"series lengths differ: {sorted(lengths)}"])
    (length,) = lengths
    for year_h in (defaults.CALENDAR_YEAR_H, defaults.MODEL_YEAR_H):
        if length % year_h == 0:
            break
    else:
        raise ValidationError([f"series length {length} is not a whole number of years"])
    years = length // year_h

    def cut(table: dict[str, np.ndarray], y: int) -> dict[str, np.ndarray]:
        return {k: np.asarray(v)[y * year_h:(y + 1) * year_h] for k, v in table.items()}

    return [
        dataclasses.replace(
            scn,
            name=f"{scn.name}_y{y:02d}",
            loads=cut(scn.loads, y), res=cut(scn.res, y), wind=cut(scn.wind, y),
        )
        for y in range(years)
    ]


def run_single_year_study(
    scn: Scenario,
    out_dir: str | Path,
    *,
    seed: int = 0,
    rel_gap: float = defaults.REL_GAP,
    jobs: int = 1,
    max_dist_km: float = defaults.MAX_DIST_KM,
    nrmse_tol: float = defaults.NRMSE_TOL,
    k_groups: int = 3,
) -> dict:
    """One solve per weather year, then grouping of the solved layouts."""
    _require_valid(scn)
    years = _year_slices(scn)
    clusters = stage_clusters(scn, seed, max_dist_km)
    zones = [z.id for z in scn.mainland] + [c.id for c in clusters]

    def run_year(item: tuple[int, Scenario]) -> dict:
        y, year_scn = item
        label = f"y{y:02d}"
        try:
            bundle_dir, summary = run_solve(
                year_scn, out_dir, seed=seed, rel_gap=rel_gap, jobs=1,
                max_dist_km=max_dist_km, nrmse_tol=nrmse_tol, extra={"year": label},
            )
        except (InfeasibleError, SolverLimitError, ValidationError, OSError) as e:
            return {"year": label, "error": str(e), "kind": type(e).__name__}
        return {"year": label, "run_id": summary["run_id"], "summary": summary}

    items = list(enumerate(years))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_year, items))
    else:
        results = [run_year(it) for it in items]

    configs: list[TopologyConfig] = []
    for r in results:
        if "error" in r:
            continue
        built = r["summary"]["built"]
        arcs = tuple((a["a"], a["b"], float(a["capacity_gw"])) for a in built["arcs"])
        owp = tuple(sorted((k, float(v)) for k, v in built["owp_gw"].items()))
        configs.append(TopologyConfig(
            label=r["year"], zones=tuple(zones),
            arc_capacity_gw=arcs, owp_capacity_gw=owp,
        ))

    study: dict = {
        "years": [
            {k: v for k, v in r.items() if k != "summary"} for r in results
        ],
        "n_years": len(years),
        "n_solved": len(configs),
        "configs": [topology_to_dict(c) for c in configs],
    }
    if configs:
        k = min(k_groups, len(configs))
        groups = cluster_topologies(configs, k, seed=seed)
        study["groups"] = {
            "k": k,
            "representatives": [configs[m].label for m in groups.medoids],
            "assignment": {
                c.label: configs[groups.archetype(i)].label for i, c in enumerate(configs)
            },
        }
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "study_summary.json").write_text(canonical_json(study))
    return study
