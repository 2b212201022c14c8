"""Command-line driver.

Subcommands cover the pipeline stages: validate, cluster-sites,
cluster-weeks, solve, sweep, single-year-study, evaluate.  Exit codes:
0 success, 1 validation failure, 2 infeasible model, 3 solver limit,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import defaults
from .errors import InfeasibleError, SolverLimitError, ValidationError
from .pipeline import (
    run_cluster_sites,
    run_cluster_weeks,
    run_evaluate,
    run_single_year_study,
    run_solve,
    run_sweep,
)
from .scenario import Scenario, ScenarioError, load_scenario, validate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INFEASIBLE = 2
EXIT_SOLVER_LIMIT = 3
EXIT_IO = 4

_KIND_CODES = {
    "ValidationError": EXIT_VALIDATION,
    "InfeasibleError": EXIT_INFEASIBLE,
    "SolverLimitError": EXIT_SOLVER_LIMIT,
    "OSError": EXIT_IO,
    "FileNotFoundError": EXIT_IO,
}


def _parse_multipliers(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as e:
        raise ValidationError([f"bad --co2-mult value: {e}"]) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gtce",
        description="Offshore grid and capacity expansion toolkit",
    )
    sub = p.add_subparsers(dest="command", required=True)
    commands = [
        "validate", "cluster-sites", "cluster-weeks", "solve",
        "sweep", "single-year-study", "evaluate",
    ]
    for name in commands:
        sp = sub.add_parser(name)
        sp.add_argument("--scenario", required=True, help="scenario JSON file")
        sp.add_argument("--out", default="runs", help="output directory")
        sp.add_argument("--seed", type=int, default=0, help="clustering seed")
        sp.add_argument("--jobs", type=int, default=1, help="worker bound")
        sp.add_argument("--rel-gap", type=float, default=defaults.REL_GAP,
                        help="relative optimality gap")
        sp.add_argument("--co2-mult", default=None,
                        help="CO2 price multiplier(s), comma separated")
        sp.add_argument("--max-dist", type=float, default=defaults.MAX_DIST_KM,
                        help="max node-to-converter distance in km")
        sp.add_argument("--nrmse-tol", type=float, default=defaults.NRMSE_TOL,
                        help="week clustering error tolerance")
    return p


def _load(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except OSError:
        raise
    except (json.JSONDecodeError, ScenarioError, KeyError, ValueError, TypeError) as e:
        raise ValidationError([f"cannot read scenario: {e}"]) from e


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scn = _load(args.scenario)
        if args.command != "sweep" and args.co2_mult is not None:
            mults = _parse_multipliers(args.co2_mult)
            if len(mults) != 1:
                raise ValidationError(
                    [f"{args.command} takes a single --co2-mult, got {mults}"]
                )
            scn = scn.with_co2_multiplier(mults[0])

        if args.command == "validate":
            violations = validate(scn)
            if violations:
                for v in violations:
                    print(f"invalid: {v}")
                return EXIT_VALIDATION
            print(f"scenario {scn.name}: ok "
                  f"({len(scn.zones)} zones, {len(scn.units)} units)")
            return EXIT_OK

        if args.command == "cluster-sites":
            bundle_dir, summary = run_cluster_sites(
                scn, args.out, seed=args.seed, max_dist_km=args.max_dist
            )
            print(f"{summary['n_clusters']} converter positions -> {bundle_dir}")
            return EXIT_OK

        if args.command == "cluster-weeks":
            bundle_dir, summary = run_cluster_weeks(
                scn, args.out, seed=args.seed, nrmse_tol=args.nrmse_tol
            )
            wk = summary["weeks"]
            print(f"k={wk['k']} weeks, nrmse={wk['nrmse']:.4f} -> {bundle_dir}")
            return EXIT_OK

        if args.command == "solve":
            bundle_dir, summary = run_solve(
                scn, args.out, seed=args.seed, rel_gap=args.rel_gap, jobs=args.jobs,
                max_dist_km=args.max_dist, nrmse_tol=args.nrmse_tol,
            )
            sol = summary["solution"]
            built = summary["built"]
            print(f"status {sol['status']}, objective {sol['objective_meur']:.3f} MEUR/a, "
                  f"OWP {built['total_owp_gw']:.3f} GW, arcs {built['n_arcs']} -> {bundle_dir}")
            return EXIT_OK

        if args.command == "evaluate":
            bundle_dir, summary = run_evaluate(
                scn, args.out, seed=args.seed, rel_gap=args.rel_gap, jobs=args.jobs,
                max_dist_km=args.max_dist, nrmse_tol=args.nrmse_tol,
            )
            m = summary["market"]
            print(f"opex off {m['opex_off_meur']:.3f} / ref {m['opex_ref_meur']:.3f} MEUR/a "
                  f"-> {bundle_dir}")
            return EXIT_OK

        if args.command == "sweep":
            if args.co2_mult is None:
                raise ValidationError(["sweep requires --co2-mult F[,F...]"])
            mults = _parse_multipliers(args.co2_mult)
            rows, failures = run_sweep(
                scn, mults, args.out, seed=args.seed, rel_gap=args.rel_gap,
                jobs=args.jobs, max_dist_km=args.max_dist, nrmse_tol=args.nrmse_tol,
            )
            print("multiplier  co2_eur_t  built_owp_gw  built_arcs  objective_meur  opex_meur")
            for r in rows:
                if "error" in r:
                    print(f"{r['multiplier']:>10.3f}  {r['co2_eur_t']:>9.2f}  "
                          f"FAILED ({r['kind']}): {r['error']}")
                else:
                    print(f"{r['multiplier']:>10.3f}  {r['co2_eur_t']:>9.2f}  "
                          f"{r['built_owp_gw']:>12.3f}  {r['built_arcs']:>10d}  "
                          f"{r['objective_meur']:>14.3f}  {r['opex_meur']:>9.3f}")
            if failures:
                first = next(r for r in rows if "error" in r)
                return _KIND_CODES.get(first["kind"], EXIT_VALIDATION)
            return EXIT_OK

        if args.command == "single-year-study":
            study = run_single_year_study(
                scn, args.out, seed=args.seed, rel_gap=args.rel_gap, jobs=args.jobs,
                max_dist_km=args.max_dist, nrmse_tol=args.nrmse_tol,
            )
            print(f"{study['n_solved']}/{study['n_years']} years solved")
            if "groups" in study:
                print("representatives: " + ", ".join(study["groups"]["representatives"]))
            bad = [y for y in study["years"] if "error" in y]
            if bad:
                return _KIND_CODES.get(bad[0]["kind"], EXIT_VALIDATION)
            return EXIT_OK

        raise AssertionError(f"unhandled command {args.command}")

    except ValidationError as e:
        for v in e.violations:
            print(f"invalid: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        if e.certificate:
            for line in e.certificate:
                print(f"  conflicting: {line}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolverLimitError as e:
        print(f"solver limit: {e}", file=sys.stderr)
        return EXIT_SOLVER_LIMIT
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
