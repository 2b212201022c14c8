#!/usr/bin/env python3
"""North Sea walkthrough: converter positions and representative weeks.

Pools the demo build areas into converter positions at the configured
reach, compresses the multi-year weather into weighted representative
weeks, and writes one bundle per stage:

    python scripts/run_north_sea_demo.py --out runs/north_sea --years 21

(The full optimization on this geometry is deliberately left out: with
three market zones and twenty-odd converter positions the integer model is
far beyond desk scale.  See run_toy_sweep.py for an end-to-end solve.)
"""

import argparse

from gtce.pipeline import run_cluster_sites, run_cluster_weeks
from gtce.synth import demo_scenario


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/north_sea", help="output directory")
    ap.add_argument("--years", type=int, default=21, help="weather years")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-dist", type=float, default=70.0,
                    help="maximum node-to-converter distance in km")
    ap.add_argument("--nrmse-tol", type=float, default=0.10,
                    help="reconstruction error tolerance for week selection")
    args = ap.parse_args()

    scn = demo_scenario(years=args.years)

    bundle, summary = run_cluster_sites(scn, args.out, seed=args.seed,
                                        max_dist_km=args.max_dist)
    print(f"converter positions: {summary['n_clusters']} "
          f"(reach {args.max_dist:.0f} km) -> {bundle}")
    worst = max(c["max_member_km"] for c in summary["clusters"])
    pooled = sum(c["pooled_gw"] for c in summary["clusters"])
    print(f"  worst member distance {worst:.1f} km, pooled capacity {pooled:.1f} GW")

    bundle, summary = run_cluster_weeks(scn, args.out, seed=args.seed,
                                        nrmse_tol=args.nrmse_tol)
    wk = summary["weeks"]
    print(f"representative weeks: k={wk['k']} nrmse={wk['nrmse']:.4f} "
          f"weights={wk['weights']} -> {bundle}")


if __name__ == "__main__":
    main()
