#!/usr/bin/env python3
"""CO2 price sweep on the documented toy fixture.

Runs one full optimization per multiplier, writes a bundle per point plus
sweep_summary.csv, and prints the built-capacity ladder:

    python scripts/run_toy_sweep.py --out runs/toy_sweep
"""

import argparse

from gtce.pipeline import run_sweep
from gtce.synth import sweep_toy


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/toy_sweep", help="output directory")
    ap.add_argument("--multipliers", default="1.0,1.5,2.0,2.5,3.0",
                    help="comma-separated ascending CO2 multipliers")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1, help="price points solved in parallel")
    args = ap.parse_args()

    mults = [float(x) for x in args.multipliers.split(",")]
    rows, failures = run_sweep(sweep_toy(), mults, args.out, seed=args.seed, jobs=args.jobs)
    print(f"{'multiplier':>10} {'EUR/t':>8} {'built GW':>9}  run")
    for r in rows:
        if "error" in r:
            print(f"{r['multiplier']:>10.2f} {r['co2_eur_t']:>8.1f} {'—':>9}  {r['kind']}: {r['error']}")
        else:
            print(f"{r['multiplier']:>10.2f} {r['co2_eur_t']:>8.1f} {r['built_owp_gw']:>9.3f}  {r['run_id']}")
    if failures:
        raise SystemExit(f"{failures} price point(s) failed")


if __name__ == "__main__":
    main()
