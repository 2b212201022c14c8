#!/usr/bin/env python3
"""Materialize the shipped example scenarios as scenario.json plus CSV series.

Everything is seeded, so regenerating produces byte-identical files:

    python scripts/make_fixtures.py --out fixtures

writes three scenario directories —

  north_sea_demo/    three coastal market zones, 18 offshore build areas,
                     multi-year synthetic weather (default 21 years)
  sweep_toy/         the documented CO2-sweep fixture (two zones, one area)
  displacement_toy/  hand-sized market-effect fixture (park displaces the
                     expensive price setter)
"""

import argparse
from pathlib import Path

from gtce.synth import demo_scenario, displacement_toy, sweep_toy, write_scenario


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="fixtures", help="target directory")
    ap.add_argument("--years", type=int, default=21, help="weather years in the demo fixture")
    ap.add_argument("--seed", type=int, default=7, help="weather generator seed")
    args = ap.parse_args()

    out = Path(args.out)
    for scn in (
        demo_scenario(years=args.years, seed=args.seed),
        sweep_toy(),
        displacement_toy(),
    ):
        path = write_scenario(scn, out / scn.name)
        print(f"{scn.name}: {path}")


if __name__ == "__main__":
    main()
