"""Command-line driver and run bundles: exit codes, bundle layout,
byte-level determinism, run-id identity, sweep and study flows."""

import dataclasses
import json
import re
from pathlib import Path

import numpy as np
import pytest

from gtce import defaults
from gtce.cli import (
    EXIT_INFEASIBLE,
    EXIT_IO,
    EXIT_OK,
    EXIT_SOLVER_LIMIT,
    EXIT_VALIDATION,
    main,
)
from gtce.errors import InfeasibleError, SolverLimitError
from gtce.lpfile import parse_lp
from gtce.pipeline import run_solve, run_sweep
from gtce.synth import sweep_toy, write_scenario

BUNDLE_FILES = [
    "balance.csv", "log.txt", "mcp.csv", "model.lp",
    "solution.json", "summary.json", "surplus.csv", "topology.json",
]


@pytest.fixture(scope="module")
def scenario_path(tmp_path_factory) -> str:
    d = tmp_path_factory.mktemp("scn")
    return str(write_scenario(sweep_toy(), d))


@pytest.fixture(scope="module")
def solved(scenario_path, tmp_path_factory):
    out = tmp_path_factory.mktemp("runs")
    rc = main(["solve", "--scenario", scenario_path, "--out", str(out)])
    assert rc == EXIT_OK
    (bundle,) = [p for p in out.iterdir() if p.is_dir()]
    return scenario_path, out, bundle


def two_year_scenario():
    """Tiled periodic weather: year one calm, year two windy."""
    base = sweep_toy()
    h = np.arange(defaults.MODEL_YEAR_H)
    day = np.sin(2 * np.pi * h / 24.0)
    loads = {"T1": 5.0 + 0.6 * day, "T2": 3.0 + 0.4 * day}
    def cf(level):
        return np.clip(level + 0.3 * np.sin(2 * np.pi * h / 168.0), 0.0, 1.0)
    return dataclasses.replace(
        base, name="twoyears",
        loads={k: np.concatenate([v, v]) for k, v in loads.items()},
        res={},
        wind={"F1": np.concatenate([cf(0.35), cf(0.75)])},
    )


class TestValidateCommand:
    def test_valid_scenario_passes(self, scenario_path):
        assert main(["validate", "--scenario", scenario_path]) == EXIT_OK

    def test_duplicate_zone_rejected(self, scenario_path, tmp_path):
        doc = json.loads(Path(scenario_path).read_text())
        doc["zones"].append(dict(doc["zones"][0]))
        bad = tmp_path / "scenario.json"
        bad.write_text(json.dumps(doc))
        for name in ("load.csv", "wind.csv"):
            (tmp_path / name).write_bytes((Path(scenario_path).parent / name).read_bytes())
        assert main(["validate", "--scenario", str(bad)]) == EXIT_VALIDATION

    def test_unparseable_file_is_validation_failure(self, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text("{this is not json")
        assert main(["validate", "--scenario", str(bad)]) == EXIT_VALIDATION

    def test_missing_file_is_io_failure(self, tmp_path):
        assert main(["validate", "--scenario", str(tmp_path / "nope.json")]) == EXIT_IO


class TestSolveBundle:
    def test_bundle_contains_required_files(self, solved):
        _, _, bundle = solved
        for name in BUNDLE_FILES:
            assert (bundle / name).exists(), name

    def test_summary_carries_census_and_identity(self, solved):
        _, _, bundle = solved
        summary = json.loads((bundle / "summary.json").read_text())
        assert summary["run_id"] == bundle.name
        census = summary["census"]
        assert census["rows"] > 0 and census["vars:integer"] > 0
        assert "balance-mainland" in census
        assert summary["manifest"]["stage"] == "solve"
        assert len(bundle.name) == 16

    def test_model_file_parses_back(self, solved):
        _, _, bundle = solved
        lp = parse_lp((bundle / "model.lp").read_text())
        summary = json.loads((bundle / "summary.json").read_text())
        assert len(lp.vars) == summary["census"]["vars:integer"] + summary["census"]["vars:continuous"]
        assert len(lp.rows) == summary["census"]["rows"]

    def test_solution_file_shape(self, solved):
        _, _, bundle = solved
        sol = json.loads((bundle / "solution.json").read_text())
        assert sol["status"] == "optimal"
        assert sol["rel_gap"] <= defaults.REL_GAP
        assert set(sol["breakdown_meur"]) >= {"opex", "owp_capex"}
        # investment block holds only per-build variables, no hourly ones
        assert sol["investment"]
        assert not any(re.search(r"_w\d+_h\d+$", k) for k in sol["investment"])

    def test_mcp_rows_cover_every_zone_week_hour(self, solved):
        _, _, bundle = solved
        summary = json.loads((bundle / "summary.json").read_text())
        k = summary["weeks"]["k"]
        lines = (bundle / "mcp.csv").read_text().strip().splitlines()
        assert lines[0] == "zone,week,hour,price_eur_mwh"
        zones = {ln.split(",")[0] for ln in lines[1:]}
        assert len(lines) - 1 == len(zones) * k * defaults.HOURS_PER_WEEK

    def test_log_lines_are_stamped(self, solved):
        _, _, bundle = solved
        lines = (bundle / "log.txt").read_text().strip().splitlines()
        assert lines
        assert all(re.match(r"^\[\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z\] ", ln) for ln in lines)


def bundle_bytes(d: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(d.iterdir()) if p.name != "log.txt"}


def log_without_stamps(d: Path) -> list[str]:
    lines = (d / "log.txt").read_text().splitlines()
    return [re.sub(r"^\[[^\]]+\] ", "", ln) for ln in lines]


class TestDeterminism:
    def test_identical_bytes_across_runs_and_workers(self, solved, tmp_path):
        scenario_path, _, first = solved
        rc = main(["solve", "--scenario", scenario_path, "--out", str(tmp_path / "r2")])
        assert rc == EXIT_OK
        rc = main(["solve", "--scenario", scenario_path, "--out", str(tmp_path / "r3"),
                   "--jobs", "3"])
        assert rc == EXIT_OK
        second = tmp_path / "r2" / first.name
        third = tmp_path / "r3" / first.name
        assert second.is_dir() and third.is_dir()  # same run id everywhere
        want = bundle_bytes(first)
        assert bundle_bytes(second) == want
        assert bundle_bytes(third) == want
        assert log_without_stamps(second) == log_without_stamps(first)
        assert log_without_stamps(third) == log_without_stamps(first)

    def test_seed_and_price_enter_the_run_id(self, solved, tmp_path):
        scenario_path, _, bundle = solved
        out = tmp_path / "alt"
        assert main(["solve", "--scenario", scenario_path, "--out", str(out),
                     "--seed", "1"]) == EXIT_OK
        assert main(["solve", "--scenario", scenario_path, "--out", str(out),
                     "--co2-mult", "1.5"]) == EXIT_OK
        rids = {p.name for p in out.iterdir() if p.is_dir()}
        assert len(rids) == 2
        assert bundle.name not in rids


class TestExitCodes:
    def test_infeasible_maps_to_2(self, scenario_path, tmp_path, monkeypatch):
        def boom(*a, **k):
            raise InfeasibleError("no feasible point", ["row balance_T1_h0"])
        monkeypatch.setattr("gtce.cli.run_solve", boom)
        rc = main(["solve", "--scenario", scenario_path, "--out", str(tmp_path)])
        assert rc == EXIT_INFEASIBLE

    def test_solver_limit_maps_to_3(self, scenario_path, tmp_path, monkeypatch):
        def boom(*a, **k):
            raise SolverLimitError("node limit hit")
        monkeypatch.setattr("gtce.cli.run_solve", boom)
        rc = main(["solve", "--scenario", scenario_path, "--out", str(tmp_path)])
        assert rc == EXIT_SOLVER_LIMIT

    def test_unwritable_output_maps_to_4(self, scenario_path, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("occupied")
        rc = main(["solve", "--scenario", scenario_path, "--out", str(blocker / "sub")])
        assert rc == EXIT_IO


class TestSweepCommand:
    def test_ladder_structure_and_table(self, scenario_path, tmp_path):
        out = tmp_path / "sweep"
        rc = main(["sweep", "--scenario", scenario_path, "--out", str(out),
                   "--co2-mult", "1.0,2.0,3.0"])
        assert rc == EXIT_OK
        table = (out / "sweep_summary.csv").read_text().strip().splitlines()
        assert table[0].startswith("multiplier,co2_eur_t,built_owp_gw")
        assert len(table) == 4
        built = [float(ln.split(",")[2]) for ln in table[1:]]
        assert built == sorted(built)
        assert built[0] == 0.0 and built[-1] > 0.0
        # one bundle per price point
        assert sum(1 for p in out.iterdir() if p.is_dir()) == 3

    def test_sweep_requires_multipliers(self, scenario_path, tmp_path):
        rc = main(["sweep", "--scenario", scenario_path, "--out", str(tmp_path)])
        assert rc == EXIT_VALIDATION

    def test_nonpositive_multiplier_rejected(self, scenario_path, tmp_path):
        rc = main(["sweep", "--scenario", scenario_path, "--out", str(tmp_path),
                   "--co2-mult", "0.0,1.0"])
        assert rc == EXIT_VALIDATION

    def test_descending_multipliers_rejected(self, scenario_path, tmp_path):
        rc = main(["sweep", "--scenario", scenario_path, "--out", str(tmp_path),
                   "--co2-mult", "2.0,1.0"])
        assert rc == EXIT_VALIDATION

    def test_garbled_multiplier_rejected(self, scenario_path, tmp_path):
        rc = main(["sweep", "--scenario", scenario_path, "--out", str(tmp_path),
                   "--co2-mult", "1.0,abc"])
        assert rc == EXIT_VALIDATION

    def test_solve_takes_single_multiplier_only(self, scenario_path, tmp_path):
        rc = main(["solve", "--scenario", scenario_path, "--out", str(tmp_path),
                   "--co2-mult", "1.0,2.0"])
        assert rc == EXIT_VALIDATION

    def test_failed_point_skipped_others_finish(self, tmp_path, monkeypatch):
        import gtce.pipeline as pipeline
        real = run_solve

        def sometimes(scn, *a, **k):
            if scn.co2_multiplier == 2.0:
                raise InfeasibleError("forced failure", [])
            return real(scn, *a, **k)

        monkeypatch.setattr(pipeline, "run_solve", sometimes)
        rows, failures = run_sweep(sweep_toy(), [1.0, 2.0, 3.0], tmp_path, seed=0)
        assert failures == 1
        assert "error" in rows[1] and rows[1]["kind"] == "InfeasibleError"
        assert "run_id" in rows[0] and "run_id" in rows[2]
        table = (tmp_path / "sweep_summary.csv").read_text().strip().splitlines()
        assert len(table) == 4  # failed point still reported as a row


class TestEvaluateCommand:
    def test_evaluate_without_solve_is_io_failure(self, scenario_path, tmp_path):
        rc = main(["evaluate", "--scenario", scenario_path, "--out", str(tmp_path)])
        assert rc == EXIT_IO

    def test_evaluate_refreshes_market_files_in_place(self, solved, tmp_path):
        scenario_path, out, bundle = solved
        before = bundle_bytes(bundle)
        rc = main(["evaluate", "--scenario", scenario_path, "--out", str(out)])
        assert rc == EXIT_OK
        after = bundle_bytes(bundle)
        assert after == before  # same inputs, same market artifacts
        assert any("reusing stored topology" in ln for ln in log_without_stamps(bundle))


class TestClusterCommands:
    def test_cluster_weeks_writes_weights_summing_to_a_year(self, scenario_path, tmp_path):
        rc = main(["cluster-weeks", "--scenario", scenario_path, "--out", str(tmp_path)])
        assert rc == EXIT_OK
        (bundle,) = [p for p in tmp_path.iterdir() if p.is_dir()]
        assert (bundle / "weeks.csv").exists()
        summary = json.loads((bundle / "summary.json").read_text())
        assert sum(summary["weeks"]["weights"]) == 52
        assert summary["manifest"]["stage"] == "cluster-weeks"

    def test_cluster_sites_writes_positions(self, scenario_path, tmp_path):
        rc = main(["cluster-sites", "--scenario", scenario_path, "--out", str(tmp_path)])
        assert rc == EXIT_OK
        (bundle,) = [p for p in tmp_path.iterdir() if p.is_dir()]
        text = (bundle / "clusters.csv").read_text()
        assert text.splitlines()[0] == "cluster,lon,lat,pooled_gw,members,max_member_km"
        summary = json.loads((bundle / "summary.json").read_text())
        assert summary["n_clusters"] == 1  # one offshore zone, no site polygons


class TestSingleYearStudy:
    def test_two_years_solved_and_grouped(self, tmp_path):
        scn = two_year_scenario()
        scn_path = write_scenario(scn, tmp_path / "scn")
        out = tmp_path / "study"
        rc = main(["single-year-study", "--scenario", str(scn_path), "--out", str(out)])
        assert rc == EXIT_OK
        study = json.loads((out / "study_summary.json").read_text())
        assert study["n_years"] == 2 and study["n_solved"] == 2
        assert len(study["configs"]) == 2
        caps = {c["label"]: sum(c["owp"].values()) for c in study["configs"]}
        assert caps["y01"] > caps["y00"]  # windier year builds more
        assert set(study["groups"]["representatives"]) == {"y00", "y01"}

    def test_partial_years_rejected(self, scenario_path, tmp_path):
        rc = main(["single-year-study", "--scenario", scenario_path,
                   "--out", str(tmp_path)])
        assert rc == EXIT_VALIDATION
