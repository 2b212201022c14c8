"""Grid-layout vectors, distances between solved layouts, and grouping
of many weather-year layouts into archetypes."""

import itertools

import numpy as np
import pytest

from gtce.expansion import FixedTopology
from gtce.topo import (
    TopologyConfig,
    cluster_topologies,
    config_from_topology,
    read_topology_json,
    topology_distance,
    topology_from_dict,
    topology_to_dict,
    write_topology_json,
)

ZONES = ("A", "B", "F")


def cfg(label, arcs=(), owp=(), zones=ZONES):
    return TopologyConfig(label=label, zones=zones,
                          arc_capacity_gw=tuple(arcs), owp_capacity_gw=tuple(owp))


class TestDistance:
    def test_single_arc_difference(self):
        t1 = cfg("y1", arcs=[("A", "F", 2.0)])
        t2 = cfg("y2")
        assert topology_distance(t1, t2) == pytest.approx(2.0)

    def test_euclidean_over_arcs_and_parks(self):
        t1 = cfg("y1", arcs=[("A", "F", 3.0)], owp=[("F", 4.0)])
        t2 = cfg("y2")
        assert topology_distance(t1, t2) == pytest.approx(5.0)

    def test_arc_direction_is_ignored(self):
        t1 = cfg("y1", arcs=[("F", "A", 2.0)])
        t2 = cfg("y2", arcs=[("A", "F", 2.0)])
        assert topology_distance(t1, t2) == 0.0

    def test_identical_layouts_at_zero(self):
        t = cfg("y1", arcs=[("A", "B", 1.0)], owp=[("F", 2.5)])
        assert topology_distance(t, t) == 0.0

    def test_zone_set_mismatch_rejected(self):
        t1 = cfg("y1")
        t2 = cfg("y2", zones=("A", "B"))
        with pytest.raises(ValueError, match="zone sets"):
            topology_distance(t1, t2)

    def test_connection_disagreement_penalty(self):
        t1 = cfg("y1", arcs=[("A", "F", 1.0)])
        t2 = cfg("y2")
        base = topology_distance(t1, t2)
        assert topology_distance(t1, t2, adjacency_weight=10.0) == pytest.approx(base + 10.0)
        # same arcs present, different size: no penalty applies
        t3 = cfg("y3", arcs=[("A", "F", 2.0)])
        assert topology_distance(t1, t3, adjacency_weight=10.0) == pytest.approx(1.0)

    def test_symmetry_and_triangle_on_random_layouts(self, rng):
        configs = []
        for i in range(6):
            arcs = [("A", "F", float(rng.integers(0, 4))),
                    ("B", "F", float(rng.integers(0, 4)))]
            owp = [("F", float(rng.uniform(0, 3)))]
            configs.append(cfg(f"y{i}", arcs=arcs, owp=owp))
        for t1, t2 in itertools.combinations(configs, 2):
            assert topology_distance(t1, t2) == pytest.approx(topology_distance(t2, t1))
        for t1, t2, t3 in itertools.combinations(configs, 3):
            d12 = topology_distance(t1, t2)
            d23 = topology_distance(t2, t3)
            d13 = topology_distance(t1, t3)
            assert d13 <= d12 + d23 + 1e-9


class TestFromSolvedTopology:
    def test_steps_scale_by_block_size(self):
        topo = FixedTopology(
            steps={("A", "F"): 3}, adjacency={("A", "F")},
            owp_capacity_gw={"F": 2.5}, rating_on_gw={}, rating_off_gw={},
            ntc_added_gw={}, corridors=set(),
        )
        t = config_from_topology("y1", topo, list(ZONES), step_gw=0.5)
        assert t.arc_lookup() == {("A", "F"): 1.5}
        assert t.owp_lookup() == {"F": 2.5}
        assert t.vector().shape == (3 + 3,)  # three zone pairs + three parks


class TestGrouping:
    def _planted(self):
        """21 layouts in three well-separated families of 7."""
        configs = []
        families = [
            dict(arcs=[("A", "F", 1.0)], owp=[("F", 1.0)]),
            dict(arcs=[("A", "F", 4.0), ("B", "F", 4.0)], owp=[("F", 8.0)]),
            dict(arcs=[("B", "F", 2.0)], owp=[("F", 16.0)]),
        ]
        truth = []
        for i in range(21):
            fam = i % 3
            base = families[fam]
            arcs = [(a, b, v + 0.01 * (i // 3)) for a, b, v in base["arcs"]]
            owp = [(z, v + 0.01 * (i // 3)) for z, v in base["owp"]]
            configs.append(cfg(f"y{i:02d}", arcs=arcs, owp=owp))
            truth.append(fam)
        return configs, truth

    def test_planted_families_recovered_exactly(self):
        configs, truth = self._planted()
        groups = cluster_topologies(configs, k=3, seed=7)
        # grouping must match the planted families up to label permutation
        mapping = {}
        for i, fam in enumerate(truth):
            g = int(groups.assignment[i])
            assert mapping.setdefault(fam, g) == g
        assert len(set(mapping.values())) == 3
        for i in range(21):
            m = groups.archetype(i)
            assert truth[m] == truth[i]

    def test_single_group_medoid_minimizes_total_distance(self):
        configs, _ = self._planted()
        groups = cluster_topologies(configs, k=1, seed=0)
        dist = groups.distances
        order = sorted(range(len(configs)), key=lambda i: configs[i].label)
        inv = {orig: rank for rank, orig in enumerate(order)}
        best = min(range(len(configs)), key=lambda j: dist[inv[j]].sum())
        got = dist[inv[groups.medoids[0]]].sum()
        want = dist[inv[best]].sum()
        assert got == pytest.approx(want)

    def test_every_layout_its_own_group_at_full_k(self):
        configs, _ = self._planted()
        groups = cluster_topologies(configs, k=len(configs), seed=0)
        assert sorted(groups.medoids) == list(range(len(configs)))
        for i in range(len(configs)):
            assert groups.archetype(i) == i

    def test_equidistant_layout_joins_lower_labelled_medoid(self):
        # y2 sits exactly halfway between the two families; the assignment
        # tie resolves toward the medoid whose label sorts first
        configs = [
            cfg("y0", arcs=[("A", "F", 1.0)]),
            cfg("y1", arcs=[("A", "F", 1.0)]),
            cfg("y2", arcs=[("A", "F", 5.0)]),
            cfg("y3", arcs=[("A", "F", 9.0)]),
            cfg("y4", arcs=[("A", "F", 9.0)]),
        ]
        groups = cluster_topologies(configs, k=2, seed=3)
        assert groups.assignment[0] == groups.assignment[1]
        assert groups.assignment[3] == groups.assignment[4]
        assert groups.assignment[2] == groups.assignment[0]
        assert groups.labels[groups.archetype(2)] in ("y0", "y1")

    def test_duplicate_layouts_share_a_group(self):
        a = cfg("y0", arcs=[("A", "F", 1.0)])
        b = cfg("y1", arcs=[("A", "F", 1.0)])
        c = cfg("y2", arcs=[("B", "F", 9.0)])
        groups = cluster_topologies([c, b, a], k=2, seed=3)
        assert groups.assignment[1] == groups.assignment[2]
        assert groups.assignment[0] != groups.assignment[1]
        assert groups.labels[groups.archetype(1)] in ("y0", "y1")

    def test_bad_k_rejected(self):
        configs, _ = self._planted()
        with pytest.raises(ValueError):
            cluster_topologies(configs, k=0)
        with pytest.raises(ValueError):
            cluster_topologies(configs, k=22)
        with pytest.raises(ValueError):
            cluster_topologies([], k=1)


class TestSerialization:
    def test_round_trip_preserves_layout(self, tmp_path):
        t = cfg("y7", arcs=[("A", "F", 2.0), ("B", "F", 1.0)], owp=[("F", 3.25)])
        p = tmp_path / "layout.json"
        write_topology_json(t, p)
        back = read_topology_json(p)
        assert back == t
        assert topology_distance(t, back) == 0.0

    def test_dict_form_is_plain_json_types(self):
        t = cfg("y7", arcs=[("A", "F", 2.0)], owp=[("F", 3.0)])
        d = topology_to_dict(t)
        assert d["label"] == "y7"
        assert d["zones"] == ["A", "B", "F"]
        assert d["arcs"] == [{"a": "A", "b": "F", "capacity_gw": 2.0}]
        assert d["owp"] == {"F": 3.0}
        assert topology_from_dict(d) == t
