"""Grouping solved grid layouts from many weather years into archetypes.

A solved expansion run is summarized as a flat vector (arc capacities on
the upper-triangle zone-pair grid, then park capacities per zone); the
Euclidean distance between two such vectors, optionally penalized per
connected/unconnected disagreement, drives a k-medoids grouping whose
medoids are actual solved layouts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .expansion import FixedTopology
from .kmedoids import pam


@dataclass(frozen=True)
class TopologyConfig:
    """One solved layout, keyed by the label of the weather year it came from."""

    label: str
    zones: tuple[str, ...]  # fixed order defining the pair grid
    arc_capacity_gw: tuple[tuple[str, str, float], ...] = ()
    owp_capacity_gw: tuple[tuple[str, float], ...] = ()

    def arc_lookup(self) -> dict[tuple[str, str], float]:
        return {(a, b): v for a, b, v in self.arc_capacity_gw}

    def owp_lookup(self) -> dict[str, float]:
        return dict(self.owp_capacity_gw)

    def vector(self) -> np.ndarray:
        arcs = self.arc_lookup()
        vals = []
        for i, a in enumerate(self.zones):
            for b in self.zones[i + 1:]:
                vals.append(arcs.get((a, b), arcs.get((b, a), 0.0)))
        owp = self.owp_lookup()
        vals.extend(owp.get(z, 0.0) for z in self.zones)
        return np.asarray(vals, dtype=float)


def config_from_topology(label: str, topo: FixedTopology, zones: list[str],
                         step_gw: float = 1.0) -> TopologyConfig:
    arcs = tuple(
        (a, b, n * step_gw) for (a, b), n in sorted(topo.steps.items())
    )
    owp = tuple(sorted(topo.owp_capacity_gw.items()))
    return TopologyConfig(
        label=label, zones=tuple(zones), arc_capacity_gw=arcs, owp_capacity_gw=owp
    )


def topology_distance(t1: TopologyConfig, t2: TopologyConfig,
                      adjacency_weight: float = 0.0) -> float:
    """Euclidean distance between layout vectors, plus an optional penalty
    per arc that is connected in one layout but absent in the other."""
    if t1.zones != t2.zones:
        raise ValueError(
            f"layouts cover different zone sets: {t1.zones} vs {t2.zones}"
        )
    v1, v2 = t1.vector(), t2.vector()
    d = float(np.linalg.norm(v1 - v2))
    if adjacency_weight:
        n_pairs = len(t1.zones) * (len(t1.zones) - 1) // 2
        a1 = v1[:n_pairs] > 0
        a2 = v2[:n_pairs] > 0
        d += adjacency_weight * int(np.sum(a1 != a2))
    return d


@dataclass
class TopologyGroups:
    medoids: list[int]  # indices into the input list
    assignment: np.ndarray
    labels: list[str]
    distances: np.ndarray = field(repr=False, default=None)

    def archetype(self, i: int) -> int:
        """Index of the layout representing input i's group."""
        return self.medoids[int(self.assignment[i])]


def cluster_topologies(configs: list[TopologyConfig], k: int, seed: int = 0,
                       adjacency_weight: float = 0.0) -> TopologyGroups:
    """Group layouts into k archetypes; medoids are actual input layouts.

    Inputs are compared in label order so equal-distance ties resolve to
    the lower label.
    """
    if not configs:
        raise ValueError("no layouts to group")
    if not 1 <= k <= len(configs):
        raise ValueError(f"k={k} out of range for {len(configs)} layouts")
    order = sorted(range(len(configs)), key=lambda i: configs[i].label)
    inv = np.empty(len(order), dtype=int)
    for rank, i in enumerate(order):
        inv[i] = rank
    seq = [configs[i] for i in order]
    n = len(seq)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = topology_distance(seq[i], seq[j], adjacency_weight)
    med, assign = pam(dist, k, seed=seed)
    medoids = [order[m] for m in med]
    assignment = np.asarray([assign[inv[i]] for i in range(len(configs))], dtype=int)
    return TopologyGroups(
        medoids=medoids,
        assignment=assignment,
        labels=[c.label for c in configs],
        distances=dist,
    )


def topology_to_dict(t: TopologyConfig) -> dict:
    return {
        "label": t.label,
        "zones": list(t.zones),
        "arcs": [{"a": a, "b": b, "capacity_gw": v} for a, b, v in t.arc_capacity_gw],
        "owp": {z: v for z, v in t.owp_capacity_gw},
    }


def topology_from_dict(d: dict) -> TopologyConfig:
    return TopologyConfig(
        label=str(d["label"]),
        zones=tuple(d["zones"]),
        arc_capacity_gw=tuple(
            (a["a"], a["b"], float(a["capacity_gw"])) for a in d.get("arcs", [])
        ),
        owp_capacity_gw=tuple(sorted(
            (z, float(v)) for z, v in d.get("owp", {}).items()
        )),
    )


def write_topology_json(t: TopologyConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(topology_to_dict(t), sort_keys=True, indent=2) + "\n")


def read_topology_json(path: str | Path) -> TopologyConfig:
    return topology_from_dict(json.loads(Path(path).read_text()))
