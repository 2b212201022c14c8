"""Site geometry: grid superposition and spatial clustering of converter sites.

Candidate offshore areas are polygons in lon/lat.  A regular square grid
is laid over each polygon in a local equirectangular projection; grid
nodes inside the polygon each carry a share of the site's installable
capacity (area times power density).  Nodes are then grouped into
converter clusters with k-medoids such that no node is farther than a
distance cap from its cluster's converter platform (the medoid).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import shapely

from . import defaults
from .kmedoids import pam
from .scenario import CandidateSite


def haversine_km(lon1, lat1, lon2, lat2, radius: float = defaults.EARTH_RADIUS_KM):
    """Great-circle distance in km between points given in degrees."""
    lon1, lat1, lon2, lat2 = (np.radians(np.asarray(x, dtype=float)) for x in (lon1, lat1, lon2, lat2))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    a = np.sin(dlat / 2.0) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2.0) ** 2
    out = 2.0 * radius * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class GridNode:
    id: str
    site: str
    lon: float
    lat: float
    share_gw: float


@dataclass(frozen=True)
class ConverterCluster:
    """A pooled converter platform: medoid location plus member capacity."""

    id: str
    lon: float
    lat: float
    pooled_gw: float
    member_ids: tuple[str, ...]
    max_member_km: float
    # capacity-share weights per originating site, summing to 1
    site_weights: tuple[tuple[str, float], ...]


def _project_km(lons, lats, ref_lon: float, ref_lat: float):
    """Equirectangular projection around a reference point, km east/north."""
    kx = defaults.EARTH_RADIUS_KM * np.cos(np.radians(ref_lat)) * np.pi / 180.0
    ky = defaults.EARTH_RADIUS_KM * np.pi / 180.0
    return (np.asarray(lons) - ref_lon) * kx, (np.asarray(lats) - ref_lat) * ky


def superimpose_grid(
    sites: list[CandidateSite], spacing_km: float = defaults.GRID_SPACING_KM
) -> list[GridNode]:
    """Lay a square grid over each site polygon and apportion its capacity.

    Each inside-node starts with spacing^2 * density; shares are then
    rescaled so the site total equals polygon area times density exactly.
    """
    if spacing_km <= 0:
        raise ValueError("grid spacing must be positive")
    nodes: list[GridNode] = []
    for site in sites:
        ring = np.asarray(site.polygon, dtype=float)
        ref_lon, ref_lat = ring[:, 0].mean(), ring[:, 1].mean()
        xs, ys = _project_km(ring[:, 0], ring[:, 1], ref_lon, ref_lat)
        poly = shapely.Polygon(np.column_stack([xs, ys]))
        if not poly.is_valid:
            poly = poly.buffer(0.0)
        if poly.is_empty or poly.area <= 0:
            continue
        area_km2 = poly.area
        minx, miny, maxx, maxy = poly.bounds
        gx = np.arange(minx + spacing_km / 2.0, maxx, spacing_km)
        gy = np.arange(miny + spacing_km / 2.0, maxy, spacing_km)
        if gx.size == 0 or gy.size == 0:
            # polygon thinner than one cell: fall back to its representative point
            p = poly.representative_point()
            px, py = np.array([p.x]), np.array([p.y])
        else:
            mx, my = np.meshgrid(gx, gy, indexing="ij")
            px, py = mx.ravel(), my.ravel()
            inside = shapely.contains_xy(poly, px, py)
            px, py = px[inside], py[inside]
            if px.size == 0:
                p = poly.representative_point()
                px, py = np.array([p.x]), np.array([p.y])
        total_gw = area_km2 * site.density_mw_km2 / 1000.0
        share = total_gw / px.size
        kx = defaults.EARTH_RADIUS_KM * np.cos(np.radians(ref_lat)) * np.pi / 180.0
        ky = defaults.EARTH_RADIUS_KM * np.pi / 180.0
        for i in range(px.size):
            nodes.append(
                GridNode(
                    id=f"{site.id}_{i:04d}",
                    site=site.id,
                    lon=ref_lon + px[i] / kx,
                    lat=ref_lat + py[i] / ky,
                    share_gw=share,
                )
            )
    return nodes


def cluster_sites(
    nodes: list[GridNode],
    max_dist_km: float = defaults.MAX_DIST_KM,
    seed: int = 0,
    weighted: bool = False,
) -> list[ConverterCluster]:
    """Smallest k whose k-medoids solution keeps every node within reach.

    k is increased from 1 until the worst node-to-medoid distance drops
    to ``max_dist_km`` or below; the medoid nodes become the converter
    platform locations, pooling their members' capacity shares.
    """
    if not nodes:
        raise ValueError("no grid nodes to cluster")
    if max_dist_km <= 0:
        raise ValueError("max_dist_km must be positive")
    lons = np.array([n.lon for n in nodes])
    lats = np.array([n.lat for n in nodes])
    dist = haversine_km(lons[:, None], lats[:, None], lons[None, :], lats[None, :])
    dist = np.asarray(dist, dtype=float)
    np.fill_diagonal(dist, 0.0)
    wts = np.array([n.share_gw for n in nodes]) if weighted else None

    # Exact lower bound on k: greedily pack nodes pairwise farther apart
    # than 2*max_dist_km; two such nodes can never share a medoid (their
    # mutual distance through it would be at most 2*max_dist_km), so no
    # smaller k can satisfy the distance cap.
    nearest_packed = np.full(len(nodes), np.inf)
    k_min = 0
    while True:
        i = int(np.argmax(nearest_packed))
        if nearest_packed[i] <= 2.0 * max_dist_km:
            break
        k_min += 1
        nearest_packed = np.minimum(nearest_packed, dist[i])
    k_min = max(k_min, 1)

    for k in range(k_min, len(nodes) + 1):
        med, assign = pam(dist, k, seed=seed, weights=wts)
        worst = float(dist[np.arange(len(nodes)), med[assign]].max())
        if worst <= max_dist_km:
            break
    clusters = []
    for j, m in enumerate(med):
        members = [nodes[i] for i in np.flatnonzero(assign == j)]
        pooled = float(sum(n.share_gw for n in members))
        by_site: dict[str, float] = {}
        for n in members:
            by_site[n.site] = by_site.get(n.site, 0.0) + n.share_gw
        weights = tuple(
            sorted((s, v / pooled if pooled > 0 else 0.0) for s, v in by_site.items())
        )
        clusters.append(
            ConverterCluster(
                id=f"OWP{j + 1}",
                lon=nodes[m].lon,
                lat=nodes[m].lat,
                pooled_gw=pooled,
                member_ids=tuple(n.id for n in members),
                max_member_km=float(dist[[i for i in np.flatnonzero(assign == j)], m].max()),
                site_weights=weights,
            )
        )
    return clusters


def clusters_from_zones(zones) -> list[ConverterCluster]:
    """Degenerate one-member clusters for offshore zones declared inline."""
    out = []
    for z in zones:
        if z.kind != "offshore":
            continue
        out.append(
            ConverterCluster(
                id=z.id,
                lon=z.lon,
                lat=z.lat,
                pooled_gw=z.available_gw,
                member_ids=(z.id,),
                max_member_km=0.0,
                site_weights=((z.id, 1.0),),
            )
        )
    return out


def write_clusters_csv(clusters: list[ConverterCluster], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cluster", "lon", "lat", "pooled_gw", "members", "max_member_km"])
        for c in clusters:
            w.writerow([
                c.id,
                repr(round(c.lon, 6)),
                repr(round(c.lat, 6)),
                repr(round(c.pooled_gw, 6)),
                len(c.member_ids),
                repr(round(c.max_member_km, 3)),
            ])
