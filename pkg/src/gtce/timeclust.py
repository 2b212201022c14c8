"""Temporal aggregation: representative weeks from hourly series.

Hourly input series are cut into whole weeks, the weeks are clustered
with k-medoids on the aggregate renewable feed-in, and the smallest
medoid count whose reconstruction error (nRMSE) meets the tolerance is
kept.  Weeks holding the global extremes of the aggregate are pinned as
medoids so scarcity and surplus situations survive aggregation.  Every
tracked series is carried through at the medoid week indices.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import defaults
from .kmedoids import pam


def wind_capacity_factor(
    speed,
    cut_in: float = defaults.CUT_IN_MS,
    rated: float = defaults.RATED_MS,
    cut_out: float = defaults.CUT_OUT_MS,
):
    """Turbine power curve: cubic ramp between cut-in and rated speed.

    0 below cut-in, (v^3 - v_ci^3)/(v_r^3 - v_ci^3) up to rated, 1.0 from
    rated until cut-out, 0 at and above cut-out.
    """
    if not 0 <= cut_in < rated < cut_out:
        raise ValueError("need 0 <= cut_in < rated < cut_out")
    v = np.asarray(speed, dtype=float)
    if np.any(v < 0):
        raise ValueError("wind speeds must be non-negative")
    ramp = (v**3 - cut_in**3) / (rated**3 - cut_in**3)
    cf = np.where(v < cut_in, 0.0, np.where(v < rated, ramp, np.where(v < cut_out, 1.0, 0.0)))
    return float(cf) if np.ndim(speed) == 0 else cf


def nrmse(original: np.ndarray, reconstruction: np.ndarray, norm: str = "range") -> float:
    """RMSE over all entries, normalised by the original's range (or mean)."""
    o = np.asarray(original, dtype=float)
    r = np.asarray(reconstruction, dtype=float)
    if o.shape != r.shape:
        raise ValueError("shape mismatch")
    rmse = float(np.sqrt(np.mean((o - r) ** 2)))
    if norm == "range":
        denom = float(o.max() - o.min()) if o.size else 0.0
    elif norm == "mean":
        denom = float(np.mean(np.abs(o)))
    else:
        raise ValueError(f"unknown norm {norm!r}")
    if denom == 0.0:
        return 0.0 if rmse == 0.0 else float("inf")
    return rmse / denom


@dataclass
class WeekMatrix:
    """Stacked weekly profiles: data[w, h, s] for week w, hour h, series s."""

    data: np.ndarray
    series_ids: list[str]
    hours_per_week: int

    @property
    def n_weeks(self) -> int:
        return self.data.shape[0]

    @property
    def years(self) -> float:
        return self.n_weeks / defaults.WEEKS_PER_YEAR

    def series(self, sid: str) -> np.ndarray:
        return self.data[:, :, self.series_ids.index(sid)]


def slice_weeks(
    series: dict[str, np.ndarray], hours_per_week: int = defaults.HOURS_PER_WEEK
) -> WeekMatrix:
    """Cut equal-length hourly series into whole weeks.

    Calendar-year inputs (multiples of 8760 h, with 168 h weeks) drop the
    trailing 24 h of each year so every year yields exactly 52 weeks;
    otherwise the length must be a whole number of weeks.
    """
    if not series:
        raise ValueError("no series given")
    ids = sorted(series)
    arrs = [np.asarray(series[s], dtype=float) for s in ids]
    lengths = {a.shape[0] for a in arrs}
    if len(lengths) != 1:
        raise ValueError(f"series lengths differ: {sorted(lengths)}")
    (length,) = lengths
    if length < hours_per_week:
        raise ValueError(f"series shorter than one week: {length} < {hours_per_week}")

    year_h = defaults.CALENDAR_YEAR_H
    model_h = defaults.WEEKS_PER_YEAR * hours_per_week
    if hours_per_week == defaults.HOURS_PER_WEEK and length % year_h == 0:
        years = length // year_h
        idx = np.concatenate([np.arange(y * year_h, y * year_h + model_h) for y in range(years)])
        arrs = [a[idx] for a in arrs]
        length = years * model_h
    elif length % hours_per_week != 0:
        raise ValueError(
            f"length {length} is neither whole calendar years nor whole {hours_per_week} h weeks"
        )
    weeks = length // hours_per_week
    data = np.stack([a.reshape(weeks, hours_per_week) for a in arrs], axis=2)
    return WeekMatrix(data=data, series_ids=ids, hours_per_week=hours_per_week)


@dataclass
class RepresentativeWeeks:
    """Medoid weeks with integer occurrence weights summing to 52."""

    profiles: np.ndarray  # (k, hours, series)
    series_ids: list[str]
    weights: np.ndarray  # (k,) int
    source_weeks: np.ndarray  # (k,) indices into the sliced week axis
    assignment: np.ndarray  # (n_weeks,) medoid position per original week
    nrmse: float
    hours_per_week: int
    basis_ids: list[str]
    energy_error: dict[str, float]

    @property
    def k(self) -> int:
        return self.profiles.shape[0]

    def series(self, sid: str) -> np.ndarray:
        return self.profiles[:, :, self.series_ids.index(sid)]

    def has_series(self, sid: str) -> bool:
        return sid in self.series_ids


def _apportion_52(counts: np.ndarray, years: float) -> np.ndarray:
    """Largest-remainder rounding of counts/years to integers summing 52, each >= 1."""
    k = counts.shape[0]
    total = defaults.WEEKS_PER_YEAR
    if k > total:
        raise ValueError(f"cannot weight {k} medoids with {total} week slots")
    raw = counts / years
    base = np.floor(raw).astype(int)
    short = total - int(base.sum())
    if short > 0:
        frac = raw - base
        # ties: lower medoid index first
        order = np.lexsort((np.arange(k), -frac))
        base[order[:short]] += 1
    elif short < 0:
        # guard against float drift; shave from the largest
        order = np.lexsort((np.arange(k), -base))
        for i in range(-short):
            base[order[i % k]] -= 1
    while np.any(base == 0):
        z = int(np.flatnonzero(base == 0)[0])
        donor = int(np.lexsort((np.arange(k), -base))[0])
        if base[donor] <= 1:
            raise ValueError("cannot give every medoid a positive weight")
        base[donor] -= 1
        base[z] += 1
    assert base.sum() == total
    return base


def cluster_weeks(
    weeks: WeekMatrix,
    tolerance: float = defaults.NRMSE_TOL,
    seed: int = 0,
    basis_ids: list[str] | None = None,
    multivariate: bool = False,
    norm: str = defaults.NRMSE_NORM,
) -> RepresentativeWeeks:
    """Pick representative weeks: fewest medoids meeting the nRMSE tolerance.

    The clustering distance runs on the aggregate of the basis series
    (default: all ids starting with ``res_``, else everything); the
    multivariate flag switches the distance to concatenated z-scored
    series instead, while the tolerance check stays on the aggregate.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    w, h, _ = weeks.data.shape
    if basis_ids is None:
        basis_ids = [s for s in weeks.series_ids if s.startswith("res_")] or list(weeks.series_ids)
    else:
        missing = [s for s in basis_ids if s not in weeks.series_ids]
        if missing:
            raise ValueError(f"basis series not present: {missing}")
    cols = [weeks.series_ids.index(s) for s in basis_ids]
    aggregate = weeks.data[:, :, cols].sum(axis=2)  # (w, h)

    if multivariate:
        per = weeks.data.reshape(-1, weeks.data.shape[2])
        mu, sd = per.mean(axis=0), per.std(axis=0)
        sd = np.where(sd == 0, 1.0, sd)
        vecs = ((weeks.data - mu) / sd).reshape(w, -1)
    else:
        vecs = aggregate
    sq = np.sum(vecs**2, axis=1)
    dist = np.sqrt(np.maximum(sq[:, None] + sq[None, :] - 2.0 * vecs @ vecs.T, 0.0))
    np.fill_diagonal(dist, 0.0)

    wmin = int(np.unravel_index(np.argmin(aggregate), aggregate.shape)[0])
    wmax = int(np.unravel_index(np.argmax(aggregate), aggregate.shape)[0])
    pinned = tuple(dict.fromkeys((wmin, wmax)))

    # Every medoid must receive at least one of the 52 weekly slots, so the
    # search cannot usefully go past 52 medoids.
    max_k = min(w, defaults.WEEKS_PER_YEAR)
    start_k = min(max(3, len(pinned) + 1), max_k)
    med = assign = None
    err = float("inf")
    for k in range(start_k, max_k + 1):
        med, assign = pam(dist, k, seed=seed, pinned=pinned)
        recon = aggregate[med[assign]]
        err = nrmse(aggregate, recon, norm=norm)
        if err <= tolerance:
            break
    if err > tolerance:
        raise ValueError(
            f"tolerance unreachable: nRMSE {err:.4f} > {tolerance:.4f} at the "
            f"{max_k}-medoid cap (weekly weights need every medoid to occupy "
            f"at least one of 52 slots); loosen the tolerance or smooth the input"
        )

    counts = np.bincount(assign, minlength=med.shape[0]).astype(float)
    weights = _apportion_52(counts, weeks.years)

    energy_error = {}
    for j, sid in enumerate(weeks.series_ids):
        per_week = weeks.data[:, :, j].sum(axis=1)
        orig = per_week.sum() / weeks.years
        recon_e = float(np.sum(weights * per_week[med]))
        energy_error[sid] = (recon_e - orig) / orig if orig != 0 else 0.0

    return RepresentativeWeeks(
        profiles=weeks.data[med].copy(),
        series_ids=list(weeks.series_ids),
        weights=weights,
        source_weeks=med.copy(),
        assignment=assign.copy(),
        nrmse=err,
        hours_per_week=weeks.hours_per_week,
        basis_ids=list(basis_ids),
        energy_error=energy_error,
    )


def representative_weeks_from_arrays(
    profiles: np.ndarray,
    series_ids: list[str],
    weights,
    hours_per_week: int | None = None,
) -> RepresentativeWeeks:
    """Assemble a weeks object directly (toy models, tests)."""
    profiles = np.asarray(profiles, dtype=float)
    weights = np.asarray(weights, dtype=int)
    if profiles.ndim != 3 or profiles.shape[2] != len(series_ids):
        raise ValueError("profiles must be (weeks, hours, series)")
    if weights.shape != (profiles.shape[0],):
        raise ValueError("one weight per week profile required")
    return RepresentativeWeeks(
        profiles=profiles,
        series_ids=list(series_ids),
        weights=weights,
        source_weeks=np.arange(profiles.shape[0]),
        assignment=np.arange(profiles.shape[0]),
        nrmse=0.0,
        hours_per_week=hours_per_week or profiles.shape[1],
        basis_ids=list(series_ids),
        energy_error={s: 0.0 for s in series_ids},
    )


def write_weeks_csv(weeks: RepresentativeWeeks, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["medoid", "source_week", "weight", "hour", *weeks.series_ids])
        for m in range(weeks.k):
            for h in range(weeks.hours_per_week):
                row = [m, int(weeks.source_weeks[m]), int(weeks.weights[m]), h]
                row += [repr(float(v)) for v in weeks.profiles[m, h, :]]
                w.writerow(row)
