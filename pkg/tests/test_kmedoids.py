"""PAM k-medoids against exhaustive search and its own contracts."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtce.kmedoids import pam, total_cost


def euclid(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def exhaustive_best(dist: np.ndarray, k: int, weights=None) -> float:
    n = dist.shape[0]
    best = np.inf
    for combo in itertools.combinations(range(n), k):
        best = min(best, total_cost(dist, np.array(combo), weights))
    return best


def planted_blobs(rng, k=3, per=5, spread=0.05, gap=10.0):
    centers = rng.normal(size=(k, 2)) * gap
    pts = np.concatenate([c + rng.normal(scale=spread, size=(per, 2)) for c in centers])
    labels = np.repeat(np.arange(k), per)
    return pts, labels


class TestAgainstExhaustive:
    @pytest.mark.parametrize("trial", range(8))
    def test_separated_blobs_reach_global_optimum(self, trial):
        rng = np.random.default_rng(trial)
        pts, _ = planted_blobs(rng)
        d = euclid(pts)
        med, assign = pam(d, 3, seed=trial)
        assert total_cost(d, med) == pytest.approx(exhaustive_best(d, 3), rel=1e-9)

    @pytest.mark.parametrize("k", [1, 2])
    def test_small_random_instances(self, k):
        rng = np.random.default_rng(99)
        for _ in range(6):
            pts = rng.uniform(size=(7, 2))
            d = euclid(pts)
            med, _ = pam(d, k, seed=1)
            got = total_cost(d, med)
            best = exhaustive_best(d, k)
            # PAM is a local search; on these sizes it should land on the
            # optimum, and must never beat the exhaustive bound
            assert got >= best - 1e-12
            assert got == pytest.approx(best, rel=1e-9)


class TestContracts:
    def test_swap_local_optimality(self, rng):
        pts = rng.uniform(size=(12, 2))
        d = euclid(pts)
        med, assign = pam(d, 3, seed=0)
        base = total_cost(d, med)
        for out_pos in range(3):
            for cand in range(12):
                if cand in med:
                    continue
                trial = med.copy()
                trial[out_pos] = cand
                assert total_cost(d, trial) >= base - 1e-9

    def test_assignment_is_nearest_medoid(self, rng):
        pts = rng.uniform(size=(15, 2))
        d = euclid(pts)
        med, assign = pam(d, 4, seed=2)
        for i in range(15):
            assert d[i, med[assign[i]]] == pytest.approx(d[i, med].min())

    def test_medoids_sorted_and_members(self, rng):
        pts = rng.uniform(size=(9, 2))
        d = euclid(pts)
        med, assign = pam(d, 3, seed=3)
        assert list(med) == sorted(med)
        assert set(med) <= set(range(9))
        # each medoid is assigned to itself
        for pos, m in enumerate(med):
            assert assign[m] == pos

    def test_deterministic_per_seed(self, rng):
        pts = rng.uniform(size=(20, 2))
        d = euclid(pts)
        a = pam(d, 4, seed=7)
        b = pam(d, 4, seed=7)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_pinned_stay_medoids(self, rng):
        pts = rng.uniform(size=(10, 2))
        d = euclid(pts)
        med, _ = pam(d, 3, seed=0, pinned=(4, 8))
        assert {4, 8} <= set(med)

    def test_pinned_validation(self, rng):
        d = euclid(rng.uniform(size=(5, 2)))
        with pytest.raises(ValueError):
            pam(d, 1, pinned=(0, 1))
        with pytest.raises(ValueError):
            pam(d, 2, pinned=(9,))

    def test_k_bounds(self, rng):
        d = euclid(rng.uniform(size=(4, 2)))
        with pytest.raises(ValueError):
            pam(d, 0)
        with pytest.raises(ValueError):
            pam(d, 5)

    def test_k_equals_n_zero_cost(self, rng):
        pts = rng.uniform(size=(6, 2))
        d = euclid(pts)
        med, assign = pam(d, 6, seed=0)
        assert total_cost(d, med) == 0.0
        np.testing.assert_array_equal(np.sort(med), np.arange(6))

    def test_weights_equal_point_duplication(self):
        rng = np.random.default_rng(5)
        pts = rng.uniform(size=(8, 2))
        d = euclid(pts)
        w = np.ones(8)
        w[3] = 3.0
        med_w, _ = pam(d, 2, seed=1, weights=w)
        # duplicating point 3 twice more must give the same optimal cost
        pts_dup = np.vstack([pts, pts[3], pts[3]])
        d_dup = euclid(pts_dup)
        best_w = exhaustive_best(d, 2, weights=w)
        best_dup = exhaustive_best(d_dup, 2)
        assert best_w == pytest.approx(best_dup, rel=1e-9)
        assert total_cost(d, med_w, w) == pytest.approx(best_w, rel=1e-9)

    def test_rejects_bad_matrix(self):
        with pytest.raises(ValueError):
            pam(np.array([[0.0, 1.0], [2.0, 0.0]]), 1)  # asymmetric
        with pytest.raises(ValueError):
            pam(np.array([[0.0, -1.0], [-1.0, 0.0]]), 1)  # negative


@given(st.integers(0, 10_000), st.integers(2, 9), st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_property_valid_clustering(seed, n, k):
    if k > n:
        k = n
    rng = np.random.default_rng(seed)
    pts = rng.uniform(size=(n, 2))
    d = euclid(pts)
    med, assign = pam(d, k, seed=seed)
    assert med.shape == (k,)
    assert assign.shape == (n,)
    assert len(set(med.tolist())) == k
    assert assign.min() >= 0 and assign.max() < k
    cost = total_cost(d, med)
    assert np.isfinite(cost) and cost >= 0.0
