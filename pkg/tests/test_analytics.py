import io
import itertools
import math

import numpy as np
import pytest

from nirx.analytics import (
    Cluster,
    UNFOUND,
    auto_title,
    cluster_queries,
    default_cluster_count,
    first_relevant_rank,
    kernel_diagnostics,
    median_metric,
    query_vector,
    spherical_kmeans,
)
from nirx.embeddings import load_embeddings


def table_of(text):
    return load_embeddings(io.StringIO(text))


class TestFirstRelevantRank:
    def test_basic(self):
        assert first_relevant_rank(["d1", "d2", "d3"], {"d2": 1}) == 2

    def test_unfound(self):
        assert first_relevant_rank(["d1"], {}) is UNFOUND

    def test_grade_zero_not_relevant(self):
        assert first_relevant_rank(["d1", "d2"], {"d1": 0, "d2": 2}) == 2

    def test_threshold(self):
        assert first_relevant_rank(["d1", "d2"], {"d1": 1, "d2": 2}, threshold=2) == 2


class TestMedianMetric:
    def test_odd(self):
        assert median_metric([1, 3, 10]) == 3

    def test_even(self):
        assert median_metric([1, 2, 3, 4]) == 2.5

    def test_unfound_middle(self):
        assert median_metric([2, None, None]) is UNFOUND

    def test_unfound_sorts_last(self):
        assert median_metric([None, 1, 2]) == 2

    def test_single_element(self):
        assert median_metric([7]) == 7

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            median_metric([])

    def test_even_with_unfound_in_middle(self):
        assert median_metric([1, None]) is UNFOUND


class TestQueryVector:
    def test_single_term(self):
        table = table_of("a 1 0")
        np.testing.assert_array_equal(query_vector(["a"], table), [1.0, 0.0])

    def test_mean_renormalized(self):
        table = table_of("a 1 0\nb 0 1")
        v = query_vector(["a", "b"], table)
        np.testing.assert_allclose(v, [math.sqrt(2) / 2] * 2, atol=1e-12)

    def test_all_oov(self):
        table = table_of("a 1 0")
        assert query_vector(["zzz"], table) is None

    def test_oov_excluded_from_mean(self):
        table = table_of("a 1 0")
        np.testing.assert_array_equal(query_vector(["a", "zzz"], table), [1.0, 0.0])


def brute_force_best_two_partition(points):
    """Minimum within-cluster cosine cost over all 2-partitions, where a
    cluster's centroid is its renormalized mean."""
    n = len(points)
    best_cost, best_groups = math.inf, None
    for mask in range(1, 2 ** (n - 1)):
        groups = ([], [])
        for i in range(n):
            groups[(mask >> i) & 1].append(i)
        if not groups[0] or not groups[1]:
            continue
        cost = 0.0
        for g in groups:
            mean = np.mean([points[i] for i in g], axis=0)
            c = mean / np.linalg.norm(mean)
            cost += sum(1.0 - float(np.dot(points[i], c)) for i in g)
        if cost < best_cost:
            best_cost, best_groups = cost, tuple(frozenset(g) for g in groups)
    return best_groups


class TestClustering:
    def planted_vectors(self):
        rng = np.random.default_rng(3)
        vecs = {}
        for i in range(3):
            v = np.array([1.0, 0.0]) + rng.normal(0, 0.05, 2)
            vecs[f"x{i}"] = v / np.linalg.norm(v)
        for i in range(3):
            v = np.array([0.0, 1.0]) + rng.normal(0, 0.05, 2)
            vecs[f"y{i}"] = v / np.linalg.norm(v)
        return vecs

    def test_recovers_planted_partition_matches_bruteforce(self):
        vecs = self.planted_vectors()
        qids = sorted(vecs)
        points = [vecs[q] for q in qids]
        want = brute_force_best_two_partition(points)
        for seed in range(1, 21):
            clusters = cluster_queries(vecs, k=2, seed=seed)
            got = tuple(
                frozenset(qids.index(q) for q in c.member_query_ids) for c in clusters
            )
            assert frozenset(got) == frozenset(want)

    def test_determinism(self):
        vecs = self.planted_vectors()
        runs = [cluster_queries(vecs, k=2, seed=9) for _ in range(5)]
        assignments = [
            tuple((c.cluster_id, tuple(c.member_query_ids)) for c in r) for r in runs
        ]
        assert len(set(assignments)) == 1

    def test_k_one(self):
        vecs = self.planted_vectors()
        clusters = cluster_queries(vecs, k=1, seed=1)
        assert len(clusters) == 1
        assert sorted(clusters[0].member_query_ids) == sorted(vecs)

    def test_k_equals_n_singletons(self):
        vecs = self.planted_vectors()
        clusters = cluster_queries(vecs, k=len(vecs), seed=1)
        members = sorted(m for c in clusters for m in c.member_query_ids)
        assert members == sorted(vecs)
        assert all(len(c.member_query_ids) == 1 for c in clusters)

    def test_partition_property(self):
        vecs = self.planted_vectors()
        clusters = cluster_queries(vecs, k=3, seed=5)
        members = [m for c in clusters for m in c.member_query_ids]
        assert sorted(members) == sorted(vecs)

    def test_too_few_vectors(self):
        with pytest.raises(ValueError):
            cluster_queries({"a": np.array([1.0, 0.0])}, k=2, seed=1)

    def test_lloyd_cost_non_increasing(self):
        rng = np.random.default_rng(11)
        pts = rng.normal(size=(60, 8))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        for seed in (1, 2, 3):
            _, _, costs = spherical_kmeans(pts, k=5, seed=seed)
            assert all(b <= a + 1e-9 for a, b in zip(costs, costs[1:]))

    def test_default_cluster_count(self):
        assert default_cluster_count(0) == 0
        assert default_cluster_count(1) == 1
        assert default_cluster_count(20) == 4  # ceil(sqrt(10)) = 4
        assert default_cluster_count(3) == 2


class TestAutoTitle:
    def test_frequency_then_alpha(self):
        cluster = Cluster("c0", "", ["q1", "q2"])
        tokens = {"q1": ["what", "is", "bm25"], "q2": ["bm25", "formula"]}
        # "what"/"is" are stopwords; bm25 twice beats formula once
        assert auto_title(cluster, tokens) == "bm25-formula"

    def test_override_wins(self):
        cluster = Cluster("c1", "", ["q1"])
        assert (
            auto_title(cluster, {"q1": ["x"]}, overrides={"c1": "ranking math"})
            == "ranking math"
        )

    def test_all_stopwords_fallback(self):
        cluster = Cluster("c2", "", ["q1"])
        assert auto_title(cluster, {"q1": ["the", "of"]}) == "cluster-c2"

    def test_top_three_only(self):
        cluster = Cluster("c0", "", ["q1"])
        tokens = {"q1": ["dd", "cc", "bb", "aa", "dd", "cc", "dd"]}
        assert auto_title(cluster, tokens) == "dd-cc-aa"


class TestDeltaAntisymmetry:
    def test_swap_negates(self):
        qrels = {"d2": 1}
        model = ["d1", "d2", "d3"]
        base = ["d2", "d1", "d3"]
        frr_m = first_relevant_rank(model, qrels)
        frr_b = first_relevant_rank(base, qrels)
        assert (frr_b - frr_m) == -(frr_m - frr_b)


class TestKernelDiagnostics:
    def test_single_candidate_zero_variance(self, tmp_path):
        from test_ingest import write_small_fixture
        from nirx.ingest import ClusterConfig, build_snapshot

        paths = write_small_fixture(tmp_path)
        snap = build_snapshot(
            **paths, cluster_config=ClusterConfig(k=1, candidate_depth=1)
        )
        diag = kernel_diagnostics(snap)
        assert all(v == 0.0 for v in diag.mean_within_query_variance)

    def test_no_qrels_counts_all_queries(self, tmp_path):
        from test_ingest import write_small_fixture
        from nirx.ingest import ClusterConfig, build_snapshot

        paths = write_small_fixture(tmp_path)
        paths["qrels_file"].write_text("")
        snap = build_snapshot(**paths, cluster_config=ClusterConfig(k=1))
        diag = kernel_diagnostics(snap)
        assert diag.unjudged_above_judged == len(snap.baseline)

    def test_desk_fixture_exact_match_variance_low(self, desk_snapshot):
        diag = kernel_diagnostics(desk_snapshot)
        by_mu = dict(zip(diag.kernel_mus, diag.mean_within_query_variance))
        assert by_mu[1.0] < by_mu[0.9]

    def test_pool_bias_plant_flagged(self, desk_snapshot):
        diag = kernel_diagnostics(desk_snapshot)
        assert "q00" in diag.flagged_query_ids
        assert diag.unjudged_above_judged >= 1

    def test_unjudged_query_flagged_in_summary(self, desk_snapshot):
        assert desk_snapshot.summaries["q05"].unjudged
        assert not desk_snapshot.summaries["q00"].unjudged
