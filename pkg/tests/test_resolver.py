import math
import random

import numpy as np
import pytest

from corefmine.metrics import Partition
from corefmine.resolver import (ClusteringConfig, ScoreMatrix, agglomerate,
                                default_grid, lemma_baseline, merge_trajectory,
                                partition_restricted_clustering, read_scores,
                                tune_threshold, write_scores)
from corefmine.stats import LemmaResource

import oracles
from helpers import make_mention


def random_matrix(rng: random.Random, n: int) -> ScoreMatrix:
    m = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = m[j, i] = rng.random()
    return ScoreMatrix(tuple(range(n)), m)


def clusters_as_sets(clustering) -> set[frozenset]:
    return set(clustering.partition.clusters)


class TestScoreMatrix:
    def test_asymmetric_rejected(self):
        m = np.array([[0.0, 0.3], [0.4, 0.0]])
        with pytest.raises(ValueError, match="asymmetric"):
            ScoreMatrix((1, 2), m)

    def test_non_finite_rejected(self):
        m = np.array([[0.0, np.nan], [np.nan, 0.0]])
        with pytest.raises(ValueError, match="non-finite"):
            ScoreMatrix((1, 2), m)

    def test_out_of_range_rejected(self):
        m = np.array([[0.0, 1.5], [1.5, 0.0]])
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            ScoreMatrix((1, 2), m)

    def test_roundtrip(self, tmp_path):
        rng = random.Random(3)
        matrix = random_matrix(rng, 6)
        path = tmp_path / "scores.txt"
        write_scores(path, matrix)
        back = read_scores(path)
        assert back.mention_ids == matrix.mention_ids
        assert np.allclose(back.scores, matrix.scores, atol=0)

    def test_sparse_input_defaults_missing_pairs(self, tmp_path):
        path = tmp_path / "scores.txt"
        path.write_text("mentions 10 11 12\n10 11 0.7\n", encoding="utf-8")
        matrix = read_scores(path)
        assert matrix.scores[0, 1] == 0.7
        assert matrix.scores[1, 0] == 0.7
        assert matrix.scores[0, 2] == 0.0

    def test_contradictory_pair_rejected(self, tmp_path):
        path = tmp_path / "scores.txt"
        path.write_text("mentions 1 2\n1 2 0.7\n2 1 0.2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="contradictory"):
            read_scores(path)

    def test_agreeing_symmetric_duplicates_accepted(self, tmp_path):
        path = tmp_path / "scores.txt"
        path.write_text("mentions 1 2\n1 2 0.7\n2 1 0.7\n", encoding="utf-8")
        assert read_scores(path).scores[0, 1] == 0.7


class TestAgglomerate:
    def test_two_pairs_hand_case(self):
        m = np.full((4, 4), 0.2)
        m[0, 1] = m[1, 0] = 0.9
        m[2, 3] = m[3, 2] = 0.8
        np.fill_diagonal(m, 0.0)
        clustering = agglomerate(ScoreMatrix((1, 2, 3, 4), m),
                                 ClusteringConfig(threshold=0.5))
        assert clusters_as_sets(clustering) == {frozenset({1, 2}), frozenset({3, 4})}

    def test_threshold_below_minimum_gives_one_cluster(self):
        rng = random.Random(11)
        matrix = random_matrix(rng, 8)
        low = matrix.scores[~np.eye(8, dtype=bool)].min() - 1e-6
        clustering = agglomerate(matrix, ClusteringConfig(threshold=max(low, 0.0)))
        assert len(clustering.partition) == 1

    def test_threshold_above_maximum_gives_singletons(self):
        rng = random.Random(12)
        matrix = random_matrix(rng, 8)
        clustering = agglomerate(matrix, ClusteringConfig(threshold=1.0))
        assert len(clustering.partition) == 8

    def test_matches_naive_reference(self):
        rng = random.Random(99)
        for _ in range(40):
            n = rng.randrange(2, 20)
            matrix = random_matrix(rng, n)
            tau = rng.random()
            ours = agglomerate(matrix, ClusteringConfig(threshold=tau))
            ref = oracles.average_link_naive(list(matrix.mention_ids),
                                             matrix.scores, tau)
            assert clusters_as_sets(ours) == {frozenset(c) for c in ref}

    def test_raising_threshold_refines(self):
        rng = random.Random(5)
        for _ in range(20):
            matrix = random_matrix(rng, rng.randrange(2, 25))
            t1, t2 = sorted((rng.random(), rng.random()))
            coarse = agglomerate(matrix, ClusteringConfig(threshold=t1)).partition
            fine = agglomerate(matrix, ClusteringConfig(threshold=t2)).partition
            for cluster in fine.clusters:
                assert any(cluster <= big for big in coarse.clusters)

    def test_affine_score_transform_preserves_output(self):
        # average linkage commutes with affine maps, so scaling scores and
        # threshold together cannot change the merge order
        rng = random.Random(21)
        for _ in range(20):
            matrix = random_matrix(rng, rng.randrange(2, 15))
            tau = rng.random()
            a = rng.uniform(0.1, 1.0)
            b = rng.uniform(0.0, 1.0 - a)
            scaled = ScoreMatrix(matrix.mention_ids, matrix.scores * a + b
                                 - np.diag(np.diag(matrix.scores * a + b)))
            base = agglomerate(matrix, ClusteringConfig(threshold=tau))
            moved = agglomerate(scaled, ClusteringConfig(threshold=min(a * tau + b, 1.0)))
            assert clusters_as_sets(base) == clusters_as_sets(moved)

    def test_single_mention(self):
        matrix = ScoreMatrix((7,), np.zeros((1, 1)))
        clustering = agglomerate(matrix, ClusteringConfig(threshold=0.5))
        assert clusters_as_sets(clustering) == {frozenset({7})}


class TestTuneThreshold:
    def test_singleton_key_picks_smallest_grid_above_max_score(self):
        n = 5
        m = np.full((n, n), 0.4)
        np.fill_diagonal(m, 0.0)
        matrix = ScoreMatrix(tuple(range(n)), m)
        key = Partition.of([{i} for i in range(n)])
        tau = tune_threshold(key, matrix)
        grid = default_grid()
        assert tau == min(g for g in grid if g > 0.4)

    def test_one_cluster_key_picks_smallest_grid_value(self):
        n = 4
        m = np.full((n, n), 0.9)
        np.fill_diagonal(m, 0.0)
        matrix = ScoreMatrix(tuple(range(n)), m)
        key = Partition.of([set(range(n))])
        assert tune_threshold(key, matrix) == 0.0

    def test_single_element_grid(self):
        matrix = random_matrix(random.Random(1), 4)
        key = Partition.of([{0, 1}, {2, 3}])
        assert tune_threshold(key, matrix, grid=[0.35]) == 0.35


class TestPartitionRestricted:
    def test_single_group_equals_plain_agglomerate(self):
        matrix = random_matrix(random.Random(8), 9)
        cfg = ClusteringConfig(threshold=0.6)
        docs = {i: f"d{i}" for i in matrix.mention_ids}
        groups = {f"d{i}": "all" for i in matrix.mention_ids}
        restricted = partition_restricted_clustering(matrix, cfg, docs, groups)
        plain = agglomerate(matrix, cfg)
        assert clusters_as_sets(restricted) == clusters_as_sets(plain)

    def test_cross_group_merges_never_occur(self):
        n = 6
        m = np.full((n, n), 0.99)
        np.fill_diagonal(m, 0.0)
        matrix = ScoreMatrix(tuple(range(n)), m)
        docs = {i: f"d{i}" for i in range(n)}
        groups = {f"d{i}": "g1" if i < 3 else "g2" for i in range(n)}
        clustering = partition_restricted_clustering(
            matrix, ClusteringConfig(threshold=0.5), docs, groups)
        assert clusters_as_sets(clustering) == {frozenset({0, 1, 2}),
                                                frozenset({3, 4, 5})}

    def test_equals_unioned_per_group_runs(self):
        rng = random.Random(14)
        matrix = random_matrix(rng, 6)
        cfg = ClusteringConfig(threshold=0.5)
        docs = {i: f"d{i}" for i in range(6)}
        groups = {f"d{i}": "g1" if i < 3 else "g2" for i in range(6)}
        combined = partition_restricted_clustering(matrix, cfg, docs, groups)
        separate = set()
        for ids in ([0, 1, 2], [3, 4, 5]):
            separate |= clusters_as_sets(agglomerate(matrix.submatrix(ids), cfg))
        assert clusters_as_sets(combined) == separate

    def test_missing_document_errors(self):
        matrix = random_matrix(random.Random(2), 3)
        with pytest.raises(KeyError):
            partition_restricted_clustering(matrix, ClusteringConfig(), {}, {})


class TestLemmaBaseline:
    def test_groups_by_head_lemma(self):
        mentions = [
            make_mention(1, "the plane crash was bad", "plane crash"),
            make_mention(2, "another crash happened then", "crash"),
            make_mention(3, "a disaster took place there", "disaster"),
        ]
        clustering = lemma_baseline(mentions)
        assert clusters_as_sets(clustering) == {frozenset({1, 2}), frozenset({3})}

    def test_all_distinct_lemmas_gives_singletons(self):
        mentions = [
            make_mention(1, "the fire started quickly there", "fire"),
            make_mention(2, "a flood came in overnight", "flood"),
        ]
        clustering = lemma_baseline(mentions)
        assert len(clustering.partition) == 2

    def test_lemma_table_merges_inflections(self):
        lemmas = LemmaResource({"crashed": "crash"})
        mentions = [
            make_mention(1, "the plane crashed into it", "crashed"),
            make_mention(2, "a crash happened near here", "crash"),
        ]
        clustering = lemma_baseline(mentions, lemmas)
        assert clusters_as_sets(clustering) == {frozenset({1, 2})}

    def test_permutation_invariant(self):
        mentions = [
            make_mention(1, "the storm hit the coast", "storm"),
            make_mention(2, "that storm lingered for days", "storm"),
            make_mention(3, "an eruption followed soon after", "eruption"),
        ]
        fwd = lemma_baseline(mentions)
        rev = lemma_baseline(list(reversed(mentions)))
        assert clusters_as_sets(fwd) == clusters_as_sets(rev)
