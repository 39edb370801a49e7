import numpy as np
import pytest
from conftest import brute_force_accuracy, brute_force_ari
from hypothesis import given
from hypothesis import strategies as st
from published_tables import TABLE_3, TABLE_4, TABLE_5, TABLE_6, TABLE_8, reports

from mcmcl.metrics import (
    EvaluationReport,
    accuracy,
    adjusted_rand_index,
    contingency,
    dense_rank,
    evaluate,
    mean_rank,
    normalized_mutual_information,
)
from mcmcl.partition import DataError, Partition

labelings = st.integers(2, 30).flatmap(
    lambda n: st.tuples(st.lists(st.integers(1, 4), min_size=n, max_size=n),
                        st.lists(st.integers(1, 5), min_size=n, max_size=n)))


def test_contingency_marginals():
    t = np.array([1, 1, 2, 2, 3])
    p = np.array([5, 6, 6, 6, 5])
    table = contingency(t, p)
    assert table.sum() == 5
    assert table.sum(axis=1).tolist() == [2, 2, 1]
    assert table.sum(axis=0).tolist() == [2, 3]


def test_length_mismatch():
    with pytest.raises(DataError):
        accuracy([1, 2], [1, 2, 3])


def test_accuracy_examples():
    truth = np.array([1, 1, 2, 2, 3, 3])
    assert accuracy(truth, Partition(truth.copy()), 3) == 1.0
    assert accuracy(truth, Partition(np.array([2, 2, 3, 3, 1, 1])), 3) == 1.0
    assert accuracy(truth, Partition(np.array([1, 1, 2, 2, 2, 2])), 3) == 0.0
    assert accuracy(truth, [1, 1, 2, 2, 2, 2]) == pytest.approx(4 / 6)


def test_failed_partition_scores_zero_accuracy_only():
    truth = np.array([1, 1, 2, 2, 3, 3])
    part = Partition(np.array([1, 1, 2, 2, 3, 3]), failed=True)
    rep = evaluate(truth, part, 3, "X")
    assert rep.acc == 0.0
    assert rep.ari == 1.0 and rep.nmi == 1.0


def test_ari_examples():
    assert adjusted_rand_index([1, 1, 2, 2], [1, 1, 2, 2]) == 1.0
    assert adjusted_rand_index([1, 1, 2, 2], [1, 2, 1, 2]) == pytest.approx(-0.5, abs=1e-15)
    assert adjusted_rand_index([1, 1, 2, 2], [1, 1, 1, 1]) == 0.0
    assert adjusted_rand_index([1, 2, 3], [1, 2, 3]) == 1.0
    assert adjusted_rand_index([1, 1, 1], [1, 1, 1]) == 1.0


def test_nmi_examples():
    assert normalized_mutual_information([1, 1, 2, 2], [2, 2, 1, 1]) == pytest.approx(1.0)
    assert normalized_mutual_information([1, 1, 2, 2], [1, 1, 1, 1]) == 0.0
    assert normalized_mutual_information([1, 1, 2, 2], [1, 2, 1, 2]) == pytest.approx(0.0, abs=1e-15)
    assert normalized_mutual_information([1, 1, 1], [1, 1, 1]) == 1.0


def test_against_sklearn():
    skm = pytest.importorskip("sklearn.metrics")
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(2, 80))
        t, p = rng.integers(0, 4, n), rng.integers(0, 6, n)
        assert adjusted_rand_index(t, p) == pytest.approx(skm.adjusted_rand_score(t, p), abs=1e-12)
        ref = skm.normalized_mutual_info_score(t, p, average_method="arithmetic")
        assert normalized_mutual_information(t, p) == pytest.approx(ref, abs=1e-12)


@given(labelings)
def test_accuracy_matches_permutation_search(pair):
    t, p = pair
    assert accuracy(t, p) == pytest.approx(brute_force_accuracy(t, p), abs=1e-12)


@given(labelings)
def test_ari_matches_pair_counting_and_is_symmetric(pair):
    t, p = pair
    ari = adjusted_rand_index(t, p)
    assert ari == pytest.approx(brute_force_ari(t, p), abs=1e-12)
    assert ari == pytest.approx(adjusted_rand_index(p, t), abs=1e-12)
    assert -1 - 1e-12 <= ari <= 1 + 1e-12


@given(labelings, st.permutations(range(1, 6)))
def test_relabel_invariance(pair, perm):
    t, p = pair
    mapping = dict(zip(range(1, 6), perm))
    q = [mapping[v] for v in p]
    assert adjusted_rand_index(t, q) == pytest.approx(adjusted_rand_index(t, p), abs=1e-12)
    assert normalized_mutual_information(t, q) == pytest.approx(normalized_mutual_information(t, p), abs=1e-12)


@given(labelings)
def test_nmi_bounds_and_symmetry(pair):
    t, p = pair
    v = normalized_mutual_information(t, p)
    assert 0.0 <= v <= 1.0
    assert v == pytest.approx(normalized_mutual_information(p, t), abs=1e-12)


def test_random_baseline_ari():
    rng = np.random.default_rng(0)
    truth = np.repeat(np.arange(4), 25)
    scores = [adjusted_rand_index(truth, rng.integers(0, 4, 100)) for _ in range(1000)]
    assert -0.02 <= np.mean(scores) <= 0.02


def test_dense_rank():
    assert dense_rank([0.9, 0.5, 0.9, 0.1]).tolist() == [1, 2, 1, 3]


def test_mean_rank_trivial():
    reps = [EvaluationReport("A", 0.9, 0.8, 0.7), EvaluationReport("B", 0.5, 0.4, 0.3)]
    out = mean_rank(reps)
    assert [r.method for r in out] == ["A", "B"]
    assert out[0].mean_rank == 1.0
    same = mean_rank([EvaluationReport("A", 0.5, 0.5, 0.5), EvaluationReport("B", 0.5, 0.5, 0.5)])
    assert same[0].mean_rank == same[1].mean_rank
    assert [r.method for r in same] == ["A", "B"]


@pytest.mark.parametrize("table", [TABLE_3, TABLE_4, TABLE_5, TABLE_6], ids=["t3", "t4", "t5", "t6"])
def test_published_mean_ranks(table):
    out = {r.method: r.mean_rank for r in mean_rank(reports(table), decimals=2)}
    for m, row in table.items():
        assert round(out[m], 1) == row[3], m


def test_cross_dataset_accuracy_ranks():
    methods = list(TABLE_8)
    acc = np.array([TABLE_8[m][0] for m in methods])
    ranks = np.stack([dense_rank(acc[:, j], decimals=2) for j in range(acc.shape[1])], axis=1)
    for m, row in zip(methods, ranks):
        assert tuple(row) == TABLE_8[m][1], m
        assert round(row.mean(), 1) == TABLE_8[m][2]
