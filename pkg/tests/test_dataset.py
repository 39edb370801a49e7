import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mcmcl.dataset import (
    SwissRollSpec,
    generate_tripartite_swiss_roll,
    load_labels,
    load_matrix,
    log_normalize,
    section_bounds,
    subsample_per_class,
)
from mcmcl.partition import DataError


def test_load_matrix_basic(tmp_path):
    f = tmp_path / "m.csv"
    f.write_text("1,2,3\n4,5,6\n")
    x = load_matrix(f)
    assert x.shape == (2, 3)
    np.testing.assert_array_equal(x, [[1, 2, 3], [4, 5, 6]])


def test_load_matrix_header_and_tabs(tmp_path):
    f = tmp_path / "m.tsv"
    f.write_text("a\tb\n1\t2\n3\t4\n5\t6\n")
    x = load_matrix(f, has_header=True)
    assert x.shape == (3, 2)


def test_load_matrix_bad_cell_named(tmp_path):
    f = tmp_path / "m.csv"
    f.write_text("1,2\n3,abc\n")
    with pytest.raises(DataError, match=r"'abc'.*line 2, column 2"):
        load_matrix(f)


def test_load_matrix_ragged_and_empty(tmp_path):
    f = tmp_path / "ragged.csv"
    f.write_text("1,2\n3\n")
    with pytest.raises(DataError, match="line 2"):
        load_matrix(f)
    e = tmp_path / "empty.csv"
    e.write_text("")
    with pytest.raises(DataError, match="no data"):
        load_matrix(e)


def test_load_labels(tmp_path):
    f = tmp_path / "l.txt"
    f.write_text("1\n2\n0\n")
    np.testing.assert_array_equal(load_labels(f), [1, 2, 0])


@pytest.mark.parametrize("value, expected", [(0, 0.0), (9, 1.0), (99, 2.0)])
def test_log_normalize_values(value, expected):
    x = np.array([[value, 0.0], [1.0, 2.0]])
    assert log_normalize(x)[0, 0] == pytest.approx(expected, abs=1e-15)


def test_log_normalize_rejects_negative():
    with pytest.raises(DataError, match="row 1, column 0"):
        log_normalize(np.array([[1.0, 2.0], [-1.0, 3.0]]))


@given(arrays(np.float64, (4, 3), elements=st.floats(0, 1e6)))
def test_log_normalize_monotone(x):
    y = log_normalize(x)
    flat_x, flat_y = x.ravel(), y.ravel()
    order = np.argsort(flat_x, kind="stable")
    assert np.all(np.diff(flat_y[order]) >= 0)
    assert np.all(y[x == 0] == 0)


def test_swiss_roll_counts():
    x, labels = generate_tripartite_swiss_roll(SwissRollSpec(723, seed=1, gap_fraction=0.05))
    assert x.shape == (723, 3)
    assert np.bincount(labels).tolist() == [0, 241, 241, 241]


def test_swiss_roll_deterministic():
    a = generate_tripartite_swiss_roll(SwissRollSpec(723, seed=4))
    b = generate_tripartite_swiss_roll(SwissRollSpec(723, seed=4))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_swiss_roll_tiny():
    x, labels = generate_tripartite_swiss_roll(SwissRollSpec(6, seed=7, gap_fraction=0.1))
    assert np.bincount(labels).tolist() == [0, 2, 2, 2]
    assert np.all(np.isfinite(x))


@pytest.mark.parametrize("spec", [SwissRollSpec(10), SwissRollSpec(9, gap_fraction=0.0), SwissRollSpec(9, gap_fraction=0.2)])
def test_swiss_roll_rejects_bad_spec(spec):
    with pytest.raises(DataError):
        generate_tripartite_swiss_roll(spec)


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 0.19))
def test_swiss_roll_sections_separated(seed, gap):
    x, labels, t = generate_tripartite_swiss_roll(SwissRollSpec(30, seed, gap), return_t=True)
    span = section_bounds(gap)[-1][1] - section_bounds(gap)[0][0]
    min_gap = gap * span
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            if a < b:
                diff = np.abs(t[labels == a][:, None] - t[labels == b][None, :])
                assert diff.min() >= min_gap - 1e-12
    # coordinates follow the roll parameterisation
    np.testing.assert_allclose(x[:, 0], t * np.cos(t))
    np.testing.assert_allclose(x[:, 2], t * np.sin(t))


def test_subsample_per_class_sizes_and_determinism():
    rng = np.random.default_rng(0)
    labels = np.repeat(np.arange(10), 350)
    x = rng.random((labels.size, 5))
    xs, ls = subsample_per_class(x, labels, 300, seed=2)
    assert xs.shape == (3000, 5)
    assert np.bincount(ls).tolist() == [300] * 10
    xs2, ls2 = subsample_per_class(x, labels, 300, seed=2)
    assert np.array_equal(xs, xs2) and np.array_equal(ls, ls2)


def test_subsample_whole_class():
    x = np.arange(12, dtype=float).reshape(6, 2)
    labels = np.array([1, 1, 1, 2, 2, 2])
    xs, ls = subsample_per_class(x, labels, 3, seed=0)
    assert sorted(map(tuple, xs[ls == 1])) == sorted(map(tuple, x[:3]))


def test_subsample_errors():
    x = np.zeros((4, 2))
    labels = np.array([1, 1, 2, 2])
    with pytest.raises(DataError):
        subsample_per_class(x, labels, 0)
    with pytest.raises(DataError, match="fewer than 3"):
        subsample_per_class(x, labels, 3)
