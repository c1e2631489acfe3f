import numpy as np
import pytest

from conftest import random_dataset
from monofuzz.dataset_io import Dataset
from monofuzz.fuzzy_core import (
    FuzzyTrainingSet,
    cumulative,
    extract_training_memberships,
    fsd_dominates,
    fuse_duplicates,
    median_labels,
    median_of_memberships,
    median_range,
    one_hot,
)


def test_worked_median_examples():
    # class indices are 0-based here
    assert median_of_memberships([0.2, 0.2, 0.4, 0.2, 0.0]) == ((2, 2), 2)
    assert median_of_memberships([0.2, 0.3, 0.0, 0.3, 0.2]) == ((1, 3), 2)


def test_worked_fsd_pair():
    u_a = [0.1, 0.2, 0.3, 0.2, 0.2]
    u_b = [0.1, 0.1, 0.3, 0.2, 0.3]
    assert fsd_dominates(u_a, u_b)
    assert not fsd_dominates(u_b, u_a)


def test_median_edges():
    assert median_of_memberships([1, 0, 0]) == ((0, 0), 0)
    assert median_of_memberships([0, 0, 1]) == ((2, 2), 2)
    assert median_of_memberships([0.5, 0, 0.5]) == ((0, 2), 1)
    assert median_of_memberships([0.5, 0.5]) == ((0, 1), 0)
    lo, hi = median_range(np.eye(4))
    assert lo.tolist() == hi.tolist() == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        cumulative([0, 0])


def random_simplex(rng, c, sparsity=0.4):
    u = rng.random(c) * (rng.random(c) > sparsity)
    if u.sum() == 0:
        u[rng.integers(c)] = 1
    return u / u.sum()


def shift_up(rng, u):
    """A vector FSD-above ``u``: move random mass to higher classes."""
    v = u.copy()
    for _ in range(rng.integers(1, 4)):
        i = rng.integers(len(v) - 1)
        j = rng.integers(i + 1, len(v))
        amt = v[i] * rng.random()
        v[i] -= amt
        v[j] += amt
    return v


def test_fsd_monotone_median_many(rng):
    for _ in range(2000):
        c = int(rng.integers(2, 8))
        u = random_simplex(rng, c)
        v = shift_up(rng, u)
        assert fsd_dominates(u, v)
        (_, a) = median_of_memberships(u)
        (_, b) = median_of_memberships(v)
        assert a <= b


def test_fuse_duplicates():
    d = Dataset(X=[[1, 1], [0, 0], [1, 1], [1, 1], [2, 2]], y=[2, 0, 0, 2, 1], n_classes=3)
    f = fuse_duplicates(d)
    assert f.X.tolist() == [[1, 1], [0, 0], [2, 2]]
    assert np.allclose(f.memberships[0], [1 / 3, 0, 2 / 3])
    assert f.counts.tolist() == [3, 1, 1]
    assert f.duplicated.tolist() == [True, False, False]
    assert f.labels.tolist() == [2, 0, 1]
    assert f.source_index.tolist() == [0, 1, 0, 0, 2]


def test_training_memberships_formula():
    # 1-d chain: labels monotone, so all neighbors are in range
    X = np.arange(6, dtype=float)[:, None]
    d = Dataset(X=X, y=[0, 0, 1, 1, 2, 2], n_classes=3)
    f = extract_training_memberships(d, k=2, rcr=0.5)
    # row 2: neighbors 1 (label 0) and 3 (label 1)
    assert np.allclose(f.memberships[2], [0.25, 0.75, 0])
    assert np.allclose(f.memberships.sum(axis=1), 1)
    assert np.array_equal(extract_training_memberships(d, 2, 1.0).memberships, one_hot(d.y, 3))


def test_training_memberships_respect_range():
    X = np.array([[0.0], [1.0], [2.0], [2.1]])
    d = Dataset(X=X, y=[0, 1, 2, 2], n_classes=3)
    f = extract_training_memberships(d, k=3, rcr=0.0)
    lo_row = f.memberships[1]
    # range of x=1 leaving itself out: [0, 2], all three neighbors eligible
    assert np.allclose(lo_row, [1 / 3, 0, 2 / 3])
    # x=0 is dominated by labels 1, 2, 2 so its range is [0, 1]: only label 1 is eligible
    assert np.allclose(f.memberships[0], [0, 1, 0])


def test_duplicated_rows_keep_fused_memberships():
    d = Dataset(X=[[0.0], [0.0], [1.0], [2.0]], y=[0, 1, 1, 2], n_classes=3)
    f = extract_training_memberships(d, 2, 0.5)
    assert np.allclose(f.memberships[0], [0.5, 0.5, 0])


@pytest.mark.parametrize("seed", range(10))
def test_memberships_sum_to_one(seed):
    rng = np.random.default_rng(seed)
    d = random_dataset(rng, n=50, c=5)
    for rcr in (0.0, 0.3, 0.5, 1.0):
        f = extract_training_memberships(d, 5, rcr)
        assert np.allclose(f.memberships.sum(axis=1), 1, atol=1e-9)
        assert np.array_equal(f.labels, median_labels(f.memberships))


def test_serialization_round_trip(rng):
    f = extract_training_memberships(random_dataset(rng), 5, 0.5)
    g = FuzzyTrainingSet.from_dict(f.to_dict())
    assert np.array_equal(g.X, f.X) and np.array_equal(g.memberships, f.memberships)
    bad = f.to_dict()
    bad["median_labels"] = [(v + 1) % f.n_classes for v in bad["median_labels"]]
    with pytest.raises(ValueError):
        FuzzyTrainingSet.from_dict(bad)


def test_argument_checks(rng):
    d = random_dataset(rng)
    with pytest.raises(ValueError):
        extract_training_memberships(d, 0, 0.5)
    with pytest.raises(ValueError):
        extract_training_memberships(d, 3, 1.5)
