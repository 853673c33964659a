"""Nearest-neighbour classifier tests against a brute-force reference."""

import numpy as np
import pytest

from hsiband.knn import KnnSpec, predict_knn, train_knn


def knn_reference(Xt, yt, Xq, k, metric, weighting):
    """Independent per-query loop; ties go to the lowest class id."""
    preds = []
    for q in np.atleast_2d(Xq):
        if metric == "euclidean":
            d = np.sqrt(((Xt - q) ** 2).sum(axis=1))
        elif metric == "manhattan":
            d = np.abs(Xt - q).sum(axis=1)
        else:
            d = np.abs(Xt - q).max(axis=1)
        order = np.argsort(d, kind="stable")[:k]
        votes: dict[int, float] = {}
        for idx in order:
            w = 1.0 if weighting == "uniform" else 1.0 / (d[idx] + 1e-12)
            votes[int(yt[idx])] = votes.get(int(yt[idx]), 0.0) + w
        best = max(votes.values())
        preds.append(min(c for c, v in votes.items() if v == best))
    return np.array(preds, dtype=np.int64)


def test_spec_validation():
    with pytest.raises(ValueError):
        KnnSpec(metric="cosine", weighting="uniform", k=3)
    with pytest.raises(ValueError):
        KnnSpec(metric="euclidean", weighting="squared", k=3)
    with pytest.raises(ValueError):
        KnnSpec(metric="euclidean", weighting="uniform", k=0)


def test_k_larger_than_training_set_rejected():
    X = np.zeros((4, 2))
    y = np.array([0, 0, 1, 1])
    with pytest.raises(ValueError, match="4"):
        train_knn(KnnSpec(metric="euclidean", weighting="uniform", k=5), X, y)


@pytest.mark.parametrize("weighting", ["uniform", "distance"])
def test_one_nn_recovers_training_labels(weighting):
    rng = np.random.default_rng(7)
    X = rng.integers(0, 50, size=(30, 3)).astype(float)
    X += np.arange(30)[:, None] * 100.0  # guarantee distinct rows
    y = rng.integers(1, 5, size=30)
    model = train_knn(KnnSpec(metric="euclidean", weighting=weighting, k=1), X, y)
    assert np.array_equal(predict_knn(model, X), y)


def test_uniform_majority_vote_by_hand():
    X = np.array([[0.0], [1.0], [2.0], [10.0]])
    y = np.array([1, 1, 1, 2])
    model = train_knn(KnnSpec(metric="euclidean", weighting="uniform", k=3), X, y)
    assert predict_knn(model, np.array([[1.1]]))[0] == 1
    model4 = train_knn(KnnSpec(metric="euclidean", weighting="uniform", k=4), X, y)
    assert predict_knn(model4, np.array([[1.1]]))[0] == 1  # 3 votes vs 1


def test_distance_weighting_overrides_majority():
    # One very close class-7 point against two distant class-2 points.
    X = np.array([[0.5], [3.0], [3.5]])
    y = np.array([7, 2, 2])
    q = np.array([[0.6]])
    uniform = train_knn(KnnSpec(metric="euclidean", weighting="uniform", k=3), X, y)
    weighted = train_knn(KnnSpec(metric="euclidean", weighting="distance", k=3), X, y)
    assert predict_knn(uniform, q)[0] == 2
    assert predict_knn(weighted, q)[0] == 7


def test_vote_tie_resolves_to_lowest_class_id():
    X = np.array([[1.0], [2.0]])
    y = np.array([5, 3])
    model = train_knn(KnnSpec(metric="euclidean", weighting="uniform", k=2), X, y)
    assert predict_knn(model, np.array([[1.4]]))[0] == 3


def test_metrics_rank_neighbours_differently():
    X = np.array([[3.0, 0.0], [2.2, 2.2]])
    y = np.array([1, 2])
    q = np.array([[0.0, 0.0]])
    for metric, expected in [("euclidean", 1), ("manhattan", 1), ("chebyshev", 2)]:
        model = train_knn(KnnSpec(metric=metric, weighting="uniform", k=1), X, y)
        assert predict_knn(model, q)[0] == expected, metric


@pytest.mark.parametrize("metric", ["euclidean", "manhattan", "chebyshev"])
@pytest.mark.parametrize("weighting", ["uniform", "distance"])
@pytest.mark.parametrize("k", [1, 3, 5])
def test_matches_bruteforce_reference(metric, weighting, k):
    # Integer coordinates keep every distance exact, so neighbour order
    # and accumulated vote weights agree bitwise with the loop reference.
    rng = np.random.default_rng(123)
    Xt = rng.integers(0, 40, size=(60, 4)).astype(float)
    yt = rng.integers(0, 6, size=60)
    Xq = rng.integers(0, 40, size=(45, 4)).astype(float)
    model = train_knn(KnnSpec(metric=metric, weighting=weighting, k=k), Xt, yt)
    got = predict_knn(model, Xq)
    want = knn_reference(Xt, yt, Xq, k, metric, weighting)
    assert np.array_equal(got, want)


def test_chunked_prediction_matches_split_prediction():
    rng = np.random.default_rng(5)
    Xt = rng.normal(size=(80, 6))
    yt = rng.integers(0, 4, size=80)
    Xq = rng.normal(size=(2000, 6))
    model = train_knn(KnnSpec(metric="euclidean", weighting="distance", k=5), Xt, yt)
    whole = predict_knn(model, Xq)
    halves = np.concatenate([predict_knn(model, Xq[:1000]), predict_knn(model, Xq[1000:])])
    assert np.array_equal(whole, halves)
