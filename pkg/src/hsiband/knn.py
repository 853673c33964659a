"""k-nearest-neighbour classifier with pluggable metric and weighting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

KNN_METRICS = ("euclidean", "manhattan", "chebyshev")
KNN_WEIGHTINGS = ("uniform", "distance")

# Guard added to distances before inversion so zero-distance neighbours
# get a large, finite weight.
DISTANCE_EPS = 1e-12


@dataclass(frozen=True)
class KnnSpec:
    metric: str = "euclidean"
    weighting: str = "uniform"
    k: int = 1

    def __post_init__(self) -> None:
        if self.metric not in KNN_METRICS:
            raise ValueError(f"metric must be one of {KNN_METRICS}, got {self.metric!r}")
        if self.weighting not in KNN_WEIGHTINGS:
            raise ValueError(
                f"weighting must be one of {KNN_WEIGHTINGS}, got {self.weighting!r}"
            )
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class KnnModel:
    spec: KnnSpec
    X: npt.NDArray[np.float64]
    y: npt.NDArray[np.int64]
    classes: npt.NDArray[np.int64]


def train_knn(spec: KnnSpec, X: npt.NDArray[np.float64], y: npt.NDArray[np.int64]) -> KnnModel:
    """Store the training records; errors out if k exceeds their count."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError(f"X {X.shape} and y {y.shape} do not align")
    if spec.k > X.shape[0]:
        raise ValueError(f"k = {spec.k} exceeds the {X.shape[0]} stored records")
    return KnnModel(spec=spec, X=X.copy(), y=y.copy(), classes=np.unique(y))


def _distances(metric: str, Xq: np.ndarray, Xt: np.ndarray) -> np.ndarray:
    if metric == "euclidean":
        sq = (
            np.sum(Xq * Xq, axis=1)[:, None]
            + np.sum(Xt * Xt, axis=1)[None, :]
            - 2.0 * (Xq @ Xt.T)
        )
        np.maximum(sq, 0.0, out=sq)
        return np.sqrt(sq)
    diff = np.abs(Xq[:, None, :] - Xt[None, :, :])
    if metric == "manhattan":
        return diff.sum(axis=2)
    return diff.max(axis=2)  # chebyshev


def predict_knn(
    model: KnnModel, X: npt.NDArray[np.float64], chunk_size: int = 256
) -> npt.NDArray[np.int64]:
    """Vote over the k nearest stored records; ties -> lowest class id.

    Queries are processed in chunks to bound the distance-matrix memory.
    Neighbour ranking uses a stable sort, so equidistant records resolve
    by storage order deterministically.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.X.shape[1]:
        raise ValueError(f"expected {model.X.shape[1]} features, got {X.shape[1]}")
    spec = model.spec
    label_pos = np.searchsorted(model.classes, model.y)  # class column per record
    out = np.empty(X.shape[0], dtype=np.int64)
    for start in range(0, X.shape[0], chunk_size):
        q = X[start : start + chunk_size]
        nq = q.shape[0]
        d = _distances(spec.metric, q, model.X)
        order = np.argsort(d, axis=1, kind="stable")[:, : spec.k]
        if spec.weighting == "distance":
            w = 1.0 / (np.take_along_axis(d, order, axis=1) + DISTANCE_EPS)
        else:
            w = np.ones((nq, spec.k))
        votes = np.zeros((nq, model.classes.size))
        rows = np.repeat(np.arange(nq), spec.k)
        np.add.at(votes, (rows, label_pos[order].ravel()), w.ravel())
        out[start : start + chunk_size] = model.classes[np.argmax(votes, axis=1)]
    return out
