"""Minimal multilayer perceptron trained with seeded minibatch SGD.

Softmax output with cross-entropy loss; sigmoidal hidden units by
default.  Dropout uses inverted scaling and acts during training only.
``iterations`` counts gradient-descent update steps, not epochs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

MLP_ACTIVATIONS = ("sigmoid", "tanh", "relu")


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


@dataclass(frozen=True)
class MlpSpec:
    hidden: tuple[int, ...] = (30, 30)
    dropout: float = 0.0
    learning_rate: float = 0.01
    batch_size: int = 50
    iterations: int = 100
    activation: str = "sigmoid"
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.hidden or any(int(h) < 1 for h in self.hidden):
            raise ValueError(f"hidden layer sizes must be positive, got {self.hidden}")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must lie in [0, 1), got {self.dropout}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1 or self.iterations < 1:
            raise ValueError("batch size and iterations must be >= 1")
        if self.activation not in MLP_ACTIVATIONS:
            raise ValueError(
                f"activation must be one of {MLP_ACTIVATIONS}, got {self.activation!r}"
            )


@dataclass(frozen=True)
class MlpModel:
    spec: MlpSpec
    classes: npt.NDArray[np.int64]
    weights: tuple[tuple[np.ndarray, np.ndarray], ...]  # (W, b) per layer
    loss_history: npt.NDArray[np.float64]
    n_features: int


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "sigmoid":
        out = np.empty_like(z)
        pos = z >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        out[~pos] = ez / (1.0 + ez)
        return out
    if kind == "tanh":
        return np.tanh(z)
    return np.maximum(z, 0.0)


def _activate_grad(a: np.ndarray, z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "sigmoid":
        return a * (1.0 - a)
    if kind == "tanh":
        return 1.0 - a * a
    return (z > 0).astype(z.dtype)


def init_weights(
    n_features: int, hidden: tuple[int, ...], n_classes: int, rng: np.random.Generator
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Glorot-uniform weight matrices, zero biases."""
    sizes = [n_features, *hidden, n_classes]
    weights = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        W = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        weights.append((W, np.zeros(fan_out)))
    return weights


def loss_and_gradients(
    weights: list[tuple[np.ndarray, np.ndarray]],
    X: np.ndarray,
    Y: np.ndarray,
    activation: str = "sigmoid",
    masks: list[np.ndarray] | None = None,
) -> tuple[float, list[tuple[np.ndarray, np.ndarray]]]:
    """Mean cross-entropy of softmax outputs and its exact gradients.

    ``Y`` is one-hot.  ``masks`` (one per hidden layer) carry inverted
    dropout scaling; pass None for evaluation-mode behaviour.
    """
    n = X.shape[0]
    acts = [np.asarray(X, dtype=np.float64)]  # post-mask, feeds the next layer
    raw_acts = []  # pre-mask, needed for the activation derivative
    zs = []
    for layer, (W, b) in enumerate(weights[:-1]):
        z = acts[-1] @ W + b
        a = _activate(z, activation)
        zs.append(z)
        raw_acts.append(a)
        acts.append(a * masks[layer] if masks is not None else a)
    W_out, b_out = weights[-1]
    logits = acts[-1] @ W_out + b_out
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = float(-(Y * log_probs).sum() / n)

    grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(weights)  # type: ignore[list-item]
    delta = (np.exp(log_probs) - Y) / n
    grads[-1] = (acts[-1].T @ delta, delta.sum(axis=0))
    upstream = delta @ W_out.T
    for layer in range(len(weights) - 2, -1, -1):
        if masks is not None:
            upstream = upstream * masks[layer]
        delta = upstream * _activate_grad(raw_acts[layer], zs[layer], activation)
        grads[layer] = (acts[layer].T @ delta, delta.sum(axis=0))
        if layer:
            upstream = delta @ weights[layer][0].T
    return loss, grads


def train_mlp(
    spec: MlpSpec, X: npt.NDArray[np.float64], y: npt.NDArray[np.int64], seed: int | None = None
) -> MlpModel:
    """Seeded SGD training; raises DivergenceError on non-finite loss."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError(f"X {X.shape} and y {y.shape} do not align")
    classes = np.unique(y)
    if classes.size < 2:
        raise ValueError(f"need at least 2 classes, got {classes.tolist()}")
    Y = np.zeros((X.shape[0], classes.size))
    Y[np.arange(X.shape[0]), np.searchsorted(classes, y)] = 1.0

    rng = np.random.default_rng(spec.seed if seed is None else seed)
    weights = init_weights(X.shape[1], spec.hidden, classes.size, rng)
    n = X.shape[0]
    batch = min(spec.batch_size, n)
    keep = 1.0 - spec.dropout
    order = rng.permutation(n)
    ptr = 0
    history = np.empty(spec.iterations)
    for step in range(spec.iterations):
        if ptr + batch > n:
            order = rng.permutation(n)
            ptr = 0
        rows = order[ptr : ptr + batch]
        ptr += batch
        masks = None
        if spec.dropout > 0.0:
            masks = [
                (rng.random((batch, h)) < keep).astype(np.float64) / keep
                for h in spec.hidden
            ]
        loss, grads = loss_and_gradients(weights, X[rows], Y[rows], spec.activation, masks)
        if not np.isfinite(loss):
            raise DivergenceError(
                f"training diverged at iteration {step}: loss became non-finite "
                f"with learning rate {spec.learning_rate}"
            )
        history[step] = loss
        weights = [
            (W - spec.learning_rate * gW, b - spec.learning_rate * gb)
            for (W, b), (gW, gb) in zip(weights, grads)
        ]
    return MlpModel(
        spec=spec,
        classes=classes,
        weights=tuple((W.copy(), b.copy()) for W, b in weights),
        loss_history=history,
        n_features=X.shape[1],
    )


def predict_mlp(model: MlpModel, X: npt.NDArray[np.float64]) -> npt.NDArray[np.int64]:
    """Argmax of the output logits; ties resolve to the lowest class id."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {X.shape[1]}")
    a = X
    for W, b in model.weights[:-1]:
        a = _activate(a @ W + b, model.spec.activation)
    W_out, b_out = model.weights[-1]
    logits = a @ W_out + b_out
    return model.classes[np.argmax(logits, axis=1)]
