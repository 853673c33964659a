"""Kernel functions shared by every SVM variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

KERNEL_KINDS = ("linear", "rbf", "polynomial", "sigmoid")


@dataclass(frozen=True)
class KernelSpec:
    """One kernel with its parameters.

    gamma scales the inner product (rbf/polynomial/sigmoid), coef0 is the
    additive offset (polynomial/sigmoid), degree the polynomial exponent.
    A polynomial kernel with degree 0 and coef0 0 degenerates to the plain
    inner product and is accepted as such.
    """

    kind: str
    gamma: float = 1.0
    coef0: float = 0.0
    degree: int = 3

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"kernel kind must be one of {KERNEL_KINDS}, got {self.kind!r}")
        if self.kind != "linear" and not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.kind == "polynomial" and self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")


def gram(
    spec: KernelSpec,
    x: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64] | None = None,
) -> npt.NDArray[np.float64]:
    """Kernel matrix K[i, j] = k(x_i, y_j); y defaults to x."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = x if y is None else np.atleast_2d(np.asarray(y, dtype=np.float64))
    if x.shape[1] != y.shape[1]:
        raise ValueError(
            f"feature widths disagree: {x.shape[1]} vs {y.shape[1]}"
        )
    if spec.kind == "rbf":
        sq = (
            np.sum(x * x, axis=1)[:, None]
            + np.sum(y * y, axis=1)[None, :]
            - 2.0 * (x @ y.T)
        )
        np.maximum(sq, 0.0, out=sq)
        return np.exp(-spec.gamma * sq)
    dots = x @ y.T
    if spec.kind == "linear":
        return dots
    if spec.kind == "polynomial":
        if spec.degree == 0 and spec.coef0 == 0.0:
            return dots  # documented degenerate reading of the power form
        return np.power(spec.gamma * dots + spec.coef0, spec.degree)
    return np.tanh(spec.gamma * dots + spec.coef0)  # sigmoid; may be indefinite


def kernel_eval(
    spec: KernelSpec, x: npt.NDArray[np.float64], y: npt.NDArray[np.float64]
) -> float:
    """Scalar kernel value for two vectors of equal length."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValueError(f"vector lengths disagree: {x.shape[0]} vs {y.shape[0]}")
    return float(gram(spec, x[None, :], y[None, :])[0, 0])
