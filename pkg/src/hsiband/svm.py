"""Support-vector classifiers on top of the SMO core.

Three families share one code path:

* ``nu-svm``     — nu-parameterised soft margin, any kernel.
* ``c-svm``      — C-parameterised soft margin (hinge loss), any kernel.
* ``linear-svm`` — linear kernel with hinge or squared-hinge loss; the
  squared-hinge dual is the C dual with 1/(2C) added to the diagonal and
  an unbounded box.

Multiclass problems are reduced one-vs-one with majority voting; vote
ties go to the lowest class id.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import numpy.typing as npt

from .kernels import KernelSpec, gram
from .smo import DEFAULT_TOL, SolverError, nu_upper_bound, solve_csvm, solve_nusvm

SVM_FAMILIES = ("nu-svm", "c-svm", "linear-svm")
LINEAR_LOSSES = ("hinge", "squared-hinge")


@dataclass(frozen=True)
class SvmSpec:
    """Full configuration of one SVM variant."""

    family: str
    kernel: KernelSpec
    nu: float | None = None
    C: float | None = None
    loss: str = "hinge"

    def __post_init__(self) -> None:
        if self.family not in SVM_FAMILIES:
            raise ValueError(f"family must be one of {SVM_FAMILIES}, got {self.family!r}")
        if self.family == "nu-svm":
            if self.nu is None or not 0.0 < self.nu <= 1.0:
                raise ValueError(f"nu must lie in (0, 1], got {self.nu}")
        else:
            if self.C is None or not self.C > 0:
                raise ValueError(f"C must be positive, got {self.C}")
        if self.loss not in LINEAR_LOSSES:
            raise ValueError(f"loss must be one of {LINEAR_LOSSES}, got {self.loss!r}")
        if self.family == "linear-svm" and self.kernel.kind != "linear":
            raise ValueError("linear-svm requires a linear kernel")


@dataclass(frozen=True)
class BinarySvm:
    """One trained two-class machine in f(x) = sum coef_s k(x, s) + b form."""

    sv_x: npt.NDArray[np.float64]  # (n_sv, d) support vectors
    sv_coef: npt.NDArray[np.float64]  # (n_sv,) y_s * alpha_s, alpha in original scale
    bias: float
    rho: float | None  # margin value (nu family only)
    objective: float
    n_iter: int
    converged: bool

    def decision(self, kernel: KernelSpec, X: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return gram(kernel, np.atleast_2d(X), self.sv_x) @ self.sv_coef + self.bias


def _rho_c(alpha: np.ndarray, G: np.ndarray, y: np.ndarray, C: float) -> float:
    """Bias offset for the C dual: f = sum y a k + b with b = -rho."""
    yG = y * G
    at_upper = alpha >= C
    at_lower = alpha <= 0.0
    free = ~at_upper & ~at_lower
    if free.any():
        return float(yG[free].sum() / free.sum())
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = yG[ub_mask].min() if ub_mask.any() else np.inf
    lb = yG[lb_mask].max() if lb_mask.any() else -np.inf
    return float((ub + lb) / 2.0)


def _bias_and_rho_nu(alpha: np.ndarray, G: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Bias b and margin rho from the scaled nu dual (box [0, 1]).

    Free vectors of each class satisfy G_i = n*(rho -+ b); with r1/r2 the
    per-class values, b = (r2 - r1)/(2n) and rho = (r1 + r2)/(2n).
    """
    n = alpha.shape[0]
    rs = []
    for sign in (1.0, -1.0):
        cls = y == sign
        free = cls & (alpha > 0.0) & (alpha < 1.0)
        if free.any():
            rs.append(float(G[free].sum() / free.sum()))
            continue
        ub_mask = cls & (alpha <= 0.0)
        lb_mask = cls & (alpha >= 1.0)
        ub = G[ub_mask].min() if ub_mask.any() else np.inf
        lb = G[lb_mask].max() if lb_mask.any() else -np.inf
        rs.append(float((ub + lb) / 2.0))
    r1, r2 = rs
    return (r2 - r1) / (2.0 * n), (r1 + r2) / (2.0 * n)


def train_binary(
    spec: SvmSpec,
    X: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64],
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> BinarySvm:
    """Train one two-class machine; y entries must be +1/-1."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    K = gram(spec.kernel, X)
    Q = (y[:, None] * y[None, :]) * K
    if spec.family == "nu-svm":
        sol = solve_nusvm(Q, y, spec.nu, tol=tol, max_iter=max_iter)
        bias, rho = _bias_and_rho_nu(sol.alpha, sol.gradient, y)
        alpha = sol.alpha / X.shape[0]  # back to the conventional [0, 1/n] box
    else:
        C = float(spec.C)
        if spec.family == "linear-svm" and spec.loss == "squared-hinge":
            Q = Q + np.eye(X.shape[0]) / (2.0 * C)
            sol = solve_csvm(Q, y, np.inf, tol=tol, max_iter=max_iter)
            box = np.inf
        else:
            sol = solve_csvm(Q, y, C, tol=tol, max_iter=max_iter)
            box = C
        bias, rho = -_rho_c(sol.alpha, sol.gradient, y, box), None
        alpha = sol.alpha
    sv = alpha > 0.0
    if not ((sv & (y > 0)).any() and (sv & (y < 0)).any()):
        raise SolverError("degenerate solution: a class ended up with no support vectors")
    return BinarySvm(
        sv_x=X[sv].copy(),
        sv_coef=(y * alpha)[sv],
        bias=float(bias),
        rho=rho,
        objective=sol.objective,
        n_iter=sol.n_iter,
        converged=sol.converged,
    )


def nu_margin_stats(
    binary: BinarySvm,
    kernel: KernelSpec,
    X: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64],
    slack: float = 1e-8,
) -> tuple[float, float]:
    """Margin-error and support-vector fractions of a trained nu machine.

    A margin error is a training point with y f(x) < rho; ``slack``
    absorbs solver residual so free vectors sitting on the margin are
    not miscounted.  At the optimum the fractions bracket nu:
    margin-error fraction <= nu <= support-vector fraction.
    """
    if binary.rho is None:
        raise ValueError("margin statistics are defined for the nu family only")
    f = binary.decision(kernel, X)
    margin_errors = float(np.mean(np.asarray(y) * f < binary.rho - slack))
    sv_fraction = binary.sv_x.shape[0] / X.shape[0]
    return margin_errors, sv_fraction


@dataclass(frozen=True)
class SvmModel:
    """One-vs-one ensemble over the sorted class ids."""

    spec: SvmSpec
    classes: npt.NDArray[np.int64]
    pairs: tuple[tuple[int, int], ...]  # (low id, high id); low id plays +1
    binaries: tuple[BinarySvm, ...]
    n_features: int


def train_svm(
    spec: SvmSpec,
    X: npt.NDArray[np.float64],
    y: npt.NDArray[np.int64],
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> SvmModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError(f"X {X.shape} and y {y.shape} do not align")
    classes = np.unique(y)
    if classes.size < 2:
        raise ValueError(f"need at least 2 classes, got {classes.tolist()}")
    pairs = tuple(combinations((int(c) for c in classes), 2))
    binaries = []
    for a, b in pairs:
        rows = np.flatnonzero((y == a) | (y == b))
        ybin = np.where(y[rows] == a, 1.0, -1.0)
        if spec.family == "nu-svm" and spec.nu > nu_upper_bound(ybin):
            raise SolverError(
                f"nu = {spec.nu} infeasible for pair ({a}, {b}) with "
                f"{int((ybin > 0).sum())} vs {int((ybin < 0).sum())} examples"
            )
        binaries.append(train_binary(spec, X[rows], ybin, tol=tol, max_iter=max_iter))
    return SvmModel(
        spec=spec,
        classes=classes,
        pairs=pairs,
        binaries=tuple(binaries),
        n_features=X.shape[1],
    )


def predict_svm(model: SvmModel, X: npt.NDArray[np.float64]) -> npt.NDArray[np.int64]:
    """Majority vote over all pairwise machines; ties -> lowest class id."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise ValueError(
            f"expected {model.n_features} features, got {X.shape[1]}"
        )
    index = {int(c): k for k, c in enumerate(model.classes)}
    votes = np.zeros((X.shape[0], model.classes.size), dtype=np.int64)
    for (a, b), binary in zip(model.pairs, model.binaries):
        d = binary.decision(model.spec.kernel, X)
        votes[d >= 0, index[a]] += 1
        votes[d < 0, index[b]] += 1
    return model.classes[np.argmax(votes, axis=1)]
