"""Dual-solver facade: picks the compiled backend when available.

Set ``HSIBAND_PURE_SMO=1`` to force the pure NumPy implementation.  Both
backends execute the same floating-point program, so results do not
depend on which one is active.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from . import _smo_py

if os.environ.get("HSIBAND_PURE_SMO", "") not in ("", "0"):
    _impl = _smo_py
else:
    try:
        from . import _smo as _impl  # type: ignore[no-redef]
    except ImportError:  # extension not built; the pure path is equivalent
        _impl = _smo_py

BACKEND: str = _impl.BACKEND

DEFAULT_TOL = 1e-3
ITER_CAP_FACTOR = 10_000  # max iterations = factor * n


class SolverError(ValueError):
    """The dual problem is malformed or infeasible."""


@dataclass(frozen=True)
class DualSolution:
    """Raw solver output: box variables, gradient, bookkeeping."""

    alpha: npt.NDArray[np.float64]
    gradient: npt.NDArray[np.float64]
    objective: float
    n_iter: int
    converged: bool


def _check_inputs(Q: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise SolverError(f"Q must be square, got shape {Q.shape}")
    n = Q.shape[0]
    if y.shape != (n,):
        raise SolverError(f"y has shape {y.shape}, expected ({n},)")
    if n == 0:
        raise SolverError("empty problem")
    if not np.all(np.abs(y) == 1.0):
        raise SolverError("y entries must be +1 or -1")
    return Q, y


def _warn_cap(n_iter: int, n: int) -> None:
    warnings.warn(
        f"dual solver hit its iteration cap ({n_iter} iterations, n={n}); "
        "returning the best iterate found",
        RuntimeWarning,
        stacklevel=3,
    )


def solve_csvm(
    Q: np.ndarray,
    y: np.ndarray,
    C: float,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> DualSolution:
    """Solve min 1/2 a'Qa - e'a  s.t. y'a = 0, 0 <= a <= C.

    ``C`` may be ``inf`` for diagonally-shifted (squared hinge) duals.
    """
    Q, y = _check_inputs(Q, y)
    n = Q.shape[0]
    if not C > 0:
        raise SolverError(f"C must be positive, got {C}")
    if max_iter is None:
        max_iter = ITER_CAP_FACTOR * n
    alpha = np.zeros(n)
    G = np.full(n, -1.0)  # gradient at alpha = 0
    n_iter, converged = _impl.run_csvm(Q, y, C, alpha, G, tol, max_iter)
    if not converged:
        _warn_cap(n_iter, n)
    # obj = 1/2 a'Qa - e'a; with G = Qa - e this is (a.(G - e))/2
    objective = 0.5 * float(alpha @ (G - np.ones(n)))
    return DualSolution(alpha=alpha, gradient=G, objective=objective,
                        n_iter=n_iter, converged=converged)


def nu_upper_bound(y: np.ndarray) -> float:
    """Largest feasible nu for the given labels: 2 * min(n+, n-) / n."""
    y = np.asarray(y, dtype=np.float64)
    n_pos = int(np.sum(y > 0))
    n_neg = y.shape[0] - n_pos
    return 2.0 * min(n_pos, n_neg) / y.shape[0]


def solve_nusvm(
    Q: np.ndarray,
    y: np.ndarray,
    nu: float,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> DualSolution:
    """Solve the scaled problem min 1/2 a'Qa  s.t. y'a = 0, e'a = nu*n,
    0 <= a <= 1.

    In the conventional parameterisation the box is [0, 1/n]; divide the
    returned alpha by n to get those coefficients.
    """
    Q, y = _check_inputs(Q, y)
    n = Q.shape[0]
    if not 0.0 < nu <= 1.0:
        raise SolverError(f"nu must lie in (0, 1], got {nu}")
    bound = nu_upper_bound(y)
    if nu > bound:
        raise SolverError(
            f"nu = {nu} is infeasible for this class balance; the largest "
            f"feasible value is 2*min(n+, n-)/n = {bound:.6g}"
        )
    if max_iter is None:
        max_iter = ITER_CAP_FACTOR * n
    # Fill each class up to nu*n/2 total mass, front to back.
    alpha = np.zeros(n)
    for sign in (1.0, -1.0):
        remaining = nu * n / 2.0
        for t in np.flatnonzero(y == sign):
            alpha[t] = min(1.0, remaining)
            remaining -= alpha[t]
    # Initial gradient comes from shared BLAS code so both backends see
    # bit-identical starting values.
    G = Q @ alpha
    n_iter, converged = _impl.run_nusvm(Q, y, alpha, G, tol, max_iter)
    if not converged:
        _warn_cap(n_iter, n)
    objective = 0.5 * float(alpha @ G)
    return DualSolution(alpha=alpha, gradient=G, objective=objective,
                        n_iter=n_iter, converged=converged)
