"""Independent reference implementations used only by the test suite.

Everything here is deliberately written with a different algorithmic
approach than the library (dense enumeration, generic NLP solvers,
direct definitions) so agreement is meaningful.
"""

from __future__ import annotations

from itertools import product

import numpy as np
from scipy.optimize import linprog, minimize


def qp_oracle(Q, p, A_eq, b_eq, lower, upper, n_starts=16, seed=0):
    """Global minimum of 1/2 x'Qx + p'x s.t. A_eq x = b_eq, lower<=x<=upper.

    Strategy: enumerate every face of the box (each variable at its
    lower bound, upper bound, or free), solve the equality-constrained
    stationary system on each face, keep feasible candidates; then
    polish with multi-start SLSQP.  Q may be indefinite.  Intended for
    n <= ~10.
    """
    Q = np.asarray(Q, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    A = np.atleast_2d(np.asarray(A_eq, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b_eq, dtype=np.float64))
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    n = Q.shape[0]
    feas_tol = 1e-8

    def objective(x):
        return 0.5 * x @ Q @ x + p @ x

    def feasible(x, tol=feas_tol):
        return (
            np.all(x >= lower - tol)
            and np.all(x <= upper + tol)
            and np.max(np.abs(A @ x - b), initial=0.0) <= tol
        )

    candidates = []

    # Face enumeration: 0 = at lower, 1 = at upper, 2 = free.
    statuses = [(0, 2) if not np.isfinite(upper[v]) else (0, 1, 2) for v in range(n)]
    for pattern in product(*statuses):
        pattern = np.asarray(pattern)
        x = np.where(pattern == 1, upper, lower).astype(np.float64)
        free = np.flatnonzero(pattern == 2)
        fixed = np.flatnonzero(pattern != 2)
        if free.size:
            nf, m = free.size, A.shape[0]
            kkt = np.zeros((nf + m, nf + m))
            kkt[:nf, :nf] = Q[np.ix_(free, free)]
            kkt[:nf, nf:] = A[:, free].T
            kkt[nf:, :nf] = A[:, free]
            rhs = np.concatenate(
                [
                    -(p[free] + Q[np.ix_(free, fixed)] @ x[fixed]),
                    b - A[:, fixed] @ x[fixed],
                ]
            )
            sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
            if not np.allclose(kkt @ sol, rhs, atol=1e-7):
                continue  # inconsistent face
            x = x.copy()
            x[free] = sol[:nf]
        if feasible(x):
            candidates.append(x)

    best = np.inf
    best_x = None
    for x in candidates:
        val = objective(x)
        if val < best:
            best = val
            best_x = x

    # Convex problems are solved exactly by the face enumeration; the
    # multi-start polish only matters for indefinite Q.
    if best_x is not None and np.linalg.eigvalsh(Q).min() >= -1e-10:
        return best, best_x

    # Multi-start polish (SLSQP handles indefinite objectives fine here);
    # seeded from random feasible points plus the best enumerated faces.
    rng = np.random.default_rng(seed)
    finite_upper = np.where(np.isfinite(upper), upper, np.maximum(np.abs(lower), 1.0) * 1e3)
    candidates.sort(key=objective)
    starts = candidates[:4]
    for _ in range(n_starts):
        r = rng.uniform(lower, finite_upper)
        starts.append(project_onto_constraints(r, A, b, lower, finite_upper))
    constraints = [{"type": "eq", "fun": lambda x, k=k: A[k] @ x - b[k]} for k in range(A.shape[0])]
    bounds = list(zip(lower, [u if np.isfinite(u) else None for u in upper]))
    for s in starts:
        res = minimize(
            objective,
            s,
            jac=lambda x: Q @ x + p,
            bounds=bounds,
            constraints=constraints,
            method="SLSQP",
            options={"maxiter": 200, "ftol": 1e-14},
        )
        for x in (s, res.x):
            if feasible(x, tol=1e-7):
                val = objective(np.clip(x, lower, upper))
                if val < best:
                    best = val
                    best_x = np.clip(x, lower, upper)
    if best_x is None:
        raise RuntimeError("oracle found no feasible point")
    return best, best_x


def qp_kkt_values(Q, p, A_eq, b_eq, lower, upper):
    """All feasible KKT-certified stationary objective values.

    Enumerates every box face, solves the stationary system, and keeps
    points that satisfy primal feasibility and the multiplier sign
    conditions.  For convex Q the minimum of this set is the global
    optimum; for indefinite Q it is the exhaustive list of candidate
    limits of any first-order dual solver.
    """
    Q = np.asarray(Q, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    A = np.atleast_2d(np.asarray(A_eq, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b_eq, dtype=np.float64))
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    n = Q.shape[0]
    m = A.shape[0]
    tol = 1e-7
    values = []
    statuses = [(0, 2) if not np.isfinite(upper[v]) else (0, 1, 2) for v in range(n)]
    for pattern in product(*statuses):
        pattern = np.asarray(pattern)
        x = np.where(pattern == 1, upper, lower).astype(np.float64)
        free = np.flatnonzero(pattern == 2)
        fixed = np.flatnonzero(pattern != 2)
        if free.size:
            nf = free.size
            kkt = np.zeros((nf + m, nf + m))
            kkt[:nf, :nf] = Q[np.ix_(free, free)]
            kkt[:nf, nf:] = A[:, free].T
            kkt[nf:, :nf] = A[:, free]
            rhs = np.concatenate(
                [
                    -(p[free] + Q[np.ix_(free, fixed)] @ x[fixed]),
                    b - A[:, fixed] @ x[fixed],
                ]
            )
            sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
            if not np.allclose(kkt @ sol, rhs, atol=1e-7):
                continue
            x = x.copy()
            x[free] = sol[:nf]
        if np.any(x < lower - tol) or np.any(x > upper + tol):
            continue
        if np.max(np.abs(A @ x - b), initial=0.0) > tol:
            continue
        # Certify stationarity: does some multiplier vector lam satisfy
        # (g + A'lam)_v ~ 0 on free vars, >= 0 at lower, <= 0 at upper?
        # All conditions become inequalities with a small slack.
        g = Q @ x + p
        rows_ub = []
        rhs_ub = []
        for v in free:
            rows_ub.append(A[:, v])
            rhs_ub.append(-g[v] + tol)
            rows_ub.append(-A[:, v])
            rhs_ub.append(g[v] + tol)
        for v in np.flatnonzero(pattern == 0):
            rows_ub.append(-A[:, v])
            rhs_ub.append(g[v] + tol)
        for v in np.flatnonzero(pattern == 1):
            rows_ub.append(A[:, v])
            rhs_ub.append(-g[v] + tol)
        res = linprog(
            np.zeros(m),
            A_ub=np.asarray(rows_ub) if rows_ub else None,
            b_ub=np.asarray(rhs_ub) if rhs_ub else None,
            bounds=[(None, None)] * m,
            method="highs",
        )
        if res.status != 0:
            continue
        values.append(float(0.5 * x @ Q @ x + p @ x))
    return sorted(values)


def project_onto_constraints(x, A, b, lower, upper, iters=500):
    """Alternating projection onto {Ax=b} and the box."""
    x = x.astype(np.float64).copy()
    pinv = np.linalg.pinv(A)
    for _ in range(iters):
        x = x - pinv @ (A @ x - b)
        x = np.clip(x, lower, upper)
        if np.max(np.abs(A @ x - b), initial=0.0) < 1e-12:
            break
    return x


def csvm_oracle(K, y, C, seed=0):
    """Reference optimum of the C-SVM dual for kernel matrix K."""
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    Q = (y[:, None] * y[None, :]) * K
    return qp_oracle(
        Q, -np.ones(n), y[None, :], [0.0], np.zeros(n), np.full(n, float(C)), seed=seed
    )


def nusvm_oracle(K, y, nu, seed=0):
    """Reference optimum of the scaled nu-SVM dual (box [0, 1])."""
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    Q = (y[:, None] * y[None, :]) * K
    A = np.vstack([y, np.ones(n)])
    return qp_oracle(
        Q, np.zeros(n), A, [0.0, nu * n], np.zeros(n), np.ones(n), seed=seed
    )


def squared_hinge_oracle(K, y, C, seed=0):
    """Reference optimum of the squared-hinge dual (shifted diagonal)."""
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    Q = (y[:, None] * y[None, :]) * K + np.eye(n) / (2.0 * C)
    return qp_oracle(
        Q, -np.ones(n), y[None, :], [0.0], np.zeros(n), np.full(n, np.inf), seed=seed
    )


def median_window_oracle(values, radius):
    """Literal definition of the clipped-window spatial median."""
    rows, cols, bands = values.shape
    out = np.empty_like(values, dtype=np.float64)
    for r in range(rows):
        for c in range(cols):
            r0, r1 = max(0, r - radius), min(rows, r + radius + 1)
            c0, c1 = max(0, c - radius), min(cols, c + radius + 1)
            window = values[r0:r1, c0:c1, :].reshape(-1, bands)
            out[r, c] = np.median(window, axis=0)
    return out


def linearly_separable(X, y, margin=1e-9):
    """LP feasibility check: does a hyperplane strictly separate y=+-1?"""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    # Find (w, b) with y_i (w.x_i + b) >= 1 and ||w||_inf bounded.
    A_ub = -(y[:, None] * np.hstack([X, np.ones((n, 1))]))
    b_ub = -np.ones(n)
    bounds = [(-1e6, 1e6)] * (d + 1)
    res = linprog(
        np.zeros(d + 1), A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs"
    )
    return res.status == 0


def accuracy_by_hand(pred, truth):
    """Tally loop mirroring the plain definition of percent accuracy."""
    hits = 0
    for p, t in zip(pred, truth):
        if int(p) == int(t):
            hits += 1
    return 100.0 * hits / len(truth)
