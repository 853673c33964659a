"""Benchmark: compiled SMO backend vs the pure-NumPy fallback.

Runs identical C-SVM and nu-SVM duals through both backends, checks the
iterates agree bit for bit, and reports wall-clock speedups.

    python3 benchmarks/smo_benchmark.py [--sizes 100,300,600] [--repeats 3]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from hsiband import _smo_py
from hsiband.kernels import KernelSpec, gram
from hsiband.smo import nu_upper_bound

try:
    from hsiband import _smo as _smo_ext
except ImportError:
    _smo_ext = None


def make_problem(rng: np.random.Generator, n: int, kind: str):
    X = rng.normal(size=(n, 8))
    y = np.ones(n)
    y[rng.permutation(n)[: n // 2]] = -1.0
    spec = KernelSpec(kind, gamma=0.5, coef0=0.1, degree=2)
    Q = np.ascontiguousarray((y[:, None] * y[None, :]) * gram(spec, X))
    return Q, y


def run_csvm(backend, Q, y, C):
    n = Q.shape[0]
    alpha = np.zeros(n)
    grad = np.full(n, -1.0)
    backend.run_csvm(Q, y, C, alpha, grad, 1e-8, 10_000 * n)
    return alpha


def run_nusvm(backend, Q, y, nu):
    n = Q.shape[0]
    alpha = np.zeros(n)
    for sign in (1.0, -1.0):
        remaining = nu * n / 2.0
        for t in np.flatnonzero(y == sign):
            alpha[t] = min(1.0, remaining)
            remaining -= alpha[t]
    grad = Q @ alpha
    backend.run_nusvm(Q, y, alpha, grad, 1e-8, 10_000 * n)
    return alpha


def time_case(fn, backend, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(backend, *args)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="100,300,600")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)
    if _smo_ext is None:
        print("compiled backend (hsiband._smo) is not built; nothing to compare")
        return 1
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)
    print(f"{'case':<22} {'n':>5} {'compiled':>10} {'pure':>10} {'speedup':>8}")
    for n in sizes:
        for kind in ("linear", "rbf"):
            Q, y = make_problem(rng, n, kind)
            for label, fn, extra in (
                ("c-svm", run_csvm, 1.0),
                ("nu-svm", run_nusvm, 0.5 * nu_upper_bound(y)),
            ):
                fast = fn(_smo_ext, Q, y, extra)
                slow = fn(_smo_py, Q, y, extra)
                if not np.array_equal(fast, slow):
                    print(f"MISMATCH: {kind} {label} n={n} backends disagree")
                    return 1
                t_ext = time_case(fn, _smo_ext, (Q, y, extra), args.repeats)
                t_py = time_case(fn, _smo_py, (Q, y, extra), args.repeats)
                print(
                    f"{kind + ' ' + label:<22} {n:>5} {t_ext * 1e3:>8.1f}ms "
                    f"{t_py * 1e3:>8.1f}ms {t_py / t_ext:>7.1f}x"
                )
    print("backends agreed bit-for-bit on every case")
    return 0


if __name__ == "__main__":
    sys.exit(main())
