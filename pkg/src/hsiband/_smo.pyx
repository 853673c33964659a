# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled sequential-minimal-optimization kernels.

Mirrors ``_smo_py`` operation-for-operation (same expressions, same
order, FP contraction disabled at compile time) so both backends yield
bit-identical iterates.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double TAU = 1e-12
cdef double INF = float("inf")

BACKEND = "cython"


def run_csvm(double[:, ::1] Q, double[::1] y, double C,
             double[::1] alpha, double[::1] G, double tol, long max_iter):
    cdef Py_ssize_t n = Q.shape[0]
    cdef double[::1] diag = np.ascontiguousarray(np.diagonal(np.asarray(Q)))
    cdef long it = 0
    cdef bint converged = 0
    cdef Py_ssize_t t, i, j
    cdef bint up_t, low_t, any_up, any_low
    cdef double v, m, M, b, a, g, best, two_yi, diag_i
    cdef double yi, yj, quad, negj, delta, cap_i, cap_j, step, ai, aj, dai, daj

    while it < max_iter:
        m = -INF
        i = -1
        M = INF
        any_up = 0
        any_low = 0
        for t in range(n):
            v = -(y[t] * G[t])
            if (y[t] > 0 and alpha[t] < C) or (y[t] < 0 and alpha[t] > 0):
                any_up = 1
                if v > m:
                    m = v
                    i = t
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                any_low = 1
                if v < M:
                    M = v
        if not any_up or not any_low:
            converged = 1
            break
        if m - M <= tol:
            converged = 1
            break
        two_yi = 2.0 * y[i]
        diag_i = diag[i]
        best = -INF
        j = -1
        for t in range(n):
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                b = m + (y[t] * G[t])
                if b > 0.0:
                    a = (diag_i + diag[t]) - (two_yi * y[t]) * Q[i, t]
                    if a <= 0.0:
                        a = TAU
                    g = (b * b) / a
                    if g > best:
                        best = g
                        j = t
        if j < 0:
            converged = 1
            break
        yi = y[i]
        yj = y[j]
        quad = (diag[i] + diag[j]) - (2.0 * yi) * yj * Q[i, j]
        if quad <= 0.0:
            quad = TAU
        negj = -(yj * G[j])
        delta = (m - negj) / quad
        cap_i = (C - alpha[i]) if yi > 0 else alpha[i]
        cap_j = alpha[j] if yj > 0 else (C - alpha[j])
        step = delta
        if step > cap_i:
            step = cap_i
        if step > cap_j:
            step = cap_j
        ai = alpha[i] + yi * step
        aj = alpha[j] - yj * step
        if step == cap_i:
            ai = C if yi > 0 else 0.0
        if step == cap_j:
            aj = 0.0 if yj > 0 else C
        dai = ai - alpha[i]
        daj = aj - alpha[j]
        alpha[i] = ai
        alpha[j] = aj
        for t in range(n):
            G[t] = G[t] + (dai * Q[i, t] + daj * Q[j, t])
        it += 1
    return it, bool(converged)


def run_nusvm(double[:, ::1] Q, double[::1] y,
              double[::1] alpha, double[::1] G, double tol, long max_iter):
    cdef Py_ssize_t n = Q.shape[0]
    cdef double[::1] diag = np.ascontiguousarray(np.diagonal(np.asarray(Q)))
    cdef long it = 0
    cdef bint converged = 0
    cdef Py_ssize_t t, ip, iN, i, j
    cdef double negG, Gmaxp, Gmaxn, Gmaxp2, Gmaxn2, stopP, stopN, crit
    cdef double b, a, g, best, diag_ip, diag_in
    cdef double quad, delta, cap_i, cap_j, step, ai, aj, dai, daj

    while it < max_iter:
        Gmaxp = -INF
        Gmaxn = -INF
        ip = -1
        iN = -1
        Gmaxp2 = -INF
        Gmaxn2 = -INF
        for t in range(n):
            negG = -G[t]
            if y[t] > 0:
                if alpha[t] < 1.0 and negG > Gmaxp:
                    Gmaxp = negG
                    ip = t
                if alpha[t] > 0.0 and G[t] > Gmaxp2:
                    Gmaxp2 = G[t]
            else:
                if alpha[t] < 1.0 and negG > Gmaxn:
                    Gmaxn = negG
                    iN = t
                if alpha[t] > 0.0 and G[t] > Gmaxn2:
                    Gmaxn2 = G[t]
        stopP = Gmaxp + Gmaxp2
        stopN = Gmaxn + Gmaxn2
        crit = stopP if stopP > stopN else stopN
        if crit <= tol:
            converged = 1
            break
        diag_ip = diag[ip] if ip >= 0 else 0.0
        diag_in = diag[iN] if iN >= 0 else 0.0
        best = -INF
        j = -1
        for t in range(n):
            if alpha[t] > 0.0:
                if y[t] > 0:
                    b = Gmaxp + G[t]
                    if b > 0.0:
                        a = (diag_ip + diag[t]) - 2.0 * Q[ip, t]
                        if a <= 0.0:
                            a = TAU
                        g = (b * b) / a
                        if g > best:
                            best = g
                            j = t
                else:
                    b = Gmaxn + G[t]
                    if b > 0.0:
                        a = (diag_in + diag[t]) - 2.0 * Q[iN, t]
                        if a <= 0.0:
                            a = TAU
                        g = (b * b) / a
                        if g > best:
                            best = g
                            j = t
        if j < 0:
            converged = 1
            break
        i = ip if y[j] > 0 else iN
        quad = (diag[i] + diag[j]) - 2.0 * Q[i, j]
        if quad <= 0.0:
            quad = TAU
        delta = (G[j] - G[i]) / quad
        cap_i = 1.0 - alpha[i]
        cap_j = alpha[j]
        step = delta
        if step > cap_i:
            step = cap_i
        if step > cap_j:
            step = cap_j
        ai = alpha[i] + step
        aj = alpha[j] - step
        if step == cap_i:
            ai = 1.0
        if step == cap_j:
            aj = 0.0
        dai = ai - alpha[i]
        daj = aj - alpha[j]
        alpha[i] = ai
        alpha[j] = aj
        for t in range(n):
            G[t] = G[t] + (dai * Q[i, t] + daj * Q[j, t])
        it += 1
    return it, bool(converged)
