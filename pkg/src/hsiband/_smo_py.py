"""Pure NumPy sequential-minimal-optimization kernels.

Both entry points mutate ``alpha`` and ``G`` in place and return
``(n_iter, converged)``.  The compiled backend in ``_smo.pyx`` performs
the same floating-point operations in the same order, so the two
implementations produce bit-identical iterates.

C-family problem (soft margin, hinge loss dual):
    min 1/2 a'Qa - e'a   s.t.  y'a = 0,  0 <= a <= C
with gradient G = Qa - e.

nu-family problem (scaled so the box is [0, 1]):
    min 1/2 a'Qa         s.t.  y'a = 0,  e'a = nu*n,  0 <= a <= 1
with gradient G = Qa.  Pairs are picked within one class so both
equality constraints are preserved.
"""

from __future__ import annotations

import numpy as np

TAU = 1e-12

BACKEND = "pure"


def run_csvm(Q, y, C, alpha, G, tol, max_iter):
    n = Q.shape[0]
    diag = np.ascontiguousarray(np.diagonal(Q))
    it = 0
    converged = False
    while it < max_iter:
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            yG = y * G
            neg = -yG
            up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
            low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
            if not up.any() or not low.any():
                converged = True
                break
            m_vec = np.where(up, neg, -np.inf)
            i = int(np.argmax(m_vec))
            m = m_vec[i]
            M = np.where(low, neg, np.inf).min()
            if m - M <= tol:
                converged = True
                break
            Qi = Q[i]
            b_vec = m + yG
            a_vec = (diag[i] + diag) - (2.0 * y[i]) * y * Qi
            a_vec = np.where(a_vec > 0.0, a_vec, TAU)
            gain = np.where(low & (b_vec > 0.0), (b_vec * b_vec) / a_vec, -np.inf)
            j = int(np.argmax(gain))
            if gain[j] == -np.inf:
                converged = True
                break
        yi = y[i]
        yj = y[j]
        Qj = Q[j]
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
        if step == cap_i:  # snap exactly onto the bound that was hit
            ai = C if yi > 0 else 0.0
        if step == cap_j:
            aj = 0.0 if yj > 0 else C
        dai = ai - alpha[i]
        daj = aj - alpha[j]
        alpha[i] = ai
        alpha[j] = aj
        G += dai * Qi + daj * Qj
        it += 1
    return it, converged


def run_nusvm(Q, y, alpha, G, tol, max_iter):
    n = Q.shape[0]
    diag = np.ascontiguousarray(np.diagonal(Q))
    it = 0
    converged = False
    while it < max_iter:
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            pos = y > 0
            upP = pos & (alpha < 1.0)
            lowP = pos & (alpha > 0.0)
            upN = ~pos & (alpha < 1.0)
            lowN = ~pos & (alpha > 0.0)
            negG = -G
            mP_vec = np.where(upP, negG, -np.inf)
            ip = int(np.argmax(mP_vec))
            Gmaxp = mP_vec[ip]
            mN_vec = np.where(upN, negG, -np.inf)
            iN = int(np.argmax(mN_vec))
            Gmaxn = mN_vec[iN]
            Gmaxp2 = np.where(lowP, G, -np.inf).max()
            Gmaxn2 = np.where(lowN, G, -np.inf).max()
            if max(Gmaxp + Gmaxp2, Gmaxn + Gmaxn2) <= tol:
                converged = True
                break
            bP = Gmaxp + G
            bN = Gmaxn + G
            aP = (diag[ip] + diag) - 2.0 * Q[ip]
            aP = np.where(aP > 0.0, aP, TAU)
            aN = (diag[iN] + diag) - 2.0 * Q[iN]
            aN = np.where(aN > 0.0, aN, TAU)
            gP = np.where(lowP & (bP > 0.0), (bP * bP) / aP, -np.inf)
            gN = np.where(lowN & (bN > 0.0), (bN * bN) / aN, -np.inf)
            gain = np.where(pos, gP, gN)
            j = int(np.argmax(gain))
            if gain[j] == -np.inf:
                converged = True
                break
        i = ip if y[j] > 0 else iN
        Qi = Q[i]
        Qj = Q[j]
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
        G += dai * Qi + daj * Qj
        it += 1
    return it, converged
