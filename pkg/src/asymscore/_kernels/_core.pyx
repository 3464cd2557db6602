# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampler inner loops.

Mirrors ``pyref.py`` exactly: same recursions, same consumption order
of the supplied random variates, same jitter rule.  See that module
for the algorithm documentation.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()


cdef Py_ssize_t _draw_index(double[::1] w, Py_ssize_t M, double u) noexcept:
    cdef double total = 0.0
    cdef double acc = 0.0
    cdef Py_ssize_t m
    for m in range(M):
        total += w[m]
    cdef double target = u * total
    for m in range(M - 1):
        acc += w[m]
        if acc >= target:
            return m
    return M - 1


def hamilton_ffbs(double[:, ::1] loglik, double[:, ::1] trans,
                  double[::1] init, double[::1] uniforms):
    cdef Py_ssize_t T = loglik.shape[0]
    cdef Py_ssize_t M = loglik.shape[1]
    filt_arr = np.empty((T, M))
    pred_arr = np.empty(M)
    work_arr = np.empty(M)
    states_arr = np.empty(T, dtype=np.int64)
    cdef double[:, ::1] filt = filt_arr
    cdef double[::1] pred = pred_arr
    cdef double[::1] work = work_arr
    cdef long long[::1] states = states_arr
    cdef Py_ssize_t t, m, l
    cdef double mx, s

    for m in range(M):
        pred[m] = init[m]
    for t in range(T):
        mx = loglik[t, 0]
        for m in range(1, M):
            if loglik[t, m] > mx:
                mx = loglik[t, m]
        s = 0.0
        for m in range(M):
            work[m] = pred[m] * exp(loglik[t, m] - mx)
            s += work[m]
        if s <= 0.0:
            s = 0.0
            for m in range(M):
                work[m] = pred[m]
                s += work[m]
        for m in range(M):
            filt[t, m] = work[m] / s
        if t < T - 1:
            for l in range(M):
                s = 0.0
                for m in range(M):
                    s += filt[t, m] * trans[m, l]
                pred[l] = s

    for m in range(M):
        work[m] = filt[T - 1, m]
    states[T - 1] = _draw_index(work, M, uniforms[T - 1])
    for t in range(T - 2, -1, -1):
        for m in range(M):
            work[m] = filt[t, m] * trans[m, states[t + 1]]
        states[t] = _draw_index(work, M, uniforms[t])
    return states_arr


cdef int _chol_lower(double[:, ::1] src, double[:, ::1] dst, Py_ssize_t k) noexcept:
    """Lower Cholesky of src into dst; returns 0 on success, 1 on failure."""
    cdef Py_ssize_t i, j, l
    cdef double s
    for i in range(k):
        for j in range(k):
            dst[i, j] = 0.0
    for j in range(k):
        s = src[j, j]
        for l in range(j):
            s -= dst[j, l] * dst[j, l]
        if s <= 0.0:
            return 1
        dst[j, j] = sqrt(s)
        for i in range(j + 1, k):
            s = src[i, j]
            for l in range(j):
                s -= dst[i, l] * dst[j, l]
            dst[i, j] = s / dst[j, j]
    return 0


cdef int _chol_psd(double[:, ::1] P, double[:, ::1] L, double[:, ::1] scratch,
                   Py_ssize_t k) except -1:
    """Cholesky with escalating diagonal jitter; returns jitter attempts used."""
    cdef Py_ssize_t i, j, attempt
    cdef double base, jitter
    if _chol_lower(P, L, k) == 0:
        return 0
    base = 0.0
    for i in range(k):
        base += P[i, i]
    base /= k
    if base < 1.0:
        base = 1.0
    jitter = 1e-10 * base
    for attempt in range(1, 11):
        for i in range(k):
            for j in range(k):
                scratch[i, j] = P[i, j]
            scratch[i, i] += jitter
        if _chol_lower(scratch, L, k) == 0:
            return attempt
        jitter *= 10.0
    raise np.linalg.LinAlgError(
        "conditional covariance is not positive definite even after jitter")


def kalman_ffbs(double[::1] y, double[:, ::1] X, double[:, ::1] A,
                double[:, ::1] omega, double sigma2,
                double[::1] m0, double[:, ::1] P0, double[:, ::1] normals):
    cdef Py_ssize_t T = X.shape[0]
    cdef Py_ssize_t k = X.shape[1]
    filt_m_arr = np.empty((T, k))
    filt_P_arr = np.empty((T, k, k))
    beta_arr = np.empty((T, k))
    cdef double[:, ::1] filt_m = filt_m_arr
    cdef double[:, :, ::1] filt_P = filt_P_arr
    cdef double[:, ::1] beta = beta_arr
    scratch = np.empty((7, k, k))
    cdef double[:, ::1] P_pred = scratch[0]
    cdef double[:, ::1] AP = scratch[1]
    cdef double[:, ::1] Pp = scratch[2]
    cdef double[:, ::1] L = scratch[3]
    cdef double[:, ::1] Z = scratch[4]
    cdef double[:, ::1] Pc = scratch[5]
    cdef double[:, ::1] chol_scr = scratch[6]
    vec = np.empty((5, k))
    cdef double[:, ::1] vecs = vec
    cdef double[:, ::1] m_pred_b = vec[4:]
    cdef Py_ssize_t t, i, j, l
    cdef double S, resid, s
    cdef int jitter_count = 0

    # row 0 of m_pred_b holds the predictive mean, row 1 is a work vector
    for i in range(k):
        m_pred_b[0, i] = m0[i]
        for j in range(k):
            P_pred[i, j] = P0[i, j]

    for t in range(T):
        # Px = P_pred @ x, S = x'Px + sigma2
        S = sigma2
        for i in range(k):
            s = 0.0
            for j in range(k):
                s += P_pred[i, j] * X[t, j]
            vecs[0, i] = s  # Px
        for i in range(k):
            S += X[t, i] * vecs[0, i]
        resid = y[t]
        for i in range(k):
            resid -= X[t, i] * m_pred_b[0, i]
        for i in range(k):
            filt_m[t, i] = m_pred_b[0, i] + vecs[0, i] / S * resid
        for i in range(k):
            for j in range(k):
                filt_P[t, i, j] = P_pred[i, j] - vecs[0, i] * vecs[0, j] / S
        for i in range(k):
            for j in range(i + 1, k):
                s = 0.5 * (filt_P[t, i, j] + filt_P[t, j, i])
                filt_P[t, i, j] = s
                filt_P[t, j, i] = s
        if t < T - 1:
            for i in range(k):
                s = 0.0
                for j in range(k):
                    s += A[i, j] * filt_m[t, j]
                m_pred_b[0, i] = s
            for i in range(k):
                for j in range(k):
                    s = 0.0
                    for l in range(k):
                        s += A[i, l] * filt_P[t, l, j]
                    AP[i, j] = s
            for i in range(k):
                for j in range(k):
                    s = omega[i, j]
                    for l in range(k):
                        s += AP[i, l] * A[j, l]
                    P_pred[i, j] = s
            for i in range(k):
                for j in range(i + 1, k):
                    s = 0.5 * (P_pred[i, j] + P_pred[j, i])
                    P_pred[i, j] = s
                    P_pred[j, i] = s

    # backward pass
    for i in range(k):
        for j in range(k):
            Pc[i, j] = filt_P[T - 1, i, j]
    jitter_count += _chol_psd(Pc, L, chol_scr, k)
    for i in range(k):
        s = filt_m[T - 1, i]
        for j in range(i + 1):
            s += L[i, j] * normals[T - 1, j]
        beta[T - 1, i] = s

    for t in range(T - 2, -1, -1):
        for i in range(k):
            for j in range(k):
                s = 0.0
                for l in range(k):
                    s += A[i, l] * filt_P[t, l, j]
                AP[i, j] = s
        for i in range(k):
            for j in range(k):
                s = omega[i, j]
                for l in range(k):
                    s += AP[i, l] * A[j, l]
                Pp[i, j] = s
        for i in range(k):
            for j in range(i + 1, k):
                s = 0.5 * (Pp[i, j] + Pp[j, i])
                Pp[i, j] = s
                Pp[j, i] = s
        # Z = Pp^{-1} AP via Cholesky solves, column by column
        jitter_count += _chol_psd(Pp, L, chol_scr, k)
        for j in range(k):
            for i in range(k):
                s = AP[i, j]
                for l in range(i):
                    s -= L[i, l] * vecs[1, l]
                vecs[1, i] = s / L[i, i]
            for i in range(k - 1, -1, -1):
                s = vecs[1, i]
                for l in range(i + 1, k):
                    s -= L[l, i] * Z[l, j]
                Z[i, j] = s / L[i, i]
        # m_cond = m_t + Z' (beta_{t+1} - A m_t); P_cond = P_t - Z' AP
        for i in range(k):
            s = beta[t + 1, i]
            for j in range(k):
                s -= A[i, j] * filt_m[t, j]
            vecs[2, i] = s
        for i in range(k):
            s = filt_m[t, i]
            for j in range(k):
                s += Z[j, i] * vecs[2, j]
            vecs[3, i] = s
        for i in range(k):
            for j in range(k):
                s = filt_P[t, i, j]
                for l in range(k):
                    s -= Z[l, i] * AP[l, j]
                Pc[i, j] = s
        for i in range(k):
            for j in range(i + 1, k):
                s = 0.5 * (Pc[i, j] + Pc[j, i])
                Pc[i, j] = s
                Pc[j, i] = s
        jitter_count += _chol_psd(Pc, L, chol_scr, k)
        for i in range(k):
            s = vecs[3, i]
            for j in range(i + 1):
                s += L[i, j] * normals[t, j]
            beta[t, i] = s
    return beta_arr, jitter_count
