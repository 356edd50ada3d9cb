# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Contracts mirror quatcs._pure."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, lgamma, INFINITY

cnp.import_array()

NAME = "compiled"
cdef enum:
    BLOCK = 64


cdef inline void qmul(const double* p, const double* q, double* out) noexcept nogil:
    out[0] = p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3]
    out[1] = p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2]
    out[2] = p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1]
    out[3] = p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]


def sandwich_series(L, X, R, log_scale, double tol, Py_ssize_t max_terms):
    cdef const double[:, ::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[:, ::1] Rv = np.ascontiguousarray(R, dtype=np.float64)
    cdef const double[::1] sv = np.ascontiguousarray(log_scale, dtype=np.float64)
    cdef Py_ssize_t m = Lv.shape[0]
    out = np.zeros((m, 4))
    terms = np.zeros(m, dtype=np.int64)
    cdef double[:, ::1] ov = out
    cdef long long[::1] tv = terms
    cdef double term[4]
    cdef double tmp[4]
    cdef double x, logx, bound
    cdef double logtol = log(tol) if tol > 0 else -INFINITY
    cdef Py_ssize_t r, n, c
    with nogil:
        for r in range(m):
            x = sqrt(Lv[r, 0] ** 2 + Lv[r, 1] ** 2 + Lv[r, 2] ** 2 + Lv[r, 3] ** 2) * \
                sqrt(Rv[r, 0] ** 2 + Rv[r, 1] ** 2 + Rv[r, 2] ** 2 + Rv[r, 3] ** 2)
            logx = log(x) if x > 0 else -INFINITY
            for c in range(4):
                term[c] = Xv[r, c]
            for n in range(max_terms):
                for c in range(4):
                    ov[r, c] += term[c]
                tv[r] = n + 1
                if tol > 0:
                    bound = sv[r] + (n + 1) * logx - lgamma(n + 2.0)
                    if (n + 1) > x and bound < logtol:
                        break
                qmul(&Lv[r, 0], term, tmp)
                qmul(tmp, &Rv[r, 0], term)
                for c in range(4):
                    term[c] /= (n + 1)
    return out, terms


def monomials(Q, Py_ssize_t n):
    cdef const double[:, ::1] Qv = np.ascontiguousarray(Q, dtype=np.float64)
    cdef Py_ssize_t P = Qv.shape[0]
    out = np.empty((P, n, 4))
    cdef double[:, :, ::1] ov = out
    cdef double cur[4]
    cdef double tmp[4]
    cdef Py_ssize_t p, k, c
    cdef double s
    with nogil:
        for p in range(P):
            cur[0] = 1.0
            cur[1] = 0.0
            cur[2] = 0.0
            cur[3] = 0.0
            for k in range(n):
                for c in range(4):
                    ov[p, k, c] = cur[c]
                qmul(cur, &Qv[p, 0], tmp)
                s = 1.0 / sqrt(k + 1.0)
                for c in range(4):
                    cur[c] = tmp[c] * s
    return out


cdef void block_outer(const double[:, :, ::1] V, const double[::1] w, Py_ssize_t start,
                      Py_ssize_t stop, double[:, :, ::1] acc) noexcept nogil:
    cdef Py_ssize_t N = V.shape[1]
    cdef Py_ssize_t p, a, b, c
    cdef double va[4]
    cdef double cb[4]
    cdef double tmp[4]
    for p in range(start, stop):
        for a in range(N):
            for c in range(4):
                va[c] = V[p, a, c] * w[p]
            for b in range(N):
                cb[0] = V[p, b, 0]
                cb[1] = -V[p, b, 1]
                cb[2] = -V[p, b, 2]
                cb[3] = -V[p, b, 3]
                qmul(va, cb, tmp)
                for c in range(4):
                    acc[a, b, c] += tmp[c]


def accumulate_outer(V, w):
    cdef const double[:, :, ::1] Vv = np.ascontiguousarray(V, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t P = Vv.shape[0]
    cdef Py_ssize_t N = Vv.shape[1]
    cdef Py_ssize_t nblocks = (P + BLOCK - 1) // BLOCK
    if nblocks == 0:
        return np.zeros((N, N, 4))
    parts = np.zeros((nblocks, N, N, 4))
    cdef double[:, :, :, ::1] pv = parts
    cdef Py_ssize_t bi, stop
    with nogil:
        for bi in range(nblocks):
            stop = (bi + 1) * BLOCK
            if stop > P:
                stop = P
            block_outer(Vv, wv, bi * BLOCK, stop, pv[bi])
    cdef Py_ssize_t count = nblocks, i, half
    # pairwise tree, same pairing as the python fallback
    while count > 1:
        half = count // 2
        for i in range(half):
            parts[i] = parts[2 * i] + parts[2 * i + 1]
        if count % 2:
            parts[half] = parts[count - 1]
            count = half + 1
        else:
            count = half
    return parts[0].copy()
