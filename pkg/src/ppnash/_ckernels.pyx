# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``ppnash._pykernels``."""

import numpy as np
from libc.math cimport sqrt


def mix_estimates(W, X):
    cdef const double[:, ::1] w = np.ascontiguousarray(W, dtype=np.float64)
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t N = x.shape[0], n = x.shape[1], i, j, k
    cdef double wij
    out = np.empty((N, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    for i in range(N):
        for k in range(n):
            o[i, k] = x[i, k]
        for j in range(N):
            wij = w[i, j]
            if wij != 0.0:
                for k in range(n):
                    o[i, k] += wij * x[j, k]
        for k in range(n):
            o[i, k] *= 0.5
    return out


def pair_products(DA, DB):
    cdef const double[:, ::1] a = np.ascontiguousarray(DA, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(DB, dtype=np.float64)
    cdef Py_ssize_t M = a.shape[0], d = a.shape[1], i, k
    cdef double s, sa, sb, ai, bi
    inner = np.empty(M)
    na2 = np.empty(M)
    nb2 = np.empty(M)
    cdef double[::1] vi = inner, va = na2, vb = nb2
    for i in range(M):
        s = 0.0
        sa = 0.0
        sb = 0.0
        for k in range(d):
            ai = a[i, k]
            bi = b[i, k]
            s += ai * bi
            sa += ai * ai
            sb += bi * bi
        vi[i] = s
        va[i] = sa
        vb[i] = sb
    return inner, na2, nb2


def interval_distance(lo, hi):
    lo_arr = np.asarray(lo, dtype=np.float64)
    # explicit indices: negative ones are unsafe under wraparound=False
    nd = lo_arr.ndim
    shape = lo_arr.shape[:nd - 1] if nd else ()
    d = lo_arr.shape[nd - 1] if nd else 1
    cdef const double[:, ::1] l = np.ascontiguousarray(lo_arr.reshape(-1, d))
    cdef const double[:, ::1] h = np.ascontiguousarray(
        np.asarray(hi, dtype=np.float64).reshape(-1, d))
    cdef Py_ssize_t M = l.shape[0], D = l.shape[1], i, k
    cdef double s, g
    out = np.empty(M)
    cdef double[::1] o = out
    for i in range(M):
        s = 0.0
        for k in range(D):
            g = 0.0
            if l[i, k] > 0.0:
                g = l[i, k]
            elif h[i, k] < 0.0:
                g = h[i, k]
            s += g * g
        o[i] = sqrt(s)
    if lo_arr.ndim <= 1:
        return float(out[0])
    return out.reshape(shape)
