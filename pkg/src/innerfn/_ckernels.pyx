# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled probe kernels.  Same contract as ``innerfn._pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log1p, sqrt, INFINITY

cnp.import_array()


def point_sums(double[::1] pc, double[::1] ps, double[::1] pd,
               double[::1] zc, double[::1] zs, double[::1] zd, double[::1] zm,
               double[::1] ac, double[::1] as_, double[::1] am):
    cdef Py_ssize_t n = pc.shape[0]
    cdef Py_ssize_t nz = zc.shape[0]
    cdef Py_ssize_t na = ac.shape[0]
    neglog_arr = np.zeros(n, dtype=np.float64)
    poisson_arr = np.zeros(n, dtype=np.float64)
    minrho_arr = np.full(n, INFINITY, dtype=np.float64)
    cdef double[::1] neglog = neglog_arr
    cdef double[::1] poisson = poisson_arr
    cdef double[::1] minrho = minrho_arr
    cdef Py_ssize_t i, j
    cdef double d, one_m_z2, r, acc, pacc
    cdef double da, dc, dsn, chord2, denom, x, xmax, one_m_a2, cross
    with nogil:
        for i in range(n):
            d = pd[i]
            one_m_z2 = d * (2.0 - d)
            r = 1.0 - d
            acc = 0.0
            xmax = -1.0
            for j in range(nz):
                da = zd[j]
                dc = pc[i] - zc[j]
                dsn = ps[i] - zs[j]
                chord2 = dc * dc + dsn * dsn
                cross = da + d - da * d
                denom = cross * cross + (1.0 - da) * r * chord2
                one_m_a2 = da * (2.0 - da)
                if denom > 0.0:
                    x = one_m_z2 * one_m_a2 / denom
                else:
                    x = 1.0
                if x >= 1.0:
                    x = 1.0
                    acc = INFINITY
                else:
                    acc = acc - 0.5 * zm[j] * log1p(-x)
                if x > xmax:
                    xmax = x
            neglog[i] = acc
            if nz > 0:
                minrho[i] = sqrt(1.0 - xmax)
            pacc = 0.0
            for j in range(na):
                dc = pc[i] - ac[j]
                dsn = ps[i] - as_[j]
                chord2 = dc * dc + dsn * dsn
                pacc = pacc + am[j] * one_m_z2 / (d * d + r * chord2)
            poisson[i] = pacc
    return neglog_arr, poisson_arr, minrho_arr


def bucket_min(double[::1] values, double[::1] keys, double[::1] thresholds):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t nt = thresholds.shape[0]
    best_arr = np.full(nt + 1, INFINITY, dtype=np.float64)
    idx_arr = np.full(nt + 1, -1, dtype=np.int64)
    cdef double[::1] best = best_arr
    cdef cnp.int64_t[::1] idx = idx_arr
    cdef Py_ssize_t i, lo, hi, mid
    cdef double k
    with nogil:
        for i in range(n):
            k = keys[i]
            lo = 0
            hi = nt
            while lo < hi:
                mid = (lo + hi) // 2
                if thresholds[mid] <= k:
                    lo = mid + 1
                else:
                    hi = mid
            if values[i] < best[lo]:
                best[lo] = values[i]
                idx[lo] = i
    return best_arr, idx_arr
