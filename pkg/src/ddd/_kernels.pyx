# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot accumulation loops.

Loop structure mirrors ``_kernels_py`` exactly: ascending record order,
ascending coordinate order, sequential accumulation.  Plain IEEE double
arithmetic plus libm sqrt/exp keeps the two backends bit-identical.
"""

from libc.math cimport exp, sqrt

import numpy as np

BACKEND = "compiled"


def class_centroids(values, class_idx, class_count):
    """Per-class arithmetic means; see _kernels_py.class_centroids."""
    cdef double[:, ::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef long[::1] idx = np.ascontiguousarray(class_idx, dtype=np.int64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t d = v.shape[1]
    cdef Py_ssize_t cc = class_count
    acc_arr = np.zeros((cc, d), dtype=np.float64)
    counts_arr = np.zeros(cc, dtype=np.int64)
    cdef double[:, ::1] acc = acc_arr
    cdef long[::1] counts = counts_arr
    cdef Py_ssize_t l, k, c
    for l in range(n):
        c = idx[l]
        for k in range(d):
            acc[c, k] += v[l, k]
        counts[c] += 1
    for c in range(cc):
        if counts[c] > 0:
            for k in range(d):
                acc[c, k] = acc[c, k] / counts[c]
    return acc_arr, counts_arr


def mean_distances(values, class_idx, class_count, centroids):
    """Mean L2 distances; see _kernels_py.mean_distances."""
    cdef double[:, ::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef long[::1] idx = np.ascontiguousarray(class_idx, dtype=np.int64)
    cdef double[:, ::1] cents = np.ascontiguousarray(centroids, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t d = v.shape[1]
    cdef Py_ssize_t m = cents.shape[0]
    cdef Py_ssize_t cc = class_count
    acc_arr = np.zeros((cc, m), dtype=np.float64)
    counts_arr = np.zeros(cc, dtype=np.int64)
    cdef double[:, ::1] acc = acc_arr
    cdef long[::1] counts = counts_arr
    cdef Py_ssize_t l, i, j, k
    cdef double s, diff
    for l in range(n):
        i = idx[l]
        for j in range(m):
            s = 0.0
            for k in range(d):
                diff = v[l, k] - cents[j, k]
                s += diff * diff
            acc[i, j] += sqrt(s)
        counts[i] += 1
    for i in range(cc):
        for j in range(m):
            acc[i, j] = acc[i, j] / counts[i]
    return acc_arr


def softmax_columns(dist, alpha):
    """Column-wise stabilized softmax of -alpha*dist; see _kernels_py."""
    cdef double[:, ::1] ld = np.ascontiguousarray(dist, dtype=np.float64)
    cdef double a = alpha
    cdef Py_ssize_t n = ld.shape[0]
    cdef Py_ssize_t m = ld.shape[1]
    out_arr = np.zeros((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double lo, total, e
    for j in range(m):
        lo = ld[0, j]
        for i in range(1, n):
            if ld[i, j] < lo:
                lo = ld[i, j]
        total = 0.0
        for i in range(n):
            e = exp(-a * (ld[i, j] - lo))
            out[i, j] = e
            total += e
        for i in range(n):
            out[i, j] = out[i, j] / total
    return out_arr
