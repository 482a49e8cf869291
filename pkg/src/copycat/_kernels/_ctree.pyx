# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled split-scan / traversal kernels.

Bit-identical twin of ``_pytree.py``: same operand ordering in every
floating-point expression, same first-strict-improvement tie handling.
Any change here must be mirrored there (the parity tests compare whole
grown trees across backends).
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t


def best_split_gini(const double[:, ::1] X, const int64_t[::1] y,
                    const int32_t[:, ::1] sorted_rows, int n_classes):
    """See _pytree.best_split_gini; returns (feature, threshold, gain, found)."""
    cdef Py_ssize_t d = sorted_rows.shape[0]
    cdef Py_ssize_t n = sorted_rows.shape[1]
    cdef Py_ssize_t f, i, k
    cdef int32_t row
    cdef double v_lo, v_hi, n_left, n_right
    cdef double proxy_left, proxy_right, gain, tk
    cdef double n_f = <double> n
    cdef double parent = 0.0
    cdef double best_gain = -np.inf
    cdef double best_threshold = 0.0
    cdef Py_ssize_t best_feature = -1
    cdef bint found = False

    counts_total_arr = np.zeros(n_classes, dtype=np.int64)
    counts_left_arr = np.zeros(n_classes, dtype=np.int64)
    cdef int64_t[::1] counts_total = counts_total_arr
    cdef int64_t[::1] counts_left = counts_left_arr

    for i in range(n):
        counts_total[y[sorted_rows[0, i]]] += 1
    for k in range(n_classes):
        tk = <double> counts_total[k]
        parent = parent + tk * tk / n_f

    for f in range(d):
        for k in range(n_classes):
            counts_left[k] = 0
        for i in range(n - 1):
            row = sorted_rows[f, i]
            counts_left[y[row]] += 1
            v_lo = X[row, f]
            v_hi = X[sorted_rows[f, i + 1], f]
            if v_lo == v_hi:
                continue
            found = True
            n_left = <double> (i + 1)
            n_right = n_f - n_left
            proxy_left = 0.0
            proxy_right = 0.0
            for k in range(n_classes):
                tk = <double> counts_left[k]
                proxy_left = proxy_left + tk * tk / n_left
                tk = <double> (counts_total[k] - counts_left[k])
                proxy_right = proxy_right + tk * tk / n_right
            gain = (proxy_left + proxy_right) - parent
            if gain > best_gain:
                best_gain = gain
                best_feature = f
                best_threshold = (v_lo + v_hi) * 0.5
    return best_feature, best_threshold, best_gain, found


def best_split_mse(const double[:, ::1] X, const double[::1] targets,
                   const int32_t[:, ::1] sorted_rows, double total_sum):
    """See _pytree.best_split_mse; returns (feature, threshold, gain, found)."""
    cdef Py_ssize_t d = sorted_rows.shape[0]
    cdef Py_ssize_t n = sorted_rows.shape[1]
    cdef Py_ssize_t f, i
    cdef int32_t row
    cdef double v_lo, v_hi, n_left, n_right
    cdef double sum_left, sum_right, proxy_left, proxy_right, gain
    cdef double n_f = <double> n
    cdef double parent = total_sum * total_sum / n_f
    cdef double best_gain = -np.inf
    cdef double best_threshold = 0.0
    cdef Py_ssize_t best_feature = -1
    cdef bint found = False

    for f in range(d):
        sum_left = 0.0
        for i in range(n - 1):
            row = sorted_rows[f, i]
            sum_left = sum_left + targets[row]
            v_lo = X[row, f]
            v_hi = X[sorted_rows[f, i + 1], f]
            if v_lo == v_hi:
                continue
            found = True
            n_left = <double> (i + 1)
            n_right = n_f - n_left
            sum_right = total_sum - sum_left
            proxy_left = sum_left * sum_left / n_left
            proxy_right = sum_right * sum_right / n_right
            gain = (proxy_left + proxy_right) - parent
            if gain > best_gain:
                best_gain = gain
                best_feature = f
                best_threshold = (v_lo + v_hi) * 0.5
    return best_feature, best_threshold, best_gain, found


def traverse(const int32_t[::1] feature, const double[::1] threshold,
             const int32_t[::1] left, const int32_t[::1] right,
             const double[:, ::1] X, int root):
    """See _pytree.traverse; returns leaf node ids (int32)."""
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t i
    cdef int32_t node
    out_arr = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] out = out_arr
    for i in range(n):
        node = <int32_t> root
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out_arr
