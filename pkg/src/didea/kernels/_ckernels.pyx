# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the numpy kernels in pykernels.py.

Semantics are defined there; this module only restates them as tight loops.
Keep the two in lockstep (the test suite asserts agreement to 1e-12).
"""

from libc.math cimport log

import numpy as np


cdef inline Py_ssize_t _clamp(long long i, Py_ssize_t n_bins) noexcept nogil:
    if i < 1:
        return 1
    if i > n_bins:
        return n_bins
    return <Py_ssize_t> i


def shift_profile_sum_log(bins_b, bins_y, log_weights, int shift_max):
    cdef const long long[::1] bb = np.ascontiguousarray(bins_b, dtype=np.int64)
    cdef const long long[::1] by = np.ascontiguousarray(bins_y, dtype=np.int64)
    cdef const double[::1] lw = np.ascontiguousarray(log_weights, dtype=np.float64)
    cdef Py_ssize_t n_bins = lw.shape[0] - 1
    cdef Py_ssize_t n = bb.shape[0]
    cdef int width = 2 * shift_max + 1
    out_arr = np.zeros(width, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, t
    cdef long long tau
    cdef double acc
    with nogil:
        for k in range(width):
            tau = k - shift_max
            acc = 0.0
            for t in range(n):
                acc += lw[_clamp(bb[t] + tau, n_bins)]
            for t in range(n):
                acc += lw[_clamp(by[t] + tau, n_bins)]
            out[k] = acc
    return out_arr


def shift_profile_split_charge(bins_b1, bins_y1, bins_b2, bins_y2,
                               weights, int shift_max):
    cdef const long long[::1] b1 = np.ascontiguousarray(bins_b1, dtype=np.int64)
    cdef const long long[::1] y1 = np.ascontiguousarray(bins_y1, dtype=np.int64)
    cdef const long long[::1] b2 = np.ascontiguousarray(bins_b2, dtype=np.int64)
    cdef const long long[::1] y2 = np.ascontiguousarray(bins_y2, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n_bins = w.shape[0] - 1
    cdef Py_ssize_t n = b1.shape[0]
    cdef int width = 2 * shift_max + 1
    out_arr = np.zeros(width, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, t
    cdef long long tau
    cdef double acc, frame
    with nogil:
        for k in range(width):
            tau = k - shift_max
            acc = 0.0
            for t in range(n):
                frame = 0.5 * w[_clamp(b1[t] + tau, n_bins)] * w[_clamp(y1[t] + tau, n_bins)] \
                      + 0.5 * w[_clamp(b2[t] + tau, n_bins)] * w[_clamp(y2[t] + tau, n_bins)]
                acc += log(frame)
            out[k] = acc
    return out_arr


def shift_profile_single_proton(bins_b, bins_y, weights, int shift_max):
    cdef const long long[::1] bb = np.ascontiguousarray(bins_b, dtype=np.int64)
    cdef const long long[::1] by = np.ascontiguousarray(bins_y, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n_bins = w.shape[0] - 1
    cdef Py_ssize_t n = bb.shape[0]
    cdef int width = 2 * shift_max + 1
    out_arr = np.zeros(width, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, t
    cdef long long tau
    cdef double acc
    with nogil:
        for k in range(width):
            tau = k - shift_max
            acc = 0.0
            for t in range(n):
                acc += log(0.5 * w[_clamp(bb[t] + tau, n_bins)]
                           + 0.5 * w[_clamp(by[t] + tau, n_bins)])
            out[k] = acc
    return out_arr


def shifted_theoretical_correlations(phi_bins, binned, int shift_range):
    cdef const long long[::1] phi = np.ascontiguousarray(phi_bins, dtype=np.int64)
    cdef const double[::1] s = np.ascontiguousarray(binned, dtype=np.float64)
    cdef Py_ssize_t n_bins = s.shape[0] - 1
    cdef Py_ssize_t n = phi.shape[0]
    cdef int width = 2 * shift_range + 1
    out_arr = np.zeros(width, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, t
    cdef long long tau, idx
    cdef double acc
    with nogil:
        for k in range(width):
            tau = k - shift_range
            acc = 0.0
            for t in range(n):
                idx = phi[t] + tau
                if 1 <= idx <= n_bins:
                    acc += s[idx]
            out[k] = acc
    return out_arr
