"""Compiled single-pass versions of the flat-incidence kernels.

Signatures mirror ``_numpy`` exactly; see that module for the layout and the
meaning of each kernel.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"

ctypedef cnp.int64_t i64
ctypedef cnp.float64_t f64


def edge_sums(const i64[::1] members, const i64[::1] eptr, const f64[::1] x):
    cdef Py_ssize_t m = eptr.shape[0] - 1
    if m < 0:
        m = 0
    out_arr = np.zeros(m)
    cdef f64[::1] out = out_arr
    cdef Py_ssize_t e, j
    cdef f64 acc
    for e in range(m):
        acc = 0.0
        for j in range(eptr[e], eptr[e + 1]):
            acc += x[members[j]]
        out[e] = acc
    return out_arr


def gradient_field(const i64[::1] members, const i64[::1] eptr,
                   const f64[::1] coef, const i64[::1] sizes,
                   const f64[::1] psi_tilde):
    cdef Py_ssize_t m = eptr.shape[0] - 1
    out_arr = np.zeros(members.shape[0])
    cdef f64[::1] out = out_arr
    cdef Py_ssize_t e, j
    cdef f64 T, delta, c
    for e in range(m):
        T = 0.0
        for j in range(eptr[e], eptr[e + 1]):
            T += psi_tilde[members[j]]
        delta = <f64> sizes[e]
        c = coef[e]
        for j in range(eptr[e], eptr[e + 1]):
            out[j] = c * (T - delta * psi_tilde[members[j]])
    return out_arr


def node_norms_sq(const i64[::1] members, const i64[::1] eptr,
                  const i64[::1] sizes, const f64[::1] g, Py_ssize_t n):
    cdef Py_ssize_t m = eptr.shape[0] - 1
    out_arr = np.zeros(n)
    cdef f64[::1] out = out_arr
    cdef Py_ssize_t e, j
    cdef f64 inv
    for e in range(m):
        inv = 1.0 / (<f64> sizes[e])
        for j in range(eptr[e], eptr[e + 1]):
            out[members[j]] += g[j] * g[j] * inv
    return out_arr


def collapse_div(const i64[::1] members, const i64[::1] eptr,
                 const f64[::1] coef, const i64[::1] sizes,
                 const f64[::1] phi, Py_ssize_t n):
    cdef Py_ssize_t m = eptr.shape[0] - 1
    out_arr = np.zeros(n)
    cdef f64[::1] out = out_arr
    cdef Py_ssize_t e, j
    cdef f64 S, mean, c
    for e in range(m):
        S = 0.0
        for j in range(eptr[e], eptr[e + 1]):
            S += phi[j]
        mean = S / (<f64> sizes[e])
        c = coef[e]
        for j in range(eptr[e], eptr[e + 1]):
            out[members[j]] += c * (phi[j] - mean)
    return out_arr


def apply_clique(const i64[::1] members, const i64[::1] eptr,
                 const f64[::1] coef, const f64[::1] x, Py_ssize_t n):
    cdef Py_ssize_t m = eptr.shape[0] - 1
    out_arr = np.zeros(n)
    cdef f64[::1] out = out_arr
    cdef Py_ssize_t e, j
    cdef f64 T, c
    for e in range(m):
        T = 0.0
        for j in range(eptr[e], eptr[e + 1]):
            T += x[members[j]]
        c = coef[e]
        for j in range(eptr[e], eptr[e + 1]):
            out[members[j]] += c * (T - x[members[j]])
    return out_arr


def apply_edge_mean(const i64[::1] members, const i64[::1] eptr,
                    const f64[::1] coef, const f64[::1] x, Py_ssize_t n):
    cdef Py_ssize_t m = eptr.shape[0] - 1
    out_arr = np.zeros(n)
    cdef f64[::1] out = out_arr
    cdef Py_ssize_t e, j
    cdef f64 T, v
    for e in range(m):
        T = 0.0
        for j in range(eptr[e], eptr[e + 1]):
            T += x[members[j]]
        v = coef[e] * T
        for j in range(eptr[e], eptr[e + 1]):
            out[members[j]] += v
    return out_arr


def plap_parts(const i64[::1] members, const i64[::1] eptr, const f64[::1] w,
               const f64[::1] eta, const f64[::1] psi_tilde, Py_ssize_t n):
    cdef Py_ssize_t m = eptr.shape[0] - 1
    dp_arr = np.zeros(n)
    s_arr = np.zeros(n)
    cdef f64[::1] dp = dp_arr
    cdef f64[::1] s = s_arr
    cdef Py_ssize_t e, j, u
    cdef f64 T, U, se, M, c, delta, ev, pv
    for e in range(m):
        T = 0.0
        U = 0.0
        se = 0.0
        for j in range(eptr[e], eptr[e + 1]):
            u = members[j]
            T += psi_tilde[u]
            U += eta[u] * psi_tilde[u]
            se += eta[u]
        delta = <f64> (eptr[e + 1] - eptr[e])
        M = se / delta
        c = w[e] / (delta - 1.0)
        for j in range(eptr[e], eptr[e + 1]):
            u = members[j]
            ev = eta[u]
            pv = psi_tilde[u]
            dp[u] += c * ((delta - 2.0) * ev + M)
            s[u] += c * ((ev - M) * (T - pv) + (U - ev * pv))
    return dp_arr, s_arr


def edge_ranges(const i64[::1] members, const i64[::1] eptr, const f64[::1] x):
    cdef Py_ssize_t m = eptr.shape[0] - 1
    if m < 0:
        m = 0
    out_arr = np.zeros(m)
    cdef f64[::1] out = out_arr
    cdef Py_ssize_t e, j
    cdef f64 lo, hi, v
    for e in range(m):
        lo = x[members[eptr[e]]]
        hi = lo
        for j in range(eptr[e] + 1, eptr[e + 1]):
            v = x[members[j]]
            if v < lo:
                lo = v
            if v > hi:
                hi = v
        out[e] = hi - lo
    return out_arr
