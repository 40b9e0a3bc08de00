"""Vectorized NumPy implementations of the flat-incidence kernels.

All kernels work on the flattened incidence layout of a hypergraph:

* ``members``: int64 array of node ids, edge by edge (length sum of edge sizes);
* ``eptr``: int64 array of length m+1, edge e occupies ``members[eptr[e]:eptr[e+1]]``.

Per-edge reductions use ``np.add.reduceat``; scatters back to nodes use
``np.bincount``.  The compiled twin in ``_accel.pyx`` exposes the same
signatures with single-pass loops.
"""

import numpy as np

BACKEND_NAME = "numpy"


def edge_sums(members, eptr, x):
    """T_e = sum of x over the members of each edge."""
    if eptr.shape[0] <= 1:
        return np.zeros(0)
    return np.add.reduceat(x[members], eptr[:-1])


def gradient_field(members, eptr, coef, sizes, psi_tilde):
    """Anchored gradient values, one per (edge, member) slot.

    g(e, v) = coef_e * (T_e - delta_e * psi_tilde[v]) with T_e the edge sum of
    psi_tilde and coef_e the caller-supplied per-edge scale.
    """
    pt = psi_tilde[members]
    T = edge_sums(members, eptr, psi_tilde)
    return np.repeat(coef, sizes) * (np.repeat(T, sizes) - np.repeat(sizes, sizes) * pt)


def node_norms_sq(members, eptr, sizes, g, n):
    """Per-node squared gradient norm: sum over incident slots of g^2/delta_e."""
    contrib = g * g / np.repeat(sizes, sizes)
    return np.bincount(members, weights=contrib, minlength=n)


def collapse_div(members, eptr, coef, sizes, phi, n):
    """Per-node divergence numerator: sum over incident edges of
    coef_e * (phi(e,v) - S_e/delta_e), with S_e the edge sum of phi."""
    if members.size == 0:
        return np.zeros(n)
    S = np.add.reduceat(phi, eptr[:-1])
    vals = np.repeat(coef, sizes) * (phi - np.repeat(S / sizes, sizes))
    return np.bincount(members, weights=vals, minlength=n)


def apply_clique(members, eptr, coef, x, n):
    """out[v] = sum over edges containing v of coef_e * (T_e - x[v])."""
    sizes = np.diff(eptr)
    xm = x[members]
    T = edge_sums(members, eptr, x)
    vals = np.repeat(coef, sizes) * (np.repeat(T, sizes) - xm)
    return np.bincount(members, weights=vals, minlength=n)


def apply_edge_mean(members, eptr, coef, x, n):
    """out[v] = sum over edges containing v of coef_e * T_e (self term kept)."""
    sizes = np.diff(eptr)
    T = edge_sums(members, eptr, x)
    vals = np.repeat(coef * T, sizes)
    return np.bincount(members, weights=vals, minlength=n)


def plap_parts(members, eptr, w, eta, psi_tilde, n):
    """Diagonal and off-diagonal accumulators of the coefficient operator.

    Returns (dp, s) with, per node v,
        dp[v] = sum_{e: v in e} c_e * ((delta_e - 2) * eta[v] + M_e)
        s[v]  = sum_{e: v in e} c_e * ((eta[v] - M_e) * (T_e - pt_v)
                                        + (U_e - eta[v] * pt_v))
    where c_e = w_e/(delta_e - 1), M_e the edge mean of eta, T_e/U_e the edge
    sums of psi_tilde and eta*psi_tilde, pt_v = psi_tilde[v].
    """
    sizes = np.diff(eptr)
    c = w / (sizes - 1.0)
    pt = psi_tilde[members]
    et = eta[members]
    T = edge_sums(members, eptr, psi_tilde)
    U = np.add.reduceat(et * pt, eptr[:-1]) if members.size else np.zeros(0)
    M = (np.add.reduceat(et, eptr[:-1]) / sizes) if members.size else np.zeros(0)
    cs = np.repeat(c, sizes)
    Ms = np.repeat(M, sizes)
    dp_vals = cs * ((np.repeat(sizes, sizes) - 2.0) * et + Ms)
    s_vals = cs * ((et - Ms) * (np.repeat(T, sizes) - pt) + (np.repeat(U, sizes) - et * pt))
    dp = np.bincount(members, weights=dp_vals, minlength=n)
    s = np.bincount(members, weights=s_vals, minlength=n)
    return dp, s


def edge_ranges(members, eptr, x):
    """Per-edge max minus min of x over the edge's members."""
    if eptr.shape[0] <= 1:
        return np.zeros(0)
    xm = x[members]
    return np.maximum.reduceat(xm, eptr[:-1]) - np.minimum.reduceat(xm, eptr[:-1])
