"""Hypergraph p-Laplacian operators and baseline comparison operators.

The central object is the coefficient form of the p-Laplacian: for a node
function ``psi`` with gradient-norm powers ``eta(v) = ||grad psi(v)||^(p-2)``
(floored before negative exponents) and per-edge means
``M_e = mean of eta over e``,

    w_p(u, v) = sum over edges containing u and v of
                w(e)/(delta_e - 1) * (eta(u) + eta(v) - M_e)
    d_p(v)    = sum over edges containing v of
                w(e)/(delta_e - 1) * ((delta_e - 2) * eta(v) + M_e)

and ``(Lap_p psi)(v) = (d_p(v) pt(v) - sum_{u != v} w_p(u,v) pt(u)) / sqrt(d(v))``
where ``pt = psi / sqrt(d)``.  The pair sum collapses edge-by-edge, so the
matrix-free apply costs O(total membership) and never materializes pairs.

Baselines: the edge-mean (lazy walk) Laplacian, the clique-sum Laplacian and
its p-generalized quadratic form, the per-edge range regularizer, the random
walk view, and three reference operators for plain graphs used as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels as K
from .calculus import EPS_NORM, gradient_profile
from .errors import AsymmetricInput, InvalidP, LengthMismatch, TooLarge
from .hypergraph import Hypergraph, as_node_function

__all__ = [
    "PLaplacianCoefficients",
    "LinearOperatorView",
    "xi_p",
    "p_coefficients",
    "p_laplacian_parts",
    "apply_p_laplacian",
    "laplacian_p2",
    "zhou_laplacian",
    "rodriguez_laplacian",
    "rodriguez_p_quadratic",
    "hein_regularizer",
    "random_walk",
    "graph_comparison_operators",
]

N_DENSE = 512


def xi_p(x, p: float):
    """Signed power |x|^(p-1) * sign(x), elementwise."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.abs(x) ** (p - 1.0)


def _eta_from_norms(norms: np.ndarray, p: float) -> np.ndarray:
    """Gradient-norm powers ||grad psi(v)||^(p-2) with the small-norm floor."""
    if p == 2:
        return np.ones_like(norms)
    if p < 2:
        return np.maximum(norms, EPS_NORM) ** (p - 2.0)
    return norms ** (p - 2.0)


class LinearOperatorView:
    """A linear node-space operator exposed through its apply contract.

    The dense matrix is materialized lazily (by applying to basis vectors)
    and only for dimensions up to ``n_dense``.
    """

    def __init__(self, n: int, apply_fn, symmetric: bool = True, n_dense: int = N_DENSE):
        self.n = int(n)
        self._apply = apply_fn
        self.symmetric = bool(symmetric)
        self.n_dense = int(n_dense)
        self._dense = None

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise LengthMismatch(f"operator of dimension {self.n} applied to {x.shape}")
        return self._apply(x)

    __call__ = apply

    def dense(self) -> np.ndarray:
        if self._dense is None:
            if self.n > self.n_dense:
                raise TooLarge(
                    f"dense materialization capped at {self.n_dense}; dimension is {self.n}"
                )
            cols = np.empty((self.n, self.n))
            basis = np.zeros(self.n)
            for i in range(self.n):
                basis[i] = 1.0
                cols[:, i] = self._apply(basis)
                basis[i] = 0.0
            self._dense = cols
        return self._dense

    def to_scipy(self):
        """View as a scipy.sparse.linalg.LinearOperator."""
        from scipy.sparse.linalg import LinearOperator

        return LinearOperator((self.n, self.n), matvec=self.apply,
                              rmatvec=self.apply if self.symmetric else None,
                              dtype=np.float64)


@dataclass(frozen=True)
class PLaplacianCoefficients:
    """Materialized pair weights w_p and node coefficients d_p for one psi.

    ``pair_weights`` maps ordered pairs (u, v) with u < v; lookups through
    :meth:`weight` are symmetric.  Kept for inspection and small-instance
    tests; large-scale paths use the matrix-free kernels instead.
    """

    pair_weights: dict
    node_coeffs: np.ndarray
    p: float
    psi: np.ndarray

    def weight(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        key = (u, v) if u < v else (v, u)
        return self.pair_weights.get(key, 0.0)

    def dense_pair_matrix(self, n: int) -> np.ndarray:
        W = np.zeros((n, n))
        for (u, v), w in self.pair_weights.items():
            W[u, v] = W[v, u] = w
        return W


def _profile_and_eta(H: Hypergraph, psi, p: float):
    if p < 1:
        raise InvalidP(f"p must be >= 1, got {p}")
    psi = as_node_function(H, psi)
    prof = gradient_profile(H, psi)
    return psi, prof, _eta_from_norms(prof.node_norms, p)


def p_coefficients(H: Hypergraph, psi, p: float) -> PLaplacianCoefficients:
    """Pair weights w_p(u,v) and node coefficients d_p(v) at the given psi."""
    psi, _, eta = _profile_and_eta(H, psi, p)
    pair_weights: dict = {}
    for e in range(H.num_edges):
        lo, hi = H.edge_ptr[e], H.edge_ptr[e + 1]
        mem = H.members[lo:hi]
        c = H.weights[e] / (H.edge_sizes[e] - 1.0)
        M = float(np.mean(eta[mem]))
        for u, v in combinations(mem.tolist(), 2):
            w = c * (eta[u] + eta[v] - M)
            key = (u, v)
            pair_weights[key] = pair_weights.get(key, 0.0) + w
    pt = psi / H.sqrt_degrees
    dp, _ = K.plap_parts(H.members, H.edge_ptr, H.weights, eta, pt, H.num_nodes)
    dp.setflags(write=False)
    return PLaplacianCoefficients(pair_weights, dp, float(p), psi.copy())


def p_laplacian_parts(H: Hypergraph, psi, p: float):
    """Diagonal/off-diagonal split of the p-Laplacian action at psi.

    Returns ``(dp, s, pt)`` with ``pt = psi/sqrt(d)``, ``dp`` the node
    coefficients, and ``s(v) = sum_{u != v} w_p(u,v) pt(u)``, so that
    ``Lap_p psi = (dp * pt - s) / sqrt(d)``.  Shared by the apply path and
    the relaxation sweep.
    """
    psi, _, eta = _profile_and_eta(H, psi, p)
    pt = psi / H.sqrt_degrees
    dp, s = K.plap_parts(H.members, H.edge_ptr, H.weights, eta, pt, H.num_nodes)
    return dp, s, pt


def apply_p_laplacian(H: Hypergraph, psi, p: float) -> np.ndarray:
    """Matrix-free p-Laplacian of psi, O(total membership)."""
    dp, s, pt = p_laplacian_parts(H, psi, p)
    return (dp * pt - s) / H.sqrt_degrees


def _clique_coef(H: Hypergraph) -> np.ndarray:
    return H.weights / (H.edge_sizes - 1.0)


def laplacian_p2(H: Hypergraph) -> LinearOperatorView:
    """The p=2 Laplacian: psi - D^{-1/2} W D^{-1/2} psi, matrix-free.

    W is the collapsed pair-weight operator
    (W x)(u) = sum over edges containing u of w(e)/(delta_e - 1) *
    (sum of x over e - x(u)).
    """
    coef = _clique_coef(H)

    def apply(x):
        pt = x / H.sqrt_degrees
        wx = K.apply_clique(H.members, H.edge_ptr, coef, pt, H.num_nodes)
        return x - wx / H.sqrt_degrees

    return LinearOperatorView(H.num_nodes, apply, symmetric=True)


def zhou_laplacian(H: Hypergraph) -> LinearOperatorView:
    """Edge-mean (lazy-walk) Laplacian: I minus the normalized edge-mean core.

    The core keeps the self term: (C x)(v) = sum over edges containing v of
    (w(e)/delta_e) * (sum of x over e).
    """
    coef = H.weights / H.edge_sizes.astype(np.float64)

    def apply(x):
        pt = x / H.sqrt_degrees
        cx = K.apply_edge_mean(H.members, H.edge_ptr, coef, pt, H.num_nodes)
        return x - cx / H.sqrt_degrees

    return LinearOperatorView(H.num_nodes, apply, symmetric=True)


def _rodriguez_degrees(H: Hypergraph) -> np.ndarray:
    """Clique-sum degrees d_R(v) = sum over edges containing v of w(e)(delta_e-1)."""
    vals = np.repeat(H.weights * (H.edge_sizes - 1.0), H.edge_sizes)
    return np.bincount(H.members, weights=vals, minlength=H.num_nodes)


def rodriguez_laplacian(H: Hypergraph) -> LinearOperatorView:
    """Clique-sum Laplacian: I - D_R^{-1/2} W_R D_R^{-1/2}.

    W_R has zero diagonal and off-diagonal entries w_R(u,v) = sum of w(e)
    over edges containing both; d_R(v) is its row sum.
    """
    dR = _rodriguez_degrees(H)
    sqrt_dR = np.sqrt(dR)

    def apply(x):
        pt = x / sqrt_dR
        wx = K.apply_clique(H.members, H.edge_ptr, H.weights, pt, H.num_nodes)
        return x - wx / sqrt_dR

    return LinearOperatorView(H.num_nodes, apply, symmetric=True)


def rodriguez_p_quadratic(H: Hypergraph, psi, p: float) -> float:
    """p-generalized quadratic form of the clique-sum operator.

    Same coefficient structure as w_p but without the 1/(delta_e - 1)
    factor, normalized by the original degrees:
    sum over u < v of w_Rp(u,v) * (pt(u) - pt(v))^2 with pt = psi/sqrt(d).
    Evaluated edge-by-edge in O(total membership).
    """
    psi, _, eta = _profile_and_eta(H, psi, p)
    pt = psi / H.sqrt_degrees
    ptm = pt[H.members]
    etm = eta[H.members]
    eptr = H.edge_ptr[:-1]
    delta = H.edge_sizes.astype(np.float64)
    s1 = np.add.reduceat(ptm, eptr)
    s2 = np.add.reduceat(ptm * ptm, eptr)
    t = np.add.reduceat(etm, eptr)
    q = np.add.reduceat(etm * ptm, eptr)
    r = np.add.reduceat(etm * ptm * ptm, eptr)
    M = t / delta
    per_edge = H.weights * (delta * r + t * s2 - 2.0 * s1 * q - M * (delta * s2 - s1 * s1))
    return float(per_edge.sum())


def hein_regularizer(H: Hypergraph, psi, p: float) -> float:
    """Per-edge range regularizer: sum of w(e) * (max - min of psi over e)^p."""
    if p < 1:
        raise InvalidP(f"p must be >= 1, got {p}")
    psi = as_node_function(H, psi)
    ranges = K.edge_ranges(H.members, H.edge_ptr, psi)
    return float(np.sum(H.weights * ranges**p))


def random_walk(H: Hypergraph):
    """Random walk view: row-stochastic transition operator and stationary law.

    p(u, v) = w(u, v)/d(u) with the collapsed pair weights w(u, v); rows sum
    to one exactly because d(v) equals the pair-weight row sum.  The
    stationary distribution is degree-proportional.
    """
    coef = _clique_coef(H)

    def apply(x):
        wx = K.apply_clique(H.members, H.edge_ptr, coef, x, H.num_nodes)
        return wx / H.degrees

    pi = H.degrees / H.degrees.sum()
    return LinearOperatorView(H.num_nodes, apply, symmetric=False), pi


def graph_comparison_operators(adjacency, psi, p: float, v: int):
    """Reference plain-graph operators evaluated at one node.

    Given a symmetric, zero-diagonal adjacency matrix, returns the triple
    (degree-normalized graph p-Laplacian value, signed-difference operator
    value, and its degree-normalized variant) at node v.  Used as oracles
    when comparing hypergraph operators against their plain-graph
    counterparts on clique-reduced instances.
    """
    A = np.asarray(adjacency, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise AsymmetricInput(f"adjacency must be square, got {A.shape}")
    if not np.allclose(A, A.T, atol=1e-12):
        raise AsymmetricInput("adjacency must be symmetric")
    if np.any(np.abs(np.diag(A)) > 0):
        raise AsymmetricInput("adjacency must have a zero diagonal")
    n = A.shape[0]
    psi = np.asarray(psi, dtype=np.float64)
    if psi.shape != (n,):
        raise LengthMismatch(f"psi has shape {psi.shape}; expected ({n},)")
    if not 0 <= v < n:
        raise LengthMismatch(f"node id {v} outside [0, {n})")

    d = A.sum(axis=1)
    pt = psi / np.sqrt(d)

    # Degree-normalized graph p-Laplacian: node norms without the edge-size
    # division, pair coefficients (eta_u + eta_v)/2, diagonal = row sum.
    diffs = pt[None, :] - pt[:, None]  # diffs[v, u] = pt(u) - pt(v)
    norms = np.sqrt(np.sum(A * diffs**2, axis=1))
    eta = _eta_from_norms(norms, p)
    Wp = A * (eta[:, None] + eta[None, :]) / 2.0
    dp = Wp.sum(axis=1)
    zhou06 = float((dp[v] * pt[v] - Wp[v] @ pt) / np.sqrt(d[v]))

    # Signed-difference operator on raw psi, and its degree-normalized form.
    signed = float(A[v] @ xi_p(psi - psi[v], p))
    return zhou06, signed, signed / float(d[v])
