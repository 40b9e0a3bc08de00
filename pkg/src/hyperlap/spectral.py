"""Normalized-cut machinery: eigensolvers, threshold sweeps, quotient descent.

The p=2 pipeline computes the smallest eigenpairs of the degree-normalized
Laplacian and extracts partitions by an optimal-Ncut threshold sweep over the
degree-rescaled eigenvector (two-class) or by k-means on eigenvector rows
(multiclass).  For p != 2 the second-eigenvalue Rayleigh quotient

    R2_p(psi) = S_p(psi) / min_c || psi - c sqrt(d) ||_p^p

is minimized by gradient descent with Armijo backtracking, warm-started at
the p=2 second eigenvector, and the result is thresholded the same way.
Exhaustive small-instance oracles (brute-force minimum Ncut) and the
label-permutation error rate live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment

from . import _kernels as K
from .calculus import dirichlet_sum
from .errors import (
    DegeneratePartition,
    DegenerateDirection,
    EmptyCluster,
    InvalidP,
    NoConvergence,
    SizeMismatch,
    TooLarge,
    ValidationError,
    ZeroFunction,
)
from .hypergraph import Hypergraph, as_node_function
from .laplacians import LinearOperatorView, apply_p_laplacian, laplacian_p2, xi_p

__all__ = [
    "EigenPairs",
    "PartitionResult",
    "DescentOptions",
    "smallest_eigenpairs",
    "ncut",
    "multiclass_ncut",
    "boundary_volume",
    "threshold_sweep",
    "two_class_cut_p2",
    "multiclass_cut_p2",
    "brute_force_min_ncut",
    "p_eigen_residual",
    "rayleigh",
    "p_mean",
    "p_var",
    "rayleigh2",
    "rayleigh2_gradient",
    "two_class_cut_p",
    "error_rate",
]

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class EigenPairs:
    """Ascending eigenvalues with unit-norm eigenvectors (columns) and residuals."""

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray

    @property
    def k(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class PartitionResult:
    """Cluster assignment with its cut objective and solver diagnostics."""

    assignment: np.ndarray
    k: int
    ncut_value: float
    metadata: dict = dc_field(default_factory=dict)


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: largest-magnitude entry positive."""
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            out[:, j] = -col
    return out


def _residuals(L: LinearOperatorView, vals, vecs) -> np.ndarray:
    res = np.empty(vals.shape[0])
    for j in range(vals.shape[0]):
        v = vecs[:, j]
        res[j] = float(np.linalg.norm(L.apply(v) - vals[j] * v))
    return res


def smallest_eigenpairs(L: LinearOperatorView, k: int, d) -> EigenPairs:
    """The k smallest eigenpairs of a symmetric PSD operator.

    Dense symmetric eigensolve up to 512 nodes; beyond that a block iterative
    solve deflated against the known null vector sqrt(d), with an implicitly
    restarted fallback.  Residuals must reach 1e-8 or NoConvergence is raised.
    """
    n = L.n
    d = np.asarray(d, dtype=np.float64)
    if not 1 <= k <= n:
        raise ValidationError(f"need 1 <= k <= {n}, got k={k}")
    if n <= L.n_dense:
        vals, vecs = np.linalg.eigh(L.dense())
        vals, vecs = vals[:k], _fix_signs(vecs[:, :k])
        res = _residuals(L, vals, vecs)
        if np.any(res >= RESIDUAL_TOL):
            raise NoConvergence(f"dense eigenpair residuals {res.max():.3e} >= 1e-8")
        return EigenPairs(vals, vecs, res)

    null = np.sqrt(d)
    null /= np.linalg.norm(null)
    vals = np.array([0.0])
    vecs = null[:, None]
    if k > 1:
        from scipy.sparse.linalg import eigsh, lobpcg

        rng = np.random.default_rng(0)
        X = rng.standard_normal((n, k - 1))
        got = None
        try:
            w, V = lobpcg(
                L.to_scipy(), X, Y=null[:, None], largest=False, tol=1e-10,
                maxiter=500,
            )
            order = np.argsort(w)
            got = (np.asarray(w)[order], np.asarray(V)[:, order])
        except Exception:
            got = None
        if got is not None:
            r = _residuals(L, got[0], got[1])
            if np.any(r >= RESIDUAL_TOL):
                got = None
        if got is None:
            w, V = eigsh(L.to_scipy(), k=k, which="SA", v0=null, maxiter=50 * n)
            order = np.argsort(w)
            w, V = w[order], V[:, order]
            # drop the recomputed null pair; keep the next k-1
            w, V = w[1:k], V[:, 1:k]
            r = _residuals(L, w, V)
            if np.any(r >= RESIDUAL_TOL):
                raise NoConvergence(
                    f"iterative eigenpair residuals {r.max():.3e} >= 1e-8"
                )
            got = (w, V)
        vals = np.concatenate(([0.0], got[0]))
        vecs = np.column_stack([null, got[1]])
    vecs = _fix_signs(vecs)
    res = _residuals(L, vals, vecs)
    if np.any(res >= RESIDUAL_TOL):
        raise NoConvergence(f"eigenpair residuals {res.max():.3e} >= 1e-8")
    return EigenPairs(vals, vecs, res)


def _as_mask(H: Hypergraph, A) -> np.ndarray:
    mask = np.zeros(H.num_nodes, dtype=bool)
    arr = np.asarray(list(A) if not isinstance(A, np.ndarray) else A)
    if arr.dtype == bool:
        if arr.shape != (H.num_nodes,):
            raise DegeneratePartition("boolean side mask has the wrong length")
        return arr.copy()
    ids = arr.astype(np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= H.num_nodes):
        raise DegeneratePartition("side contains node ids out of range")
    mask[ids] = True
    return mask


def boundary_volume(H: Hypergraph, A) -> float:
    """Cut weight between A and its complement.

    Per edge, a of the delta members lie in A; crossing pairs contribute
    w(e)/(delta_e - 1) each, totalling w(e)/(delta_e - 1) * a * (delta_e - a).
    """
    mask = _as_mask(H, A)
    a = K.edge_sums(H.members, H.edge_ptr, mask.astype(np.float64))
    delta = H.edge_sizes.astype(np.float64)
    return float(np.sum(H.weights / (delta - 1.0) * a * (delta - a)))


def ncut(H: Hypergraph, A) -> float:
    """Two-way normalized cut of A against its complement."""
    mask = _as_mask(H, A)
    if not mask.any() or mask.all():
        raise DegeneratePartition("both sides of the cut must be nonempty")
    cut = boundary_volume(H, mask)
    vol_a = float(H.degrees[mask].sum())
    vol_b = float(H.degrees[~mask].sum())
    return cut * (1.0 / vol_a + 1.0 / vol_b)


def multiclass_ncut(H: Hypergraph, assignment) -> float:
    """k-way objective: sum over clusters of boundary/volume."""
    lab = np.asarray(assignment, dtype=np.int64)
    if lab.shape != (H.num_nodes,):
        raise SizeMismatch(f"assignment shape {lab.shape} != ({H.num_nodes},)")
    k = int(lab.max()) + 1 if lab.size else 0
    if lab.min() < 0:
        raise EmptyCluster("negative cluster ids")
    sizes = np.bincount(lab, minlength=k)
    if np.any(sizes == 0):
        raise EmptyCluster(f"clusters {np.flatnonzero(sizes == 0).tolist()} are empty")
    if k == 1:
        return 0.0
    m = H.num_edges
    edge_of_slot = np.repeat(np.arange(m, dtype=np.int64), H.edge_sizes)
    counts = np.bincount(
        edge_of_slot * k + lab[H.members], minlength=m * k
    ).reshape(m, k)
    delta = H.edge_sizes.astype(np.float64)[:, None]
    coef = (H.weights / (H.edge_sizes - 1.0))[:, None]
    cuts = np.sum(coef * counts * (delta - counts), axis=0)
    vols = np.bincount(lab, weights=H.degrees, minlength=k)
    return float(np.sum(cuts / vols))


def threshold_sweep(H: Hypergraph, x):
    """Best prefix cut over the ascending order of x (ties by node id).

    Returns ``(mask, ncut_value, threshold)`` where mask marks the prefix
    side and threshold is the largest x value inside it.  Incremental per
    edge: when the i-th smallest member of an edge enters the prefix the cut
    changes by w/(delta-1) * (delta - 2i + 1), so the whole sweep costs
    O(total membership) plus a sort.
    """
    x = np.asarray(x, dtype=np.float64)
    n = H.num_nodes
    if x.shape != (n,):
        raise SizeMismatch(f"sweep vector shape {x.shape} != ({n},)")
    if n < 2:
        raise DegeneratePartition("need at least two nodes to cut")
    order = np.lexsort((np.arange(n), x))
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)

    r = rank[H.members]
    edge_of_slot = np.repeat(np.arange(H.num_edges, dtype=np.int64), H.edge_sizes)
    within = np.argsort(edge_of_slot * np.int64(n) + r, kind="stable")
    i_in_edge = np.arange(H.total_membership, dtype=np.int64) - np.repeat(
        H.edge_ptr[:-1], H.edge_sizes
    )
    pos = np.empty(H.total_membership, dtype=np.int64)
    pos[within] = i_in_edge + 1  # 1-based entry index of each slot in its edge
    delta = np.repeat(H.edge_sizes, H.edge_sizes).astype(np.float64)
    coefs = np.repeat(H.weights / (H.edge_sizes - 1.0), H.edge_sizes)
    incr = coefs * (delta - 2.0 * pos.astype(np.float64) + 1.0)

    cut_delta = np.zeros(n + 1)
    np.add.at(cut_delta, r + 1, incr)
    cut = np.cumsum(cut_delta)[1:n]  # cut value after prefix sizes 1..n-1

    dsorted = H.degrees[order]
    vol_a = np.cumsum(dsorted)[: n - 1]
    vol_total = float(H.degrees.sum())
    vol_b = vol_total - vol_a
    values = cut * (1.0 / vol_a + 1.0 / vol_b)
    t = int(np.argmin(values))
    mask = np.zeros(n, dtype=bool)
    mask[order[: t + 1]] = True
    return mask, float(values[t]), float(x[order[t]])


def _partition_from_mask(H: Hypergraph, mask: np.ndarray, value: float, meta: dict) -> PartitionResult:
    # cluster 0 is the side containing node 0, for deterministic output
    assignment = np.where(mask == mask[0], 0, 1).astype(np.int64)
    return PartitionResult(assignment, 2, value, meta)


def two_class_cut_p2(H: Hypergraph) -> PartitionResult:
    """Spectral bipartition: second eigenvector, then optimal threshold sweep."""
    pairs = smallest_eigenpairs(laplacian_p2(H), 2, H.degrees)
    v2 = pairs.vectors[:, 1]
    mask, value, thr = threshold_sweep(H, v2 / H.sqrt_degrees)
    meta = {
        "p": 2.0,
        "lambda2": float(pairs.values[1]),
        "threshold": thr,
        "eigen_residuals": pairs.residuals.tolist(),
        "method": "eigen+sweep",
    }
    return _partition_from_mask(H, mask, value, meta)


def _kmeans_once(X: np.ndarray, k: int, rng: np.random.Generator,
                 rel_tol: float = 1e-9, max_iter: int = 300):
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            centers[j] = X[rng.integers(n)]
        else:
            centers[j] = X[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((X - centers[j]) ** 2, axis=1))
    inertia = np.inf
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(max_iter):
        dist = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        labels = np.argmin(dist, axis=1)
        for j in range(k):
            sel = labels == j
            if not sel.any():
                far = int(np.argmax(np.min(dist, axis=1)))
                centers[j] = X[far]
                labels[far] = j
                sel = labels == j
            centers[j] = X[sel].mean(axis=0)
        new_inertia = float(
            np.sum((X - centers[labels]) ** 2)
        )
        if inertia - new_inertia <= rel_tol * max(inertia, 1e-300):
            inertia = new_inertia
            break
        inertia = new_inertia
    return labels, inertia


def multiclass_cut_p2(H: Hypergraph, k: int, seed: int, restarts: int = 10) -> PartitionResult:
    """k-way spectral cut: k smallest eigenvectors, k-means on their rows."""
    if not 2 <= k <= H.num_nodes:
        raise ValidationError(f"need 2 <= k <= {H.num_nodes}, got {k}")
    pairs = smallest_eigenpairs(laplacian_p2(H), k, H.degrees)
    X = pairs.vectors
    rng = np.random.default_rng(seed)
    best_labels, best_inertia = None, np.inf
    for _ in range(max(1, restarts)):
        labels, inertia = _kmeans_once(X, k, rng)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    # relabel clusters by first appearance for deterministic output
    remap = {}
    assignment = np.empty(H.num_nodes, dtype=np.int64)
    for i, lab in enumerate(best_labels):
        if lab not in remap:
            remap[lab] = len(remap)
        assignment[i] = remap[lab]
    value = multiclass_ncut(H, assignment)
    meta = {
        "p": 2.0,
        "seed": int(seed),
        "restarts": int(restarts),
        "inertia": best_inertia,
        "eigenvalues": pairs.values.tolist(),
        "method": "eigen+kmeans",
    }
    return PartitionResult(assignment, k, value, meta)


def brute_force_min_ncut(H: Hypergraph, k: int) -> float:
    """Exact minimum k-way normalized cut by enumeration (up to 12 nodes)."""
    n = H.num_nodes
    if n > 12:
        raise TooLarge(f"enumeration capped at 12 nodes, got {n}")
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if k > n:
        raise EmptyCluster(f"no surjective assignment of {n} nodes into {k} clusters")
    if k == 1:
        return 0.0
    m = H.num_edges
    B = np.zeros((n, m))
    for e in range(m):
        B[H.members[H.edge_ptr[e] : H.edge_ptr[e + 1]], e] = 1.0
    coef = H.weights / (H.edge_sizes - 1.0)
    delta = H.edge_sizes.astype(np.float64)
    d = H.degrees

    best = np.inf
    total = k ** (n - 1)  # node 0 pinned to cluster 0 (relabel symmetry)
    chunk = 1 << 14
    digits = k ** np.arange(n - 1, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        rest = (codes[:, None] // digits[None, :]) % k
        assign = np.concatenate(
            [np.zeros((codes.shape[0], 1), dtype=np.int64), rest], axis=1
        )
        obj = np.zeros(codes.shape[0])
        valid = np.ones(codes.shape[0], dtype=bool)
        for i in range(k):
            Xi = (assign == i).astype(np.float64)
            vol = Xi @ d
            valid &= vol > 0
            counts = Xi @ B
            cuts = np.sum(coef[None, :] * counts * (delta[None, :] - counts), axis=1)
            with np.errstate(divide="ignore", invalid="ignore"):
                obj += np.where(vol > 0, cuts / np.where(vol > 0, vol, 1.0), np.inf)
        if valid.any():
            best = min(best, float(obj[valid].min()))
    return best


def p_eigen_residual(H: Hypergraph, psi, lam: float, p: float) -> float:
    """Infinity-norm defect of the p-eigenpair equation at (psi, lam)."""
    psi = as_node_function(H, psi)
    return float(np.max(np.abs(apply_p_laplacian(H, psi, p) - lam * xi_p(psi, p))))


def rayleigh(H: Hypergraph, psi, p: float) -> float:
    """Rayleigh quotient S_p(psi) / sum |psi|^p."""
    psi = as_node_function(H, psi)
    denom = float(np.sum(np.abs(psi) ** p))
    if denom == 0.0:
        raise ZeroFunction("Rayleigh quotient of the zero function")
    return dirichlet_sum(H, psi, p) / denom


def p_mean(H: Hypergraph, psi, p: float) -> float:
    """Degree-weighted p-mean: the c minimizing sum |psi - c sqrt(d)|^p.

    For p > 1 the minimizer is the root of the decreasing function
    F(c) = sum sqrt(d) xi_p(psi - sqrt(d) c) on [min, max] of psi/sqrt(d);
    p = 2 shortcuts to the exact projection <psi, sqrt(d)>/vol(V).  For
    p = 1 the weighted median of psi/sqrt(d) (weights sqrt(d)) is returned;
    below 1 the objective is nonconvex and InvalidP is raised.
    """
    psi = as_node_function(H, psi)
    if p < 1:
        raise InvalidP(f"p must be >= 1, got {p}")
    sq = H.sqrt_degrees
    t = psi / sq
    if p == 2:
        return float(psi @ sq / H.degrees.sum())
    if p == 1:
        order = np.argsort(t, kind="stable")
        wts = sq[order]
        cum = np.cumsum(wts)
        half = 0.5 * cum[-1]
        idx = int(np.searchsorted(cum, half))
        return float(t[order[min(idx, len(t) - 1)]])
    lo, hi = float(t.min()), float(t.max())
    if hi - lo < 1e-300:
        return lo

    def F(c):
        return float(np.sum(sq * xi_p(psi - sq * c, p)))

    return float(brentq(F, lo, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200))


def p_var(H: Hypergraph, psi, p: float) -> float:
    """Degree-weighted p-variance: the attained minimum of the p-mean problem."""
    psi = as_node_function(H, psi)
    c = p_mean(H, psi, p)
    return float(np.sum(np.abs(psi - H.sqrt_degrees * c) ** p))


def _centered(H: Hypergraph, psi, p: float):
    c = p_mean(H, psi, p)
    r = psi - H.sqrt_degrees * c
    scale = max(1.0, float(np.max(np.abs(psi))))
    if float(np.max(np.abs(r))) <= 1e-12 * scale:
        raise DegenerateDirection("psi is a multiple of sqrt(d)")
    return c, r


def rayleigh2(H: Hypergraph, psi, p: float) -> float:
    """Second-eigenvalue quotient: S_p(psi) / p-variance of psi."""
    psi = as_node_function(H, psi)
    _, r = _centered(H, psi, p)
    var = float(np.sum(np.abs(r) ** p))
    return dirichlet_sum(H, psi, p) / var


def rayleigh2_gradient(H: Hypergraph, psi, p: float) -> np.ndarray:
    """Gradient of the second-eigenvalue quotient (needs p > 1)."""
    if p <= 1:
        raise InvalidP(f"gradient needs p > 1, got {p}")
    psi = as_node_function(H, psi)
    _, r = _centered(H, psi, p)
    var = float(np.sum(np.abs(r) ** p))
    sp = dirichlet_sum(H, psi, p)
    lap = apply_p_laplacian(H, psi, p)
    return (p / var) * lap - (sp * p / var**2) * xi_p(r, p)


@dataclass(frozen=True)
class DescentOptions:
    """Backtracking gradient-descent controls for the quotient minimization."""

    max_iter: int = 5000
    rel_tol: float = 1e-9
    armijo_c: float = 1e-4
    shrink: float = 0.5
    init_step: float = 1.0
    min_step: float = 1e-18


def _normalize_centered(H: Hypergraph, psi: np.ndarray, p: float) -> np.ndarray:
    c = p_mean(H, psi, p)
    r = psi - H.sqrt_degrees * c
    norm = float(np.sum(np.abs(r) ** p)) ** (1.0 / p)
    if norm == 0.0:
        raise DegenerateDirection("descent iterate collapsed onto sqrt(d)")
    return r / norm


def two_class_cut_p(H: Hypergraph, p: float, opts: DescentOptions = DescentOptions()) -> PartitionResult:
    """Two-class cut for general p by quotient descent from the p=2 solution.

    Descends R2_p with Armijo backtracking, recentering and renormalizing
    every iterate, then threshold-sweeps psi/sqrt(d).  If no descent step is
    possible at the start, the p=2 partition is returned with the
    ``no_descent`` flag set.
    """
    if not 1.1 <= p <= 3.0:
        raise InvalidP(f"descent supports p in [1.1, 3], got {p}")
    pairs = smallest_eigenpairs(laplacian_p2(H), 2, H.degrees)
    psi = _normalize_centered(H, pairs.vectors[:, 1], p)
    val = rayleigh2(H, psi, p)
    init_val = val
    no_descent = False
    iterations = 0
    step = opts.init_step
    for it in range(opts.max_iter):
        g = rayleigh2_gradient(H, psi, p)
        gnorm2 = float(g @ g)
        scale = max(1.0, abs(val))
        if np.sqrt(gnorm2) <= 1e-12 * scale:
            break
        accepted = False
        t = step
        while t >= opts.min_step:
            trial = _normalize_centered(H, psi - t * g, p)
            tval = rayleigh2(H, trial, p)
            if tval <= val - opts.armijo_c * t * gnorm2:
                accepted = True
                break
            t *= opts.shrink
        if not accepted:
            if it == 0:
                no_descent = True
            break
        iterations = it + 1
        step = min(opts.init_step, t / opts.shrink)
        prev = val
        psi, val = trial, tval
        if prev - val <= opts.rel_tol * max(abs(prev), 1e-300):
            break

    if no_descent:
        psi = _normalize_centered(H, pairs.vectors[:, 1], p)
        val = init_val
    mask, cut_value, thr = threshold_sweep(H, psi / H.sqrt_degrees)
    meta = {
        "p": float(p),
        "achieved": float(val),
        "initial": float(init_val),
        "iterations": int(iterations),
        "no_descent": bool(no_descent),
        "lambda2": float(pairs.values[1]),
        "threshold": thr,
        "method": "rayleigh2-descent+sweep",
    }
    return _partition_from_mask(H, mask, cut_value, meta)


def error_rate(pred, truth) -> float:
    """Fraction misclassified under the best cluster-to-label matching."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise SizeMismatch(f"shapes {pred.shape} and {truth.shape} differ")
    n = pred.shape[0]
    if n == 0:
        raise SizeMismatch("empty label vectors")
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    C = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(C, (pi, ti), 1)
    rows, cols = linear_sum_assignment(-C)
    matched = int(C[rows, cols].sum())
    return 1.0 - matched / n
