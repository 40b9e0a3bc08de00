"""Semi-supervised label propagation by p-Dirichlet regularization.

Minimizes  E_p(psi) = S_p(psi) + mu * ||psi - y||^2  where y holds +1/-1 on
labeled nodes and 0 elsewhere.  The solver is a synchronous relaxation sweep:
with the coefficient split of the p-Laplacian rebuilt from the current
iterate (see :func:`hyperlap.laplacians.p_laplacian_parts`),

    psi_next(v) = (p * s(v)/sqrt(d(v)) + 2 mu y(v))
                  / (p * d_p(v)/d(v) + 2 mu),

started from psi = y.  For p = 2 the stationarity condition is linear and a
closed form is available; the sweep remains available for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .calculus import dirichlet_sum
from .errors import (
    InvalidP,
    SolverStall,
    TooFewLabels,
    ValidationError,
    ZeroDiagonal,
)
from .hypergraph import Hypergraph, as_node_function
from .laplacians import p_laplacian_parts

__all__ = [
    "SSLProblem",
    "SSLResult",
    "objective",
    "gauss_jacobi_step",
    "solve",
    "closed_form_p2",
    "cross_validate_mu",
    "predict",
    "DEFAULT_MU_GRID",
]

DEFAULT_MU_GRID = (1.0, 10.0, 100.0, 1000.0, 10000.0)


@dataclass(frozen=True)
class SSLProblem:
    """A labeled hypergraph instance with regularization strength mu.

    ``y`` takes values in {-1, 0, +1}; 0 marks unlabeled nodes.  At least one
    node of each class must be labeled and mu must be positive.
    """

    hypergraph: Hypergraph
    y: np.ndarray
    mu: float
    p: float = 2.0

    def __post_init__(self):
        y = as_node_function(self.hypergraph, self.y)
        if not np.all(np.isin(y, (-1.0, 0.0, 1.0))):
            raise ValidationError("labels must take values in {-1, 0, +1}")
        if not (np.any(y == 1.0) and np.any(y == -1.0)):
            raise TooFewLabels("need at least one +1 and one -1 label")
        if not self.mu > 0:
            raise ValidationError(f"mu must be > 0, got {self.mu}")
        if self.p < 1:
            raise InvalidP(f"p must be >= 1, got {self.p}")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "p", float(self.p))


@dataclass(frozen=True)
class SSLResult:
    """Solver output: minimizer, iteration count, and diagnostics.

    ``final_residual`` is the infinity norm of the last iterate delta.
    ``bound_overshoot`` reports the largest amount by which any sweep left
    the running [min, max] envelope of the labels and previous iterate
    (0.0 when the min/max principle held throughout).
    """

    psi: np.ndarray
    iterations: int
    final_residual: float
    objective_value: float
    converged: bool
    bound_overshoot: float = 0.0


def objective(prob: SSLProblem, psi) -> float:
    """Regularized p-Dirichlet objective at psi."""
    psi = as_node_function(prob.hypergraph, psi)
    fit = psi - prob.y
    return dirichlet_sum(prob.hypergraph, psi, prob.p) + prob.mu * float(fit @ fit)


def _sweep(prob: SSLProblem, psi: np.ndarray) -> np.ndarray:
    H = prob.hypergraph
    dp, s, _ = p_laplacian_parts(H, psi, prob.p)
    denom = prob.p * dp / H.degrees + 2.0 * prob.mu
    if np.any(denom <= 0):
        v = int(np.argmin(denom))
        raise ZeroDiagonal(
            f"relaxation diagonal {denom[v]:.3e} at node {v}; sweep undefined"
        )
    return (prob.p * s / H.sqrt_degrees + 2.0 * prob.mu * prob.y) / denom


def gauss_jacobi_step(prob: SSLProblem, psi_t) -> np.ndarray:
    """One synchronous relaxation sweep from psi_t (coefficients rebuilt)."""
    psi_t = as_node_function(prob.hypergraph, psi_t)
    return _sweep(prob, psi_t)


def solve(prob: SSLProblem, tol: float = 1e-8, max_iter: int = 10000) -> SSLResult:
    """Iterate sweeps from psi = y until the infinity-norm delta drops below tol.

    If the cap is hit the best iterate seen (by objective value) is returned
    with ``converged=False``.
    """
    psi = prob.y.copy()
    best_psi = psi
    best_obj = objective(prob, psi)
    overshoot = 0.0
    delta = np.inf
    for it in range(1, max_iter + 1):
        lo = min(prob.y.min(), psi.min())
        hi = max(prob.y.max(), psi.max())
        nxt = _sweep(prob, psi)
        overshoot = max(overshoot, float(max(nxt.max() - hi, lo - nxt.min(), 0.0)))
        delta = float(np.max(np.abs(nxt - psi)))
        psi = nxt
        obj = objective(prob, psi)
        if obj < best_obj:
            best_obj, best_psi = obj, psi
        if delta < tol:
            return SSLResult(psi, it, delta, obj, True, overshoot)
    return SSLResult(best_psi, max_iter, delta, best_obj, False, overshoot)


def closed_form_p2(H: Hypergraph, y, mu: float) -> np.ndarray:
    """Exact p=2 minimizer: solve (I - alpha Q) psi = beta y.

    Q is the degree-normalized pair-weight operator, alpha = 1/(1+mu),
    beta = mu/(1+mu).  Dense solve up to 512 nodes, conjugate gradients on
    the matrix-free operator beyond.
    """
    y = as_node_function(H, y)
    if not mu > 0:
        raise ValidationError(f"mu must be > 0, got {mu}")
    alpha = 1.0 / (1.0 + mu)
    beta = mu / (1.0 + mu)
    coef = H.weights / (H.edge_sizes - 1.0)

    def q_apply(x):
        pt = x / H.sqrt_degrees
        wx = K.apply_clique(H.members, H.edge_ptr, coef, pt, H.num_nodes)
        return wx / H.sqrt_degrees

    n = H.num_nodes
    if n <= 512:
        Q = np.empty((n, n))
        basis = np.zeros(n)
        for i in range(n):
            basis[i] = 1.0
            Q[:, i] = q_apply(basis)
            basis[i] = 0.0
        return np.linalg.solve(np.eye(n) - alpha * Q, beta * y)

    from scipy.sparse.linalg import LinearOperator, cg

    op = LinearOperator((n, n), matvec=lambda x: x - alpha * q_apply(x), dtype=np.float64)
    psi, info = cg(op, beta * y, rtol=1e-12, atol=0.0, maxiter=20 * n)
    if info != 0:
        raise SolverStall(f"conjugate gradients returned info={info}")
    return psi


def predict(psi) -> np.ndarray:
    """Classify by sign; exact zero maps to +1."""
    psi = np.asarray(psi, dtype=np.float64)
    return np.where(psi >= 0.0, 1, -1).astype(np.int64)


def _fold_split(ids: np.ndarray, folds: int, rng: np.random.Generator):
    """Deterministic shuffled round-robin split of ids into folds."""
    perm = ids[rng.permutation(ids.shape[0])]
    return [perm[k::folds] for k in range(folds)]


def cross_validate_mu(
    H: Hypergraph,
    labeled: dict,
    p: float,
    grid=DEFAULT_MU_GRID,
    folds: int = 5,
    seed: int = 0,
) -> float:
    """Pick mu from the grid by stratified k-fold error on the labeled nodes.

    ``labeled`` maps node id to a label in {-1, +1}.  Each class needs at
    least ``folds`` labeled nodes.  Ties break toward smaller mu.
    """
    pos = np.array(sorted(v for v, lab in labeled.items() if lab == 1), dtype=np.int64)
    neg = np.array(sorted(v for v, lab in labeled.items() if lab == -1), dtype=np.int64)
    if pos.shape[0] + neg.shape[0] != len(labeled):
        raise ValidationError("labeled values must be -1 or +1")
    if pos.shape[0] < folds or neg.shape[0] < folds:
        raise TooFewLabels(
            f"need >= {folds} labeled nodes per class, got {pos.shape[0]} and {neg.shape[0]}"
        )
    grid = sorted(float(g) for g in grid)
    if not grid:
        raise ValidationError("mu grid is empty")
    rng = np.random.default_rng(seed)
    pos_folds = _fold_split(pos, folds, rng)
    neg_folds = _fold_split(neg, folds, rng)

    best_mu, best_err = None, np.inf
    for mu in grid:
        errs = []
        for k in range(folds):
            held = np.concatenate([pos_folds[k], neg_folds[k]])
            y = np.zeros(H.num_nodes)
            for v, lab in labeled.items():
                y[v] = lab
            y[held] = 0.0
            if not (np.any(y == 1.0) and np.any(y == -1.0)):
                raise TooFewLabels("a fold removed an entire class")
            if p == 2:
                psi = closed_form_p2(H, y, mu)
            else:
                psi = solve(SSLProblem(H, y, mu, p)).psi
            pred = predict(psi[held])
            truth = np.array([labeled[int(v)] for v in held])
            errs.append(float(np.mean(pred != truth)))
        mean_err = float(np.mean(errs))
        if mean_err < best_err - 1e-15:
            best_mu, best_err = float(mu), mean_err
    return best_mu
