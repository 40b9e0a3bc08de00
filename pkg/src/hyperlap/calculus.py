"""Discrete differential calculus on hypergraphs.

Gradient, gradient norms, p-Dirichlet sums, inner products, and divergence.
Edge-anchored quantities live in :class:`EdgeVertexField`: one real per
(edge, member) pair, stored flat in the hypergraph's slot order.  All sums
over edge orderings collapse to anchor sums with weight ``1/delta_e``, which
keeps every kernel linear in the total membership.

The gradient of a node function ``psi`` anchored at ``v in e`` is

    g(e, v) = sqrt(w(e)/(delta_e - 1))
              * (sum_{u in e} psi(u)/sqrt(d(u)) - delta_e * psi(v)/sqrt(d(v)))

and the node norm collapses to ``||grad psi(v)||^2 = sum_{e: v in e}
g(e,v)^2 / delta_e``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import FieldMismatch, InvalidP, LengthMismatch, NodeIdOutOfRange
from .hypergraph import Hypergraph, as_node_function

__all__ = [
    "EPS_NORM",
    "EdgeVertexField",
    "GradientProfile",
    "gradient",
    "gradient_profile",
    "gradient_norm",
    "dirichlet_sum",
    "edge_p_mean",
    "inner_product_nodes",
    "inner_product_edges",
    "divergence",
    "slot_index",
]

# Norms are floored at this value before being raised to negative powers
# (p < 2 coefficient terms); raw norms are used everywhere else.
EPS_NORM = 1e-12


def slot_index(H: Hypergraph, e: int, v: int) -> int:
    """Flat slot index of the (edge e, member v) pair."""
    lo, hi = int(H.edge_ptr[e]), int(H.edge_ptr[e + 1])
    pos = lo + int(np.searchsorted(H.members[lo:hi], v))
    if pos >= hi or H.members[pos] != v:
        raise FieldMismatch(f"node {v} is not a member of edge {e}")
    return pos


@dataclass(frozen=True)
class EdgeVertexField:
    """One real value per (edge, anchor-member) pair of a hypergraph.

    ``values[slot]`` corresponds to ``(e, v)`` where ``slot`` runs over
    ``H.members`` in storage order.
    """

    hypergraph: Hypergraph
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.hypergraph.total_membership,):
            raise FieldMismatch(
                f"field has {vals.shape} values; hypergraph has "
                f"{self.hypergraph.total_membership} (edge, member) slots"
            )
        if not np.all(np.isfinite(vals)):
            raise FieldMismatch("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, H: Hypergraph) -> "EdgeVertexField":
        return cls(H, np.zeros(H.total_membership))

    @classmethod
    def from_function(cls, H: Hypergraph, fn) -> "EdgeVertexField":
        """Build a field by evaluating ``fn(e, v)`` at every slot."""
        vals = np.empty(H.total_membership)
        for e in range(H.num_edges):
            for slot in range(H.edge_ptr[e], H.edge_ptr[e + 1]):
                vals[slot] = fn(e, int(H.members[slot]))
        return cls(H, vals)

    def __getitem__(self, key) -> float:
        e, v = key
        return float(self.values[slot_index(self.hypergraph, e, v)])


def _check_field(H: Hypergraph, f: EdgeVertexField) -> np.ndarray:
    if f.hypergraph is not H and f.hypergraph != H:
        raise FieldMismatch("field belongs to a different hypergraph")
    return f.values


@dataclass(frozen=True)
class GradientProfile:
    """Gradient field of some psi plus its per-node norms and edge means."""

    field: EdgeVertexField
    node_norms: np.ndarray
    _p_means: dict = field(default_factory=dict)

    @property
    def hypergraph(self) -> Hypergraph:
        return self.field.hypergraph

    def floored_norms(self, eps: float = EPS_NORM) -> np.ndarray:
        """Node norms floored at eps, for use under negative exponents."""
        return np.maximum(self.node_norms, eps)

    def edge_p_means(self, p: float) -> np.ndarray:
        """Per-edge power mean of the node norms (cached per p)."""
        key = float(p)
        if key not in self._p_means:
            H = self.hypergraph
            arr = np.array(
                [edge_p_mean(H, self.node_norms, e, p) for e in range(H.num_edges)]
            )
            arr.setflags(write=False)
            self._p_means[key] = arr
        return self._p_means[key]

    def edge_p_mean(self, e: int, p: float) -> float:
        return float(self.edge_p_means(p)[e])


def _grad_coef(H: Hypergraph) -> np.ndarray:
    return np.sqrt(H.weights / (H.edge_sizes - 1.0))


def gradient(H: Hypergraph, psi) -> EdgeVertexField:
    """Gradient of a node function as an edge-vertex field."""
    psi = as_node_function(H, psi)
    g = K.gradient_field(
        H.members, H.edge_ptr, _grad_coef(H), H.edge_sizes, psi / H.sqrt_degrees
    )
    return EdgeVertexField(H, g)


def gradient_profile(H: Hypergraph, psi) -> GradientProfile:
    """Gradient field plus per-node norms in one pass."""
    f = gradient(H, psi)
    nsq = K.node_norms_sq(H.members, H.edge_ptr, H.edge_sizes, f.values, H.num_nodes)
    return GradientProfile(f, np.sqrt(np.maximum(nsq, 0.0)))


def gradient_norm(H: Hypergraph, psi, v: int) -> float:
    """Norm of the gradient of psi at a single node."""
    psi = as_node_function(H, psi)
    if not 0 <= v < H.num_nodes:
        raise NodeIdOutOfRange(f"node id {v} outside [0, {H.num_nodes})")
    pt = psi / H.sqrt_degrees
    ptr, edge_ids, _ = H.incidence()
    acc = 0.0
    for e in edge_ids[ptr[v] : ptr[v + 1]]:
        lo, hi = H.edge_ptr[e], H.edge_ptr[e + 1]
        delta = hi - lo
        T = float(pt[H.members[lo:hi]].sum())
        g = np.sqrt(H.weights[e] / (delta - 1.0)) * (T - delta * pt[v])
        acc += g * g / delta
    return float(np.sqrt(acc))


def dirichlet_sum(H: Hypergraph, psi, p: float) -> float:
    """p-Dirichlet sum: sum over nodes of the gradient norm to the p."""
    if p < 1:
        raise InvalidP(f"p must be >= 1, got {p}")
    prof = gradient_profile(H, psi)
    return float(np.sum(prof.node_norms**p))


def edge_p_mean(H: Hypergraph, node_norms, e: int, p: float) -> float:
    """Power mean over the members of edge e of the given node norms.

    Returns the p-th root of the mean of the p-th powers; callers raise the
    result to the power they need (typically p-2).
    """
    if p == 0:
        raise InvalidP("edge_p_mean is undefined at p = 0")
    lo, hi = int(H.edge_ptr[e]), int(H.edge_ptr[e + 1])
    vals = np.abs(np.asarray(node_norms, dtype=np.float64)[H.members[lo:hi]])
    return float(np.mean(vals**p) ** (1.0 / p))


def inner_product_nodes(f, g) -> float:
    """Plain dot product of two node functions."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if f.shape != g.shape:
        raise LengthMismatch(f"shapes {f.shape} and {g.shape} differ")
    return float(np.dot(f, g))


def inner_product_edges(H: Hypergraph, f: EdgeVertexField, g: EdgeVertexField) -> float:
    """Inner product of two edge-vertex fields: sum of f*g/delta_e over slots."""
    fv = _check_field(H, f)
    gv = _check_field(H, g)
    inv_delta = 1.0 / np.repeat(H.edge_sizes, H.edge_sizes)
    return float(np.sum(fv * gv * inv_delta))


def divergence(H: Hypergraph, phi: EdgeVertexField) -> np.ndarray:
    """Divergence of an edge-vertex field, as a node function.

    div phi(v) = sum over edges containing v of
    sqrt(w(e)/(delta_e - 1)) / sqrt(d(v)) * (phi(e, v) - mean of phi over e).
    """
    vals = _check_field(H, phi)
    num = K.collapse_div(H.members, H.edge_ptr, _grad_coef(H), H.edge_sizes,
                         vals, H.num_nodes)
    return num / H.sqrt_degrees
