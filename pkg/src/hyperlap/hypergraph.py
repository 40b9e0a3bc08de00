"""Hypergraph data model: validation, degrees, volumes, connectivity.

A :class:`Hypergraph` is a connected, weighted, undirected hypergraph with
dense integer node ids ``0..num_nodes-1``.  Edges are node-id sets of size at
least two; parallel edges are allowed and kept distinct.  Node functions are
plain float arrays of length ``num_nodes``.

The incidence structure is stored flat (``members``/``edge_ptr``) so that all
operators run as array kernels; see ``hyperlap._kernels``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import (
    Disconnected,
    DuplicateMember,
    EmptyGraph,
    LengthMismatch,
    NodeIdOutOfRange,
    NonPositiveWeight,
    SingletonEdge,
)

__all__ = ["Hypergraph", "largest_component", "as_node_function"]


def _component_labels(num_nodes, members, edge_ptr):
    """Connected-component label per node via the star expansion.

    Nodes and edges become vertices of a bipartite graph; isolated nodes get
    their own component.
    """
    n = num_nodes
    m = edge_ptr.shape[0] - 1
    if m == 0:
        return np.arange(n), n
    rows = members
    cols = n + np.repeat(np.arange(m), np.diff(edge_ptr))
    data = np.ones(rows.shape[0], dtype=np.int8)
    adj = sp.coo_matrix((data, (rows, cols)), shape=(n + m, n + m))
    _, labels = connected_components(adj, directed=False)
    node_labels = labels[:n]
    return node_labels, np.unique(node_labels).shape[0]


class Hypergraph:
    """Validated connected hypergraph.

    Parameters
    ----------
    num_nodes : int
        Number of nodes; ids are ``0..num_nodes-1``.
    edges : iterable of node-id collections
        Each edge must contain at least two distinct ids in range.
    weights : iterable of floats
        One strictly positive, finite weight per edge.

    Raises
    ------
    EmptyGraph, SingletonEdge, DuplicateMember, NodeIdOutOfRange,
    NonPositiveWeight, LengthMismatch, Disconnected
    """

    __slots__ = (
        "num_nodes",
        "edges",
        "weights",
        "members",
        "edge_ptr",
        "edge_sizes",
        "degrees",
        "sqrt_degrees",
        "_incidence",
    )

    def __init__(self, num_nodes: int, edges: Iterable[Iterable[int]], weights: Sequence[float]):
        n = int(num_nodes)
        if n <= 0:
            raise EmptyGraph("a hypergraph needs at least one node")
        edge_tuples = []
        for idx, edge in enumerate(edges):
            members = tuple(sorted(int(v) for v in edge))
            if len(set(members)) != len(members):
                raise DuplicateMember(f"edge {idx} repeats a node id: {members}")
            if len(members) < 2:
                raise SingletonEdge(f"edge {idx} has {len(members)} member(s); need >= 2")
            if members[0] < 0 or members[-1] >= n:
                raise NodeIdOutOfRange(
                    f"edge {idx} references ids outside [0, {n}): {members}"
                )
            edge_tuples.append(members)
        w = np.asarray(list(weights), dtype=np.float64)
        if w.shape[0] != len(edge_tuples):
            raise LengthMismatch(
                f"{len(edge_tuples)} edges but {w.shape[0]} weights"
            )
        if w.size and not (np.all(np.isfinite(w)) and np.all(w > 0)):
            bad = int(np.argmin(np.where(np.isfinite(w), w, -np.inf)))
            raise NonPositiveWeight(f"edge {bad} has weight {w[bad]!r}; need > 0")

        self.num_nodes = n
        self.edges = tuple(edge_tuples)
        sizes = np.array([len(e) for e in edge_tuples], dtype=np.int64)
        self.edge_sizes = sizes
        self.edge_ptr = np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)
        flat = np.fromiter(
            (v for e in edge_tuples for v in e), dtype=np.int64, count=int(sizes.sum())
        )
        self.members = flat
        self.weights = w

        deg = np.bincount(flat, weights=np.repeat(w, sizes), minlength=n)
        _, n_comp = _component_labels(n, flat, self.edge_ptr)
        if n_comp != 1 or np.any(deg <= 0):
            raise Disconnected(n_comp)
        self.degrees = deg
        self.sqrt_degrees = np.sqrt(deg)
        for arr in (self.members, self.edge_ptr, self.edge_sizes, self.weights,
                    self.degrees, self.sqrt_degrees):
            arr.setflags(write=False)
        self._incidence = None

    # -- basic accessors -------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def total_membership(self) -> int:
        """Sum of edge sizes (number of (edge, member) slots)."""
        return int(self.members.shape[0])

    def degree(self, v: int) -> float:
        """Sum of the weights of the edges containing node v."""
        if not 0 <= v < self.num_nodes:
            raise NodeIdOutOfRange(f"node id {v} outside [0, {self.num_nodes})")
        return float(self.degrees[v])

    def edge_size(self, e: int) -> int:
        """Number of nodes in edge e."""
        if not 0 <= e < self.num_edges:
            raise IndexError(f"edge index {e} outside [0, {self.num_edges})")
        return int(self.edge_sizes[e])

    def volume(self, nodes: Iterable[int]) -> float:
        """Sum of node degrees over a node set (duplicates ignored)."""
        ids = np.unique(np.fromiter((int(v) for v in nodes), dtype=np.int64))
        if ids.size == 0:
            return 0.0
        if ids[0] < 0 or ids[-1] >= self.num_nodes:
            raise NodeIdOutOfRange("volume: node id out of range")
        return float(self.degrees[ids].sum())

    def incidence(self):
        """Node-to-slot CSR: (ptr, edge_ids, slot_ids), slots grouped by node."""
        if self._incidence is None:
            order = np.argsort(self.members, kind="stable")
            edge_of_slot = np.repeat(
                np.arange(self.num_edges, dtype=np.int64), self.edge_sizes
            )
            counts = np.bincount(self.members, minlength=self.num_nodes)
            ptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
            self._incidence = (ptr, edge_of_slot[order], order.astype(np.int64))
        return self._incidence

    # -- dunder ----------------------------------------------------------

    def __repr__(self) -> str:
        return (
            f"Hypergraph(num_nodes={self.num_nodes}, num_edges={self.num_edges}, "
            f"total_membership={self.total_membership})"
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Hypergraph)
            and self.num_nodes == other.num_nodes
            and self.edges == other.edges
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self):
        return hash((self.num_nodes, self.edges, self.weights.tobytes()))


def as_node_function(H: Hypergraph, values) -> np.ndarray:
    """Validate and convert a node function to a float64 array of length n."""
    psi = np.asarray(values, dtype=np.float64)
    if psi.shape != (H.num_nodes,):
        raise LengthMismatch(
            f"node function has shape {psi.shape}; expected ({H.num_nodes},)"
        )
    if not np.all(np.isfinite(psi)):
        raise LengthMismatch("node function contains non-finite values")
    return psi


def largest_component(num_nodes, edges, weights):
    """Restrict an unvalidated hypergraph to its largest connected component.

    Edges and weights are validated as in the constructor, but the input may
    be disconnected.  Returns ``(H, original_ids)`` where ``original_ids[i]``
    is the input id of the component node with new id ``i``.  Ties in
    component size go to the component containing the smallest original id.

    Raises EmptyGraph when no nodes remain or the winning component carries
    no edges (an isolated node cannot form a valid hypergraph).
    """
    n = int(num_nodes)
    if n <= 0:
        raise EmptyGraph("a hypergraph needs at least one node")
    edge_tuples = []
    for idx, edge in enumerate(edges):
        members = tuple(sorted(int(v) for v in edge))
        if len(set(members)) != len(members):
            raise DuplicateMember(f"edge {idx} repeats a node id: {members}")
        if len(members) < 2:
            raise SingletonEdge(f"edge {idx} has {len(members)} member(s); need >= 2")
        if members[0] < 0 or members[-1] >= n:
            raise NodeIdOutOfRange(f"edge {idx} references ids outside [0, {n}): {members}")
        edge_tuples.append(members)
    w = np.asarray(list(weights), dtype=np.float64)
    if w.shape[0] != len(edge_tuples):
        raise LengthMismatch(f"{len(edge_tuples)} edges but {w.shape[0]} weights")

    sizes = np.array([len(e) for e in edge_tuples], dtype=np.int64)
    eptr = np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)
    flat = np.fromiter((v for e in edge_tuples for v in e), dtype=np.int64,
                       count=int(sizes.sum()))
    labels, _ = _component_labels(n, flat, eptr)
    counts = np.bincount(labels)
    best_size = counts.max()
    candidates = np.flatnonzero(counts == best_size)
    if candidates.shape[0] == 1:
        best = candidates[0]
    else:
        cand_set = set(int(c) for c in candidates)
        best = next(l for l in labels if int(l) in cand_set)
    keep = labels == best
    original_ids = np.flatnonzero(keep).astype(np.int64)
    new_id = -np.ones(n, dtype=np.int64)
    new_id[original_ids] = np.arange(original_ids.shape[0])

    kept_edges = []
    kept_weights = []
    for e, members in enumerate(edge_tuples):
        if keep[members[0]]:
            kept_edges.append(tuple(int(new_id[v]) for v in members))
            kept_weights.append(float(w[e]))
    if not kept_edges:
        raise EmptyGraph("largest component has no edges")
    H = Hypergraph(int(original_ids.shape[0]), kept_edges, kept_weights)
    return H, original_ids
