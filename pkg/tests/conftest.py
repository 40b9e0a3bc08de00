import numpy as np
import pytest

from hyperlap import EdgeVertexField, Hypergraph
from hyperlap.errors import ValidationError


@pytest.fixture
def T3():
    """Single three-node edge, unit weight; all degrees 1."""
    return Hypergraph(3, [[0, 1, 2]], [1.0])


@pytest.fixture
def G2():
    """A 3-edge and a 2-edge sharing node 2; degrees (1, 1, 2, 1)."""
    return Hypergraph(4, [[0, 1, 2], [2, 3]], [1.0, 1.0])


def random_hypergraph(rng, n_lo=3, n_hi=8, m_lo=2, m_hi=5, size_hi=4, weighted=True):
    """A random connected hypergraph; resamples until the constructor accepts."""
    for _ in range(1000):
        n = int(rng.integers(n_lo, n_hi + 1))
        m = int(rng.integers(m_lo, m_hi + 1))
        edges = []
        for _ in range(m):
            size = int(rng.integers(2, min(size_hi, n) + 1))
            edges.append(np.sort(rng.choice(n, size=size, replace=False)).tolist())
        if weighted:
            weights = rng.uniform(0.5, 2.0, size=m).tolist()
        else:
            weights = [1.0] * m
        try:
            return Hypergraph(n, edges, weights)
        except ValidationError:
            continue
    raise RuntimeError("failed to sample a connected hypergraph")


def random_field(rng, H):
    return EdgeVertexField(H, rng.standard_normal(H.total_membership))


def pair_graph(rng, n_lo=4, n_hi=9, extra_lo=1, extra_hi=6):
    """Random connected hypergraph whose edges all have exactly two nodes."""
    for _ in range(1000):
        n = int(rng.integers(n_lo, n_hi + 1))
        edges = [[i, i + 1] for i in range(n - 1)]
        for _ in range(int(rng.integers(extra_lo, extra_hi + 1))):
            u, v = rng.choice(n, size=2, replace=False)
            edges.append(sorted((int(u), int(v))))
        dedup = sorted({tuple(e) for e in edges})
        weights = rng.uniform(0.5, 2.0, size=len(dedup)).tolist()
        try:
            return Hypergraph(n, [list(e) for e in dedup], weights)
        except ValidationError:
            continue
    raise RuntimeError("failed to sample a pair graph")
