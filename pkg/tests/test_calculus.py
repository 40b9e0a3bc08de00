import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperlap import (
    EdgeVertexField,
    Hypergraph,
    dirichlet_sum,
    divergence,
    edge_p_mean,
    gradient,
    gradient_norm,
    gradient_profile,
    inner_product_edges,
    inner_product_nodes,
    slot_index,
)
from hyperlap.errors import (
    FieldMismatch,
    InvalidP,
    LengthMismatch,
    NodeIdOutOfRange,
)

from conftest import random_field, random_hypergraph

PSI3 = np.array([1.0, 0.0, 0.0])


def test_gradient_on_triangle(T3):
    g = gradient(T3, PSI3)
    assert g[0, 0] == pytest.approx(-np.sqrt(2), abs=1e-12)
    assert g[0, 1] == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert g[0, 2] == pytest.approx(1 / np.sqrt(2), abs=1e-12)


def test_gradient_second_toy(G2):
    g = gradient(G2, np.array([1.0, 0.0, 0.0, 0.0]))
    # anchor at the shared node of the 3-edge: (1/sqrt2)(sum - 3*psi_t(2))
    assert g[0, 2] == pytest.approx(1 / np.sqrt(2), abs=1e-12)


def test_gradient_vanishes_on_sqrt_degree_multiples():
    rng = np.random.default_rng(1)
    for _ in range(20):
        H = random_hypergraph(rng)
        c = rng.uniform(-2, 2)
        g = gradient(H, c * H.sqrt_degrees)
        assert np.max(np.abs(g.values)) < 1e-12


def test_gradient_norms_on_triangle(T3):
    assert gradient_norm(T3, PSI3, 0) == pytest.approx(2 / np.sqrt(6), abs=1e-12)
    assert gradient_norm(T3, PSI3, 1) == pytest.approx(1 / np.sqrt(6), abs=1e-12)
    assert gradient_norm(T3, PSI3, 2) == pytest.approx(1 / np.sqrt(6), abs=1e-12)
    with pytest.raises(NodeIdOutOfRange):
        gradient_norm(T3, PSI3, 3)


def test_profile_matches_scalar_norms():
    rng = np.random.default_rng(2)
    for _ in range(10):
        H = random_hypergraph(rng)
        psi = rng.standard_normal(H.num_nodes)
        prof = gradient_profile(H, psi)
        for v in range(H.num_nodes):
            assert prof.node_norms[v] == pytest.approx(
                gradient_norm(H, psi, v), abs=1e-12
            )


def test_dirichlet_sum_triangle(T3):
    assert dirichlet_sum(T3, PSI3, 1.0) == pytest.approx(4 / np.sqrt(6), abs=1e-12)
    assert dirichlet_sum(T3, PSI3, 2.0) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidP):
        dirichlet_sum(T3, PSI3, 0.5)


def test_dirichlet_shift_and_scale():
    rng = np.random.default_rng(3)
    for _ in range(20):
        H = random_hypergraph(rng)
        psi = rng.standard_normal(H.num_nodes)
        c = rng.uniform(-3, 3)
        for p in (1.0, 1.5, 2.0, 2.5, 3.0):
            base = dirichlet_sum(H, psi, p)
            shifted = dirichlet_sum(H, psi + c * H.sqrt_degrees, p)
            scaled = dirichlet_sum(H, c * psi, p)
            assert shifted == pytest.approx(base, abs=1e-10 * (1 + base))
            assert scaled == pytest.approx(
                abs(c) ** p * base, abs=1e-10 * (1 + abs(c) ** p * base)
            )


def test_norm_consistency():
    rng = np.random.default_rng(4)
    for _ in range(20):
        H = random_hypergraph(rng)
        psi = rng.standard_normal(H.num_nodes)
        g = gradient(H, psi)
        s2 = dirichlet_sum(H, psi, 2.0)
        total = sum(gradient_norm(H, psi, v) ** 2 for v in range(H.num_nodes))
        assert total == pytest.approx(s2, abs=1e-12 * (1 + s2))
        assert inner_product_edges(H, g, g) == pytest.approx(s2, abs=1e-12 * (1 + s2))


def test_edge_p_mean_triangle(T3):
    prof = gradient_profile(T3, PSI3)
    assert edge_p_mean(T3, prof.node_norms, 0, 1.0) == pytest.approx(
        4 / (3 * np.sqrt(6)), abs=1e-12
    )


def test_edge_p_mean_uniform_and_formula(G2):
    uniform = np.full(4, 0.7)
    for p in (1.0, 2.0, 3.5):
        assert edge_p_mean(G2, uniform, 0, p) == pytest.approx(0.7, abs=1e-12)
    prof = gradient_profile(G2, np.array([1.0, 0.0, 0.0, 0.0]))
    n2, n3 = prof.node_norms[2], prof.node_norms[3]
    assert edge_p_mean(G2, prof.node_norms, 1, 2.0) == pytest.approx(
        np.sqrt((n2**2 + n3**2) / 2), abs=1e-12
    )
    with pytest.raises(InvalidP):
        edge_p_mean(G2, uniform, 0, 0.0)


def test_inner_product_nodes():
    assert inner_product_nodes(np.ones(3), np.ones(3)) == 3.0
    assert inner_product_nodes([1.0, 0, 0], [0, 1.0, 0]) == 0.0
    assert inner_product_nodes([1.0, 2.0], [3.0, -1.0]) == 1.0
    with pytest.raises(LengthMismatch):
        inner_product_nodes([1.0], [1.0, 2.0])


def test_inner_product_edges(T3):
    g = gradient(T3, PSI3)
    assert inner_product_edges(T3, g, g) == pytest.approx(1.0, abs=1e-12)
    zero = EdgeVertexField.zeros(T3)
    assert inner_product_edges(T3, zero, g) == 0.0
    vals = np.zeros(3)
    vals[slot_index(T3, 0, 1)] = 0.8
    single = EdgeVertexField(T3, vals)
    assert inner_product_edges(T3, single, single) == pytest.approx(
        0.8**2 / 3, abs=1e-14
    )


def test_inner_product_edges_rejects_foreign_field(T3, G2):
    f = EdgeVertexField.zeros(G2)
    with pytest.raises(FieldMismatch):
        inner_product_edges(T3, f, EdgeVertexField.zeros(T3))


def test_divergence_triangle(T3):
    phi = gradient(T3, PSI3)
    assert -divergence(T3, phi)[0] == pytest.approx(1.0, abs=1e-12)


def test_divergence_of_anchor_independent_field():
    rng = np.random.default_rng(5)
    for _ in range(10):
        H = random_hypergraph(rng)
        per_edge = rng.standard_normal(H.num_edges)
        phi = EdgeVertexField(H, np.repeat(per_edge, H.edge_sizes))
        assert np.max(np.abs(divergence(H, phi))) < 1e-12
    assert np.all(divergence(H, EdgeVertexField.zeros(H)) == 0.0)


def test_adjointness():
    rng = np.random.default_rng(6)
    for _ in range(100):
        H = random_hypergraph(rng)
        psi = rng.standard_normal(H.num_nodes)
        phi = random_field(rng, H)
        lhs = inner_product_edges(H, gradient(H, psi), phi)
        rhs = inner_product_nodes(psi, divergence(H, phi))
        assert abs(lhs + rhs) < 1e-10


def test_field_validation(T3):
    with pytest.raises(FieldMismatch):
        EdgeVertexField(T3, np.zeros(2))
    with pytest.raises(FieldMismatch):
        EdgeVertexField(T3, np.array([1.0, np.inf, 0.0]))
    f = EdgeVertexField.from_function(T3, lambda e, v: 10 * e + v)
    assert f[0, 2] == 2.0
    with pytest.raises(FieldMismatch):
        slot_index(T3, 0, 3)


@settings(max_examples=25, deadline=None)
@given(scale=st.floats(-5, 5, allow_nan=False), seed=st.integers(0, 2**16))
def test_gradient_is_linear_in_psi(scale, seed):
    rng = np.random.default_rng(seed)
    H = random_hypergraph(rng)
    a = rng.standard_normal(H.num_nodes)
    b = rng.standard_normal(H.num_nodes)
    lhs = gradient(H, scale * a + b).values
    rhs = scale * gradient(H, a).values + gradient(H, b).values
    assert np.allclose(lhs, rhs, atol=1e-9)
