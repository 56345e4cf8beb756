import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import dense_augmented_quadratic
from ppnash.example_games import make_example_game
from ppnash.game_model import brute_force_ne, random_quadratic_game, zero_game
from ppnash.network import complete_graph, random_connected_graph
from ppnash.operators import (SelectionOperator, augmented_A_residual, augmented_F, consensus_tools,
                              consensus_vector, extended_mapping, game_mapping, laplacian_part,
                              lifted_extended_mapping, phi_norm)


def test_extended_mapping_at_consensus_equals_F():
    g = make_example_game(2)
    x = np.array([0.3, -0.7])
    assert np.allclose(extended_mapping(g)(consensus_vector(x, 2)), g.mapping(x))


def test_extended_mapping_example1_hand_value():
    g = make_example_game(1)
    assert np.allclose(extended_mapping(g)(np.array([1.0, 2, 3, 4])), [10, 80])


def test_extended_mapping_zero_game():
    assert np.all(extended_mapping(zero_game((1, 1, 1)))(np.arange(9.0)) == 0)


def test_augmented_F_vanishes_at_consensus_ne():
    g = make_example_game(2)
    xs = brute_force_ne(g).x_star
    assert np.allclose(augmented_F(g, complete_graph(2), 0.4)(consensus_vector(xs, 2)), 0, atol=1e-12)


def test_augmented_F_alpha_zero_is_laplacian():
    g, net = make_example_game(3), random_connected_graph(2, seed=1)
    x = np.random.default_rng(0).normal(size=4)
    F0 = augmented_F(g, net, 0.0)
    assert np.allclose(F0(x), laplacian_part(net, 2)(x))
    assert x @ F0(x) >= -1e-15


def test_augmented_F_example2_origin():
    out = augmented_F(make_example_game(2), complete_graph(2), 0.1)(np.zeros(4))
    assert np.allclose(out, [0.5, 0, 0, 0.4])


@given(st.integers(0, 1000), st.floats(0.01, 2))
def test_augmented_F_matches_dense_oracle(seed, alpha):
    N = 3
    g = random_quadratic_game(N, seed=seed)
    net = random_connected_graph(N, seed=seed)
    Q = np.column_stack([g.mapping(e) - g.mapping(np.zeros(N)) for e in np.eye(N)])
    c = g.mapping(np.zeros(N))
    M, b = dense_augmented_quadratic(Q, c, net.W, alpha)
    x = np.random.default_rng(seed).normal(size=N * N)
    assert np.allclose(augmented_F(g, net, alpha)(x), M @ x + b, atol=1e-12)


def test_A_residual_equilibrium_and_origin():
    net = complete_graph(2)
    g1 = make_example_game(1)
    assert augmented_A_residual(g1, net, 0.5, consensus_vector(brute_force_ne(g1).x_star, 2)) <= 1e-8
    alpha = 0.3
    r0 = augmented_A_residual(make_example_game(2), net, alpha, np.zeros(4))
    assert r0 == pytest.approx(alpha * np.sqrt(41))


def test_A_residual_alpha_zero_at_consensus():
    g = make_example_game(3)
    assert augmented_A_residual(g, complete_graph(2), 0.0, consensus_vector([1.5, -2.0], 2)) == 0.0


def test_A_residual_example4_uses_minimal_norm_element():
    # at y = (0, 1) the first block of F(y) is [-1, 1], whose minimal-norm element is 0;
    # at a consensus point the residual is alpha times the minimal-norm element of F(y)
    g, net = make_example_game(4), complete_graph(2)
    y = np.array([0.0, 1.0])
    expected = 0.5 * np.linalg.norm([0.0, 2.0])
    assert augmented_A_residual(g, net, 0.5, consensus_vector(y, 2)) == pytest.approx(expected)


def test_consensus_tools():
    out = consensus_tools(np.array([1.0, 0, 0, 0]), 2, 2)
    assert np.allclose(out["mean"], [0.5, 0]) and out["residual"] == pytest.approx(np.sqrt(0.5))
    y = consensus_tools(consensus_vector([2.0, 3.0], 3), 3, 2)
    assert y["residual"] == 0 and np.allclose(y["mean"], [2, 3])
    z = consensus_tools(np.zeros(4), 2, 2)
    assert z["residual"] == 0 and np.all(z["mean"] == 0)


@given(st.integers(0, 500))
def test_selection_adjoint_identity(seed):
    g = random_quadratic_game(3, dims=(1, 2, 1), seed=seed)
    R = SelectionOperator(g)
    rng = np.random.default_rng(seed)
    x, u = rng.normal(size=g.N * g.n), rng.normal(size=g.n)
    assert R.apply_all(x) @ u == pytest.approx(x @ R.adjoint(u))


@given(st.integers(2, 8), st.integers(0, 500))
def test_laplacian_monotone_and_phi_positive(N, seed):
    net = random_connected_graph(N, seed=seed)
    d = np.random.default_rng(seed).normal(size=N * 2)
    assert d @ laplacian_part(net, 2)(d) >= -1e-12
    assert phi_norm(net, 2, d) ** 2 >= (1 + np.linalg.eigvalsh(net.W).min()) * (d @ d) - 1e-9


def test_lifted_and_game_mapping_dimensions():
    g = make_example_game(1)
    assert lifted_extended_mapping(g).dim == 4 and game_mapping(g).dim == 2
