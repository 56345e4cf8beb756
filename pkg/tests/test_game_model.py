import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import EX2_NE, example2_ne
from ppnash.example_games import KNOWN_EQUILIBRIA, make_example_game
from ppnash.game_model import (Box, CostOracle, Game, GameError, Halfspaces, WholeSpace, brute_force_ne,
                               check_convexity, check_subgradients, finite_difference_error,
                               quadratic_game, random_quadratic_game, with_bystanders, zero_game)


@pytest.mark.parametrize("ex, expected", [(1, (0, 0)), (3, (0, 0)), (2, (5, 4))])
def test_mapping_at_origin(ex, expected):
    assert np.allclose(make_example_game(ex).mapping(np.zeros(2)), expected)


def test_example1_mapping_at_ones():
    assert np.allclose(make_example_game(1).mapping(np.ones(2)), [4, 4])


def test_example4_canonical_value_and_endpoints():
    g = make_example_game(4)
    x = np.array([0.0, 1.0])
    assert np.allclose(g.mapping(x), [0, 2])
    lo, hi = g.mapping_bounds(x)
    assert np.allclose(lo, [-1, 2]) and np.allclose(hi, [1, 2])
    # one-sided difference quotients of f1(., 1) at 0 form the interval ends
    f1 = lambda y: g.cost(0, np.array([y, 1.0]))
    h = 1e-7
    assert (f1(h) - f1(0)) / h == pytest.approx(-1, abs=1e-6)
    assert (f1(0) - f1(-h)) / h == pytest.approx(1, abs=1e-6)
    ends = g.costs[0].endpoints(np.array([0.0]), np.array([1.0]))
    assert sorted(float(e[0]) for e in ends) == [-1.0, 1.0]


def test_unknown_example_rejected():
    with pytest.raises(GameError, match="unknown example"):
        make_example_game(7)


@pytest.mark.parametrize("ex", [1, 2, 3])
def test_gradients_match_finite_differences(ex):
    assert finite_difference_error(make_example_game(ex)) < 1e-6


@pytest.mark.parametrize("ex", [1, 3, 4])
def test_ne_oracle_closed_form(ex):
    res = brute_force_ne(make_example_game(ex))
    assert res.residual <= 1e-10
    assert np.allclose(res.x_star, KNOWN_EQUILIBRIA[ex], atol=1e-8)


def test_ne_oracle_example2_matches_independent_newton():
    res = brute_force_ne(make_example_game(2))
    assert np.allclose(example2_ne(), EX2_NE, atol=1e-14)
    assert np.allclose(res.x_star, EX2_NE, atol=1e-10)
    assert res.x_star == pytest.approx([-1.1037, -1.4482], abs=1e-4)


def test_ne_oracle_respects_box():
    # unconstrained NE of F = x - 3 is 3; the box pins it at the upper bound 1
    g = quadratic_game(np.eye(2), -3 * np.ones(2), (1, 1), [Box([-1], [1]), Box([-1], [1])])
    res = brute_force_ne(g)
    assert np.allclose(res.x_star, 1) and res.residual <= 1e-9


def test_convexity_example1_passes():
    assert check_convexity(make_example_game(1), samples=1000).passed


def test_convexity_negative_control_has_witness():
    concave = CostOracle(lambda y, z: -y[..., 0] ** 2, lambda y, z: -2 * y)
    g = Game((1, 1), [concave, concave], [WholeSpace(1), WholeSpace(1)])
    rep = check_convexity(g, samples=1000)
    assert not rep.passed and rep.witness is not None
    w = rep.witness
    t, a, b, z = w["t"], w["a"], w["b"], w["x_minus_i"]
    f = lambda y: g.costs[w["agent"]].value(np.atleast_1d(y), z)
    assert f(t * a + (1 - t) * b) > t * f(a) + (1 - t) * f(b)


def test_convexity_example4_as_printed_is_not_convex():
    # f1 = y^2 - |y||z| has a concave kink at y = 0 whenever z != 0
    rep = check_convexity(make_example_game(4), samples=1000)
    assert not rep.passed
    assert rep.witness["agent"] == 0
    assert check_subgradients(make_example_game(4)) > 0


@pytest.mark.parametrize("ex", [1, 2, 3])
def test_subgradients_sound_for_convex_examples(ex):
    assert check_subgradients(make_example_game(ex)) == 0


def test_quadratic_game_rejects_indefinite_own_block():
    with pytest.raises(GameError, match="positive semidefinite"):
        quadratic_game(np.array([[-1.0, 0], [0, 1]]), np.zeros(2), (1, 1))


def test_zero_game_mapping_vanishes():
    g = zero_game((2, 1))
    assert np.all(g.mapping(np.arange(3.0)) == 0)


def test_bystanders_preserve_equilibrium():
    g = with_bystanders(make_example_game(2), 2)
    assert g.N == 4
    x = np.concatenate([EX2_NE, [0, 0]])
    assert g.ne_residual(x) <= 1e-12


@given(st.integers(2, 5), st.integers(0, 10_000))
def test_random_quadratic_games_strongly_monotone(N, seed):
    g = random_quadratic_game(N, seed=seed, mu=0.5)
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=(2, g.n))
    assert (g.mapping(x) - g.mapping(y)) @ (x - y) >= 0.5 * np.sum((x - y) ** 2) - 1e-9


@given(st.lists(st.floats(-20, 20), min_size=2, max_size=2))
def test_box_projection_is_idempotent(v):
    box = Box([-1, 0], [1, 2])
    p = box.project(np.array(v))
    assert box.contains(p) and np.array_equal(box.project(p), p)


def test_halfspace_projection_and_residual():
    hs = Halfspaces(np.array([[1.0, 1.0]]), np.array([1.0]))
    p = hs.project(np.array([2.0, 2.0]))
    assert np.allclose(p, [0.5, 0.5], atol=1e-10)
    # at p the normal cone is the ray t(1, 1), which cancels v = -(1, 1) exactly
    assert hs.residual(p, np.array([-1.0, -1.0]), np.array([-1.0, -1.0])) <= 1e-9
    assert hs.residual(p, np.array([1.0, -1.0]), np.array([1.0, -1.0])) > 0.5
