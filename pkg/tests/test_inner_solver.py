import numpy as np
import pytest
from hypothesis import given, strategies as st

from families import absolute, quadratic, quartic, random_instance
from oracles import grid_golden_min, real_cubic_root
from ppnash.example_games import make_example_game
from ppnash.game_model import Box, CostOracle, Game, GameError, WholeSpace, zero_game
from ppnash.inner_solver import ProxRequest, optimality_residual, prox_continuity_probe, solve_prox


def prox(game, center, z, alpha, agent=0, **kw):
    return solve_prox(ProxRequest(agent, np.atleast_1d(z), np.atleast_1d(center), alpha, **kw), game)


def test_quadratic_closed_form_half():
    g, _ = quadratic(2.0, 0.0)  # f = y^2
    assert prox(g, 1.0, 0.0, 1.0).y_star[0] == pytest.approx(0.5, abs=1e-15)


def test_quadratic_iterative_matches_closed_form():
    g, _ = quadratic(2.0, 0.0, closed_form=False)
    res = prox(g, 1.0, 0.0, 1.0)
    assert abs(res.y_star[0] - 0.5) <= 1e-8 and not res.budget_exhausted


def test_zero_cost_returns_center():
    g = zero_game((2, 1))
    res = solve_prox(ProxRequest(0, [0.0], [1.5, -2.0], 0.7), g)
    assert np.array_equal(res.y_star, [1.5, -2.0])


def test_example2_agent1_matches_cubic_root():
    # stationarity y^3 + 2y + 5 + 20y = 0 at center 0, context 0, alpha = 0.1
    res = prox(make_example_game(2), 0.0, 0.0, 0.1)
    assert res.y_star[0] == pytest.approx(-0.2267428465709568, abs=1e-12)
    assert res.y_star[0] == pytest.approx(real_cubic_root(1, 0, 22, 5), abs=1e-8)


def test_absolute_value_soft_threshold_at_zero():
    # |y| + (y - 0.3)^2: 0 in [-1, 1] + 2(0 - 0.3)
    g, oracle = absolute(1.0, 0.0)
    res = prox(g, 0.3, 0.0, 1.0)
    assert res.y_star[0] == 0.0 and oracle(0.3, 0.0, 1.0) == 0.0
    assert res.optimality_residual == 0.0


def test_example4_prox_is_off_the_kink():
    # y^2 - 0.4|y| + 2 y^2 is minimized at |y| = 1/15, not at the kink
    res = prox(make_example_game(4), 0.0, 0.4, 0.5)
    obj = lambda y: y * y - 0.4 * abs(y) + (y - 0.0) ** 2 / 0.5
    ref = grid_golden_min(obj, -1, 1)
    assert abs(res.y_star[0]) == pytest.approx(1 / 15, abs=1e-12)
    assert abs(res.y_star[0]) == pytest.approx(abs(ref), abs=1e-8)
    assert obj(res.y_star[0]) <= obj(0.0) - 1e-3


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.05, 5))
def test_example4_prox_is_global_minimizer(c, z, alpha):
    y = prox(make_example_game(4), c, z, alpha).y_star[0]
    obj = lambda t: t * t - abs(t) * abs(z) + (t - c) ** 2 / alpha
    ys = np.linspace(-8, 8, 4001)
    assert obj(y) <= min(obj(t) for t in ys) + 1e-12


def test_box_constrained_prox_clips():
    g, _ = quadratic(2.0, 0.0)
    g = Game(g.dims, g.costs, [Box([0.6], [2.0]), WholeSpace(1)])
    res = prox(g, 1.0, 0.0, 1.0)
    assert res.y_star[0] == 0.6 and res.optimality_residual == 0.0


def test_budget_exhaustion_is_reported():
    g, _ = quartic(1.0, 0.5, 3.0)
    res = prox(g, 2.0, 0.0, 0.5, budget=3, tolerance=1e-14)
    assert res.budget_exhausted and res.optimality_residual > 1e-14


def test_nd_projected_gradient():
    # 2-D own block f = 0.5 |y|^2 + y1^4 / 4 on the box [0, 1]^2
    cost = CostOracle(lambda y, z: 0.5 * np.sum(y ** 2, -1) + y[..., 0] ** 4 / 4,
                      lambda y, z: y + np.stack([y[..., 0] ** 3, 0 * y[..., 1]], -1))
    g = Game((2, 1), [cost, zero_game((1,)).costs[0]], [Box([0, 0], [1, 1]), WholeSpace(1)])
    res = solve_prox(ProxRequest(0, [0.0], [2.0, -1.0], 1.0), g)
    assert res.optimality_residual <= 1e-10
    y1 = real_cubic_root(1, 0, 3, -4)  # y^3 + y + 2(y - 2) = 0
    assert np.allclose(res.y_star, [min(y1, 1.0), 0.0], atol=1e-8)


def test_invalid_requests():
    with pytest.raises(GameError):
        ProxRequest(0, [0.0], [0.0], 0.0)
    with pytest.raises(GameError, match="dimensions"):
        solve_prox(ProxRequest(0, [0.0, 1.0], [0.0], 1.0), make_example_game(1))


def test_repeated_calls_are_bitwise_identical():
    g = make_example_game(2)
    a, b = prox(g, 0.7, -0.3, 0.2), prox(g, 0.7, -0.3, 0.2)
    assert a.y_star.tobytes() == b.y_star.tobytes()


@given(st.integers(0, 2**31 - 1))
def test_random_1d_instances_match_oracles(seed):
    kind, game, oracle, c, z, alpha = random_instance(np.random.default_rng(seed))
    res = prox(game, c, z, alpha)
    assert res.y_star[0] == pytest.approx(oracle(c, z, alpha), abs=1e-8), kind
    assert optimality_residual(ProxRequest(0, [z], [c], alpha), game, res.y_star) <= 1e-6


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.05, 5))
def test_convex_prox_is_nonexpansive_in_center(c1, c2, z, h, alpha):
    # prox of a convex function is nonexpansive in the center
    g, _ = quartic(1.0, 0.5, h)
    y1, y2 = prox(g, c1, z, alpha).y_star[0], prox(g, c2, z, alpha).y_star[0]
    assert abs(y1 - y2) <= abs(c1 - c2) + 1e-9


def test_continuity_probe_example1_small_radius():
    dev = prox_continuity_probe(make_example_game(1), 0, np.array([0.5, 1.0]), 1e-4)
    assert dev <= 1e-3


def test_continuity_probe_quadratic_ladder():
    g, _ = quadratic(1.0, 0.5)
    devs = [prox_continuity_probe(g, 0, np.array([0.2, -0.4]), r) for r in (1e-2, 1e-4, 1e-6)]
    assert devs[0] > devs[1] > devs[2]


def test_example4_argmin_continuous_when_context_crosses_zero():
    # for a fixed nonzero center the argmin moves with slope at most 1/(2 + 2/alpha) in z
    g, alpha, c = make_example_game(4), 0.5, 0.3
    zs = np.linspace(-0.2, 0.2, 801)
    ys = np.array([prox(g, c, z, alpha).y_star[0] for z in zs])
    modulus = 1 / (2 + 2 / alpha)
    assert np.max(np.abs(np.diff(ys)) / np.diff(zs)) <= modulus + 1e-9
