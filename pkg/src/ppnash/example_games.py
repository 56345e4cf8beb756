"""The four two-agent example games, each with ``n = 2`` and ``X = R^2``.

======  =====================================================  ==============
id      costs / mapping                                        NE
======  =====================================================  ==============
1       f1 = x1^2 (x2^2 + 1),  f2 = x2^2 (x1^2 + 1)            (0, 0)
2       F = col(x1^3, 0) + [[2, 1], [1, 2]] x + col(5, 4)      Newton root
3       F = col(x1^3 (x2^4 + 1), 0) + [[2, 1], [1, 2]] x       (0, 0)
4       f1 = x1^2 - |x1||x2|,  f2 = x2^2 + x2 x1               (0, 0)
======  =====================================================  ==============

Example 4 is kept exactly as printed.  Note that ``f1(., x2)`` has a
concave kink at ``x1 = 0`` whenever ``x2 != 0``, so it is not convex there;
its ``bounds`` return the interval ``[-|x2|, |x2|]`` spanned by the one-sided
derivatives, and its local proximal problem is solved exactly by comparing
the two smooth branches.
"""

import numpy as np

from ppnash.game_model import CostOracle, Game, GameError, WholeSpace


def _first(a):
    return np.asarray(a, dtype=float)[..., 0]


def _col(v):
    return np.asarray(v, dtype=float)[..., None]


def _example_1():
    def value(y, z):
        return _first(y) ** 2 * (_first(z) ** 2 + 1)

    def gradient(y, z):
        return _col(2 * _first(y) * (_first(z) ** 2 + 1))

    def quadratic_own(z):
        return np.array([[2 * (_first(z) ** 2 + 1)]]), np.zeros(1)

    cost = CostOracle(value, gradient, "smooth", quadratic_own=quadratic_own)
    return [cost, cost]


def _example_2():
    def v1(y, z):
        y, z = _first(y), _first(z)
        return y ** 4 / 4 + y ** 2 + y * z + 5 * y

    def g1(y, z):
        y, z = _first(y), _first(z)
        return _col(y ** 3 + 2 * y + z + 5)

    def v2(y, z):
        y, z = _first(y), _first(z)
        return y ** 2 + y * z + 4 * y

    def g2(y, z):
        return _col(2 * _first(y) + _first(z) + 4)

    def q2(z):
        return np.array([[2.0]]), np.array([float(_first(z)) + 4.0])

    return [CostOracle(v1, g1, "smooth"), CostOracle(v2, g2, "smooth", quadratic_own=q2)]


def _example_3():
    def v1(y, z):
        y, z = _first(y), _first(z)
        return y ** 4 * (z ** 4 + 1) / 4 + y ** 2 + y * z

    def g1(y, z):
        y, z = _first(y), _first(z)
        return _col(y ** 3 * (z ** 4 + 1) + 2 * y + z)

    return [CostOracle(v1, g1, "smooth"), _linear_response_cost()]


def _linear_response_cost():
    # f(y, z) = y^2 + y z
    def value(y, z):
        y, z = _first(y), _first(z)
        return y ** 2 + y * z

    def gradient(y, z):
        return _col(2 * _first(y) + _first(z))

    def quadratic_own(z):
        return np.array([[2.0]]), np.array([float(_first(z))])

    return CostOracle(value, gradient, "smooth", quadratic_own=quadratic_own)


def _example_4():
    def value(y, z):
        y, z = _first(y), _first(z)
        return y ** 2 - np.abs(y) * np.abs(z)

    def gradient(y, z):
        # sign(0) = 0 picks the midpoint of [-|z|, |z|] at the kink
        y, z = _first(y), _first(z)
        return _col(2 * y - np.sign(y) * np.abs(z))

    def bounds(y, z):
        g = gradient(y, z)
        at_kink = _col(_first(y) == 0.0)
        spread = _col(np.abs(_first(z)))
        return np.where(at_kink, g - spread, g), np.where(at_kink, g + spread, g)

    def kinks(z):
        return np.zeros(1)

    def prox(center, z, alpha):
        return np.array([_prox_example_4(float(_first(center)), float(_first(z)), alpha)])

    f1 = CostOracle(value, gradient, "nonsmooth-coupled", bounds=bounds,
                    kinks=kinks, prox=prox)
    return [f1, _linear_response_cost()]


def _prox_example_4(center, z, alpha):
    """Global minimizer of ``y^2 - |y||z| + (y - center)^2 / alpha``.

    Each half-line carries a strongly convex quadratic; the candidates are
    the two branch minimizers (when they fall on their half-line) and the
    kink.  Ties are broken towards the smallest ``|y|``, then ``y >= 0``.
    """
    k = 2.0 * (1.0 + 1.0 / alpha)
    c = abs(z)
    cands = [0.0]
    y_pos = (2.0 * center / alpha + c) / k
    if y_pos > 0:
        cands.append(y_pos)
    y_neg = (2.0 * center / alpha - c) / k
    if y_neg < 0:
        cands.append(y_neg)

    def obj(y):
        return y * y - abs(y) * c + (y - center) ** 2 / alpha

    return min(cands, key=lambda y: (obj(y), abs(y), y < 0))


_BUILDERS = {1: _example_1, 2: _example_2, 3: _example_3, 4: _example_4}


def make_example_game(example_id):
    """Return built-in example game ``example_id`` (1 to 4)."""
    try:
        costs = _BUILDERS[int(example_id)]()
    except (KeyError, ValueError, TypeError):
        raise GameError(f"unknown example game {example_id!r}; expected 1, 2, 3 or 4") from None
    return Game((1, 1), costs, [WholeSpace(1), WholeSpace(1)], name=f"example-{int(example_id)}")


#: Nash equilibria where they are known in closed form
KNOWN_EQUILIBRIA = {1: np.zeros(2), 3: np.zeros(2), 4: np.zeros(2)}
