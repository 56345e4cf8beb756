"""Local proximal best responses.

Each agent solves ``argmin_{y in X_i} f_i(y, ctx) + |y - center|^2 / alpha``.
The proximal weight is ``1/alpha`` without a factor 1/2, so stationarity
reads ``0 in d f_i(y) + (2/alpha)(y - center) + N_{X_i}(y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ppnash.game_model import Game, GameError

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class ProxRequest:
    agent: int
    context: np.ndarray
    center: np.ndarray
    alpha: float
    tolerance: float = DEFAULT_TOL
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not self.alpha > 0:
            raise GameError("alpha must be positive")
        if not self.tolerance > 0:
            raise GameError("tolerance must be positive")
        object.__setattr__(self, "context", np.atleast_1d(np.asarray(self.context, dtype=float)))
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=float)))


@dataclass(frozen=True)
class ProxResult:
    y_star: np.ndarray
    optimality_residual: float
    inner_iterations: int
    exact: bool
    method: str
    budget_exhausted: bool = False


def objective(req: ProxRequest, game: Game, y):
    y = np.asarray(y, dtype=float)
    d = y - req.center
    return float(game.costs[req.agent].value(y, req.context)) + float(d @ d) / req.alpha


def optimality_residual(req: ProxRequest, game: Game, y):
    """``dist(0, d f_i(y) + (2/alpha)(y - center) + N_{X_i}(y))``."""
    cost = game.costs[req.agent]
    lo, hi = cost.subdifferential(y, req.context)
    shift = (2.0 / req.alpha) * (y - req.center)
    return game.feasible_sets[req.agent].residual(y, lo + shift, hi + shift)


def solve_prox(req: ProxRequest, game: Game) -> ProxResult:
    """Exact update when the cost registers a closed form, iterative otherwise."""
    i = req.agent
    cost = game.costs[i]
    fs = game.feasible_sets[i]
    if req.center.size != game.dims[i] or req.context.size != game.n - game.dims[i]:
        raise GameError("prox request dimensions do not match the game")
    if cost.prox is not None and fs.kind == "whole-space":
        y = np.asarray(cost.prox(req.center, req.context, req.alpha), dtype=float)
        return ProxResult(y, optimality_residual(req, game, y), 0, True, "closed-form")
    if cost.quadratic_own is not None:
        H, g = cost.quadratic_own(req.context)
        H = np.atleast_2d(np.asarray(H, dtype=float))
        A = H + (2.0 / req.alpha) * np.eye(H.shape[0])
        y = np.linalg.solve(A, (2.0 / req.alpha) * req.center - np.asarray(g, float))
        # clipping is exact for a 1-D convex objective on an interval
        if fs.kind == "whole-space" or (fs.kind == "box" and y.size == 1):
            y = fs.project(y)
            return ProxResult(y, optimality_residual(req, game, y), 0, True, "closed-form")
        return iterative_prox(req, game, start=fs.project(y))
    return iterative_prox(req, game)


def iterative_prox(req: ProxRequest, game: Game, start=None) -> ProxResult:
    """Generic solver: root bracketing for ``n_i = 1``, projected (sub)gradient otherwise."""
    if game.dims[req.agent] == 1:
        return _prox_1d(req, game)
    return _prox_nd(req, game, start)


def _prox_1d(req, game):
    i = req.agent
    cost = game.costs[i]
    fs = game.feasible_sets[i]
    c = float(req.center[0])
    k2 = 2.0 / req.alpha
    lower = float(fs.lower[0]) if fs.kind == "box" else -math.inf
    upper = float(fs.upper[0]) if fs.kind == "box" else math.inf
    evals = 0

    def interval(y):
        lo, hi = cost.subdifferential(np.array([y]), req.context)
        return float(lo[0]) + k2 * (y - c), float(hi[0]) + k2 * (y - c)

    def canonical(y):
        nonlocal evals
        evals += 1
        return float(cost.partial_subgradient(np.array([y]), req.context)[0]) + k2 * (y - c)

    def result(y, method):
        y = np.array([y])
        res = optimality_residual(req, game, y)
        return ProxResult(y, res, evals, False, method, budget_exhausted=res > req.tolerance)

    # kinks and active bounds first: the stationarity inclusion may hold there exactly
    if cost.kinks is not None:
        for kink in np.atleast_1d(cost.kinks(req.context)):
            if lower <= kink <= upper:
                lo, hi = interval(float(kink))
                if lo <= 0.0 <= hi:
                    return result(float(kink), "kink")
    if lower > -math.inf and interval(lower)[1] >= 0.0:
        return result(lower, "bound")
    if upper < math.inf and interval(upper)[0] <= 0.0:
        return result(upper, "bound")

    start = min(max(c, lower), upper)
    f0 = canonical(start)
    if f0 == 0.0:
        return result(start, "bracket")
    direction = -1.0 if f0 > 0 else 1.0
    width = max(1.0, abs(start)) * 1e-2
    a, fa = start, f0
    while evals < req.budget:
        b = a + direction * width
        b = min(max(b, lower), upper)
        fb = canonical(b)
        if fb == 0.0:
            return result(b, "bracket")
        if (fb > 0) != (fa > 0):
            break
        a, fa = b, fb
        width *= 2.0
    else:
        return result(a, "bracket")
    lo_, hi_ = (a, b) if a < b else (b, a)
    try:
        y, info = optimize.brentq(canonical, lo_, hi_, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                                  maxiter=max(req.budget - evals, 1), full_output=True,
                                  disp=False)
    except ValueError:
        y = 0.5 * (lo_ + hi_)
    return result(y, "brent")


def _prox_nd(req, game, start=None):
    i = req.agent
    cost = game.costs[i]
    fs = game.feasible_sets[i]
    y = fs.project(req.center if start is None else start)
    k2 = 2.0 / req.alpha
    smooth = cost.smoothness == "smooth"
    best, best_res = y.copy(), optimality_residual(req, game, y)
    # Lipschitz guess for the gradient of the proximal objective, refined by backtracking
    L = k2 + 1.0
    for it in range(1, req.budget + 1):
        if best_res <= req.tolerance:
            return ProxResult(best, best_res, it - 1, False, "projected-gradient")
        g = cost.partial_subgradient(y, req.context) + k2 * (y - req.center)
        if smooth:
            f_y = objective(req, game, y)
            while True:
                y_new = fs.project(y - g / L)
                d = y_new - y
                if objective(req, game, y_new) <= f_y + g @ d + 0.5 * L * (d @ d) + 1e-15 * abs(f_y):
                    break
                L *= 2.0
            L = max(L / 1.5, k2)
        else:
            # strongly convex subgradient schedule with modulus 2/alpha
            y_new = fs.project(y - g / (L + k2 * it))
        y = y_new
        res = optimality_residual(req, game, y)
        if res < best_res:
            best, best_res = y.copy(), res
    return ProxResult(best, best_res, req.budget, False, "projected-gradient",
                      budget_exhausted=best_res > req.tolerance)


def prox_continuity_probe(game: Game, i, base_context, radius, samples=64, alpha=0.5, seed=0):
    """Largest change of the local argmin when ``base_context`` moves within ``radius``.

    ``base_context`` is agent ``i``'s full mixed estimate (length ``n``);
    perturbations are uniform in the Euclidean ball.
    """
    if not radius > 0:
        raise GameError("radius must be positive")
    rng = np.random.default_rng(seed)
    base = np.asarray(base_context, dtype=float)
    y0 = _solve_at(game, i, base, alpha)
    worst = 0.0
    for _ in range(samples):
        u = rng.normal(size=base.size)
        u *= radius * rng.random() ** (1.0 / base.size) / np.linalg.norm(u)
        worst = max(worst, float(np.linalg.norm(_solve_at(game, i, base + u, alpha) - y0)))
    return worst


def _solve_at(game, i, estimate, alpha):
    own, rest = game.split(estimate, i)
    return solve_prox(ProxRequest(i, rest, own, alpha), game).y_star
