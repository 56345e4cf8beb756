"""The fully distributed preconditioned proximal-point (PPP) iteration.

One synchronous round, for every agent ``i``::

    x_tilde_i   = (x_i + sum_j w_ij x_j) / 2
    x_{i,-i}^+  = x_tilde_{i,-i}
    x_i^+       = argmin_{y in X_i} f_i(y, x_tilde_{i,-i}) + |y - x_tilde_{i,i}|^2 / alpha

This is the resolvent ``(Id + Phi^{-1} A_alpha)^{-1}`` with ``Phi = I + W kron I_n``,
which :func:`verify_resolvent_identity` checks numerically.
"""

from __future__ import annotations

import csv
import logging
import time
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ppnash import kernels
from ppnash.game_model import Game, GameError
from ppnash.inner_solver import DEFAULT_BUDGET, DEFAULT_TOL, ProxRequest, solve_prox
from ppnash.network import Network, lift_weight_matrix
from ppnash.operators import (SelectionOperator, as_blocks, augmented_A_residual, consensus_tools,
                              consensus_vector, inclusion_residual, laplacian_part, phi_norm,
                              project_estimates)

log = logging.getLogger(__name__)

DEFAULT_ALPHA_GRID = (1.0, 0.5, 0.1, 0.05, 0.01)
TRACE_HEADER = ("k", "fp_residual", "consensus_residual", "ne_distance", "phi_distance", "a_residual")


class InexactStepWarning(RuntimeWarning):
    """An inner proximal solve ran out of budget before reaching its tolerance."""


@dataclass
class SolverConfig:
    alpha: float
    max_outer_iterations: int = 50_000
    stop_tolerance: float = 1e-11
    consensus_tolerance: float = 1e-8
    init: object = "zeros"
    seed: Optional[int] = None
    init_box: float = 1.0
    diagnostic_cadence: int = 1
    inner_tolerance: float = DEFAULT_TOL
    inner_budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not self.alpha > 0:
            raise GameError("alpha must be positive")
        if not (self.stop_tolerance > 0 and self.consensus_tolerance > 0):
            raise GameError("tolerances must be positive")
        if self.max_outer_iterations < 1 or self.diagnostic_cadence < 1:
            raise GameError("iteration budget and diagnostic cadence must be >= 1")


@dataclass
class TraceRecord:
    k: int
    fp_residual: float
    consensus_residual: float
    ne_distance: float
    phi_distance: float
    a_residual: float

    def row(self):
        return [self.k] + [repr(float(v)) for v in asdict(self).values()][1:]


@dataclass
class IterationTrace:
    records: list = field(default_factory=list)
    status: str = "running"
    iterations: int = 0
    x_final: Optional[np.ndarray] = None
    final: dict = field(default_factory=dict)
    wall_time: float = 0.0
    inexact_steps: int = 0

    @property
    def converged(self):
        return self.status == "converged"

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TRACE_HEADER)
            for r in self.records:
                w.writerow(r.row())

    def summary(self):
        return {"status": self.status, "iterations": self.iterations,
                "final_residuals": self.final, "wall_time": self.wall_time,
                "inexact_steps": self.inexact_steps}


def initial_estimate(game: Game, config: SolverConfig):
    """Initial ``x^0`` from ``config.init``: ``"zeros"``, ``"random"`` or an explicit vector."""
    N, n = game.N, game.n
    if isinstance(config.init, str):
        if config.init == "zeros":
            x0 = np.zeros(N * n)
        elif config.init == "random":
            rng = np.random.default_rng(config.seed)
            x0 = rng.uniform(-config.init_box, config.init_box, size=N * n)
        else:
            raise GameError(f"unknown initial estimate policy {config.init!r}")
    else:
        x0 = np.asarray(config.init, dtype=float).reshape(-1)
        if x0.size == n:
            x0 = consensus_vector(x0, N)
        if x0.size != N * n:
            raise GameError(f"initial estimate must have length {n} or {N * n}")
    return project_estimates(game, x0)


def agent_update(game: Game, i, xt_i, alpha, tolerance=DEFAULT_TOL, budget=DEFAULT_BUDGET):
    """Proximal best response of agent ``i`` given its mixed estimate ``xt_i``."""
    own, rest = game.split(xt_i, i)
    return solve_prox(ProxRequest(i, rest, own, alpha, tolerance, budget), game)


def ppp_step(x, game: Game, net: Network, alpha, tolerance=DEFAULT_TOL, budget=DEFAULT_BUDGET,
             return_results=False):
    """One synchronous PPP round from the snapshot ``x`` (stacked, length ``N n``)."""
    if net.N != game.N:
        raise GameError(f"network has {net.N} nodes but the game has {game.N} agents")
    X = as_blocks(x, game.N, game.n)
    Xt = kernels.mix_estimates(net.W, X)
    Xn = Xt.copy()
    results = []
    for i in range(game.N):
        res = agent_update(game, i, Xt[i], alpha, tolerance, budget)
        if res.budget_exhausted:
            warnings.warn(f"agent {i}: inner solve stopped at residual {res.optimality_residual:.3g}",
                          InexactStepWarning, stacklevel=2)
        Xn[i, game.own_slice(i)] = res.y_star
        results.append(res)
    out = Xn.reshape(-1)
    return (out, results) if return_results else out


def verify_resolvent_identity(x_prev, x_next, game: Game, net: Network, alpha):
    """``dist(0, Phi (x^+ - x) + A_alpha(x^+))``; zero iff ``x^+ = J(x)``."""
    x_prev = np.asarray(x_prev, dtype=float).reshape(-1)
    x_next = np.asarray(x_next, dtype=float).reshape(-1)
    Wl = lift_weight_matrix(net, game.n)
    d = x_next - x_prev
    fixed = d + Wl.matvec(d) + laplacian_part(net, game.n)(x_next)
    return inclusion_residual(game, x_next, fixed, alpha)


def _diagnostics(game, net, alpha, x, x_star, fp):
    N, n = game.N, game.n
    cons = consensus_tools(x, N, n)["residual"]
    if x_star is not None:
        target = consensus_vector(x_star, N)
        ne = float(np.linalg.norm(SelectionOperator(game).apply_all(x) - x_star))
        phi = phi_norm(net, n, x - target)
    else:
        ne = phi = float("nan")
    a_res = augmented_A_residual(game, net, alpha, x)
    return cons, ne, phi, a_res


def run(game: Game, net: Network, config: SolverConfig, x_star=None,
        callback: Optional[Callable] = None) -> IterationTrace:
    """Iterate :func:`ppp_step` until the fixed-point residual drops below
    ``config.stop_tolerance`` or the budget runs out.

    ``x_star`` (an NE in ``R^n``, e.g. from :func:`brute_force_ne`) enables
    the distance columns of the trace.  ``callback(k, x_k, x_k1)`` is called
    after every step.  The status is ``"converged"`` only when the
    fixed-point, consensus and ``A_alpha`` residuals all meet their
    tolerances; non-convergence is reported in the status, not raised.
    """
    alpha = config.alpha
    x = initial_estimate(game, config)
    x_star = None if x_star is None else np.asarray(x_star, dtype=float)
    trace = IterationTrace()
    t0 = time.perf_counter()
    fp = float("nan")
    cons, ne, phi, a_res = _diagnostics(game, net, alpha, x, x_star, fp)
    trace.records.append(TraceRecord(0, fp, cons, ne, phi, a_res))
    k = 0
    for k in range(1, config.max_outer_iterations + 1):
        x_new, results = ppp_step(x, game, net, alpha, config.inner_tolerance,
                                  config.inner_budget, return_results=True)
        trace.inexact_steps += sum(r.budget_exhausted for r in results)
        fp = float(np.linalg.norm(x_new - x))
        if callback is not None:
            callback(k, x, x_new)
        x = x_new
        done = fp <= config.stop_tolerance
        if done or k % config.diagnostic_cadence == 0 or k == config.max_outer_iterations:
            cons, ne, phi, a_res = _diagnostics(game, net, alpha, x, x_star, fp)
            trace.records.append(TraceRecord(k, fp, cons, ne, phi, a_res))
        if done:
            break
    trace.iterations = k
    trace.x_final = x
    trace.wall_time = time.perf_counter() - t0
    ok = (fp <= config.stop_tolerance and cons <= config.consensus_tolerance
          and a_res <= 10 * config.stop_tolerance + 2 * alpha * config.inner_tolerance)
    trace.status = "converged" if ok else "max-iterations"
    trace.final = {"fp_residual": fp, "consensus_residual": cons, "ne_distance": ne,
                   "phi_distance": phi, "a_residual": a_res}
    log.info("PPP run finished: %s after %d iterations", trace.status, k)
    return trace


def pseudogradient_baseline(game: Game, net: Network, step, iterations, x0=None, x_star=None,
                            stop_tolerance=1e-11, divergence_threshold=1e9):
    """Projected pseudogradient with consensus: ``x+ = proj(W x - step R^T F(W x))``."""
    if not step > 0:
        raise GameError("step must be positive")
    N, n = game.N, game.n
    R = SelectionOperator(game)
    Wl = lift_weight_matrix(net, n)
    from ppnash.operators import lifted_extended_mapping
    RtF = lifted_extended_mapping(game)
    x = project_estimates(game, np.zeros(N * n) if x0 is None else np.asarray(x0, float).reshape(-1))
    x_star = None if x_star is None else np.asarray(x_star, dtype=float)
    trace = IterationTrace()
    t0 = time.perf_counter()
    trace.status = "max-iterations"
    k = 0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, iterations + 1):
            v = Wl.matvec(x)
            x_new = project_estimates(game, v - step * RtF(v))
            fp = float(np.linalg.norm(x_new - x))
            x = x_new
            if not np.isfinite(fp) or np.linalg.norm(x) > divergence_threshold:
                trace.status = "diverged"
                trace.records.append(TraceRecord(k, fp, float("nan"), float("nan"),
                                                 float("nan"), float("nan")))
                break
            cons = consensus_tools(x, N, n)["residual"]
            if x_star is not None:
                ne = float(np.linalg.norm(R.apply_all(x) - x_star))
                phi = phi_norm(net, n, x - consensus_vector(x_star, N))
            else:
                ne = phi = float("nan")
            trace.records.append(TraceRecord(k, fp, cons, ne, phi, float("nan")))
            if fp <= stop_tolerance:
                trace.status = "converged"
                break
    trace.iterations = k
    trace.x_final = x
    trace.wall_time = time.perf_counter() - t0
    if trace.records:
        last = trace.records[-1]
        trace.final = {"fp_residual": last.fp_residual, "consensus_residual": last.consensus_residual,
                       "ne_distance": last.ne_distance}
    return trace


def select_alpha(game: Game, net: Network, anchors, grid: Sequence = DEFAULT_ALPHA_GRID,
                 samples=20_000, seed=0, box=5.0):
    """Largest ``alpha`` in ``grid`` whose ``F_alpha`` shows no restricted-monotonicity
    violation around the lifted equilibria ``anchors``.

    Returns ``(alpha or None, {alpha: report})``.
    """
    from ppnash.monotonicity import Sampler, check_restricted_monotone
    from ppnash.operators import augmented_F

    lifted = [consensus_vector(a, game.N) for a in anchors]
    reports = {}
    for alpha in sorted(grid, reverse=True):
        rep = check_restricted_monotone(augmented_F(game, net, alpha), lifted,
                                        Sampler(box=box, samples=samples, seed=seed))
        reports[alpha] = rep
        if rep.verdict == "no-violation-found":
            return alpha, reports
    return None, reports
