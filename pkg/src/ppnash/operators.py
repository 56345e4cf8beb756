"""Estimate-space operators: selection ``R``, ``F``, extended ``F``, ``F_alpha``, ``A_alpha``.

An estimate vector stacks one ``n``-dimensional block per agent, block
``i`` holding agent ``i``'s copy of every strategy (its own strategy at
block position ``i``).  Functions accept either the stacked ``(..., N n)``
form or the ``(N, n)`` block form; results keep the stacked form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ppnash.game_model import Game, GameError
from ppnash.network import Network, lift_weight_matrix


def as_blocks(x, N, n):
    """View a stacked ``(..., N n)`` estimate vector as ``(..., N, n)`` blocks."""
    x = np.asarray(x, dtype=float)
    if x.ndim >= 2 and x.shape[-2:] == (N, n):
        return x
    if x.shape[-1] != N * n:
        raise GameError(f"estimate vector must have length {N * n}, got {x.shape[-1]}")
    return x.reshape(x.shape[:-1] + (N, n))


def consensus_vector(x, N):
    """Stack ``N`` copies of ``x``: the consensus point ``1_N kron x``."""
    return np.tile(np.asarray(x, dtype=float), N)


class SelectionOperator:
    """The block-diagonal selection ``R = diag(R_1, ..., R_N)``.

    ``R_i`` picks the ``n_i`` own coordinates out of an ``n``-vector.
    """

    def __init__(self, game: Game):
        self.game = game
        self.N, self.n = game.N, game.n
        self.n_before = [game.offsets[i] for i in range(game.N)]
        self.n_after = [game.n - game.offsets[i + 1] for i in range(game.N)]

    def apply(self, x_i, i):
        return np.asarray(x_i, dtype=float)[..., self.game.own_slice(i)]

    def apply_all(self, x):
        """``R x``: the true strategies held in the estimates."""
        X = as_blocks(x, self.N, self.n)
        return np.concatenate([X[..., i, self.game.own_slice(i)] for i in range(self.N)], axis=-1)

    def adjoint(self, u):
        """``R^T u``: embed an ``n``-vector into the own-strategy coordinates."""
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape[:-1] + (self.N, self.n))
        for i in range(self.N):
            s = self.game.own_slice(i)
            out[..., i, s] = u[..., s]
        return out.reshape(u.shape[:-1] + (self.N * self.n,))

    def own_mask(self):
        mask = np.zeros((self.N, self.n), dtype=bool)
        for i in range(self.N):
            mask[i, self.game.own_slice(i)] = True
        return mask.ravel()


@dataclass(frozen=True)
class OperatorHandle:
    """Point evaluation of a (possibly set-valued) operator.

    ``eval`` returns the canonical element; ``bounds``, when present,
    returns coordinate-wise intervals ``(lo, hi)`` enclosing the value set.
    """

    name: str
    eval: Callable
    dim: int
    bounds: Optional[Callable] = None
    is_set_valued: bool = False
    alpha: Optional[float] = None

    def __call__(self, x):
        return self.eval(x)

    def value_bounds(self, x):
        if self.bounds is None:
            v = self.eval(x)
            return v, v
        return self.bounds(x)


def linear_operator(A, name="linear"):
    A = np.asarray(A, dtype=float)
    return OperatorHandle(name, lambda x: np.asarray(x, float) @ A.T, A.shape[0])


def game_mapping(game: Game) -> OperatorHandle:
    """``F(x) = col(d_{x_i} f_i(x_i, x_{-i}))`` on ``R^n``."""
    return OperatorHandle("F", game.mapping, game.n,
                          bounds=game.mapping_bounds if game.is_set_valued else None,
                          is_set_valued=game.is_set_valued)


def _extended_blocks(game, x, bounds=False):
    X = as_blocks(x, game.N, game.n)
    los, his = [], []
    for i, cost in enumerate(game.costs):
        xi, rest = game.split(X[..., i, :], i)
        if bounds:
            lo, hi = cost.subdifferential(xi, rest)
        else:
            lo = hi = cost.partial_subgradient(xi, rest)
        los.append(lo)
        his.append(hi)
    lo = np.concatenate(los, axis=-1)
    if not bounds:
        return lo
    return lo, np.concatenate(his, axis=-1)


def extended_mapping(game: Game) -> OperatorHandle:
    """``F(x) = col(d_{x_i} f_i(x_i, x_{i,-i}))``: each block uses agent ``i``'s estimates.

    Maps ``R^{Nn}`` to ``R^n``.
    """
    return OperatorHandle("F_ext", lambda x: _extended_blocks(game, x), game.n,
                          bounds=(lambda x: _extended_blocks(game, x, True)) if game.is_set_valued else None,
                          is_set_valued=game.is_set_valued)


def lifted_extended_mapping(game: Game) -> OperatorHandle:
    """``R^T F_ext`` on ``R^{Nn}``."""
    R = SelectionOperator(game)

    def bounds(x):
        lo, hi = _extended_blocks(game, x, True)
        return R.adjoint(lo), R.adjoint(hi)

    return OperatorHandle("RtF", lambda x: R.adjoint(_extended_blocks(game, x)), game.N * game.n,
                          bounds=bounds if game.is_set_valued else None,
                          is_set_valued=game.is_set_valued)


def laplacian_part(net: Network, n):
    """``(I - W kron I_n)`` as a function on stacked vectors."""
    Wl = lift_weight_matrix(net, n)
    return lambda x: np.asarray(x, float) - Wl.matvec(x)


def augmented_F(game: Game, net: Network, alpha: float) -> OperatorHandle:
    """``F_alpha(x) = alpha R^T F_ext(x) + (I - W kron I_n) x``."""
    if alpha < 0:
        raise GameError("alpha must be nonnegative")
    if net.N != game.N:
        raise GameError(f"network has {net.N} nodes but the game has {game.N} agents")
    R = SelectionOperator(game)
    lap = laplacian_part(net, game.n)

    def ev(x):
        return alpha * R.adjoint(_extended_blocks(game, x)) + lap(x)

    def bounds(x):
        lo, hi = _extended_blocks(game, x, True)
        base = lap(x)
        return alpha * R.adjoint(lo) + base, alpha * R.adjoint(hi) + base

    return OperatorHandle(f"F_alpha({alpha:g})", ev, game.N * game.n,
                          bounds=bounds if game.is_set_valued else None,
                          is_set_valued=game.is_set_valued, alpha=float(alpha))


def inclusion_residual(game: Game, x, fixed, alpha):
    """Distance of 0 to ``fixed + alpha R^T F_ext(x) + N_X(x)``.

    ``fixed`` is the single-valued part (stacked).  Set-valued blocks use
    the minimal-norm element of their subdifferential interval; the normal
    cone acts on own-strategy coordinates only.
    """
    N, n = game.N, game.n
    X = as_blocks(x, N, n)
    Fx = as_blocks(fixed, N, n)
    lo, hi = _extended_blocks(game, X.reshape(-1), True)
    total = 0.0
    for i, fs in enumerate(game.feasible_sets):
        s = game.own_slice(i)
        others = np.delete(Fx[i], np.arange(s.start, s.stop))
        total += float(others @ others)
        r = fs.residual(X[i, s], Fx[i, s] + alpha * lo[s], Fx[i, s] + alpha * hi[s])
        total += r * r
    return float(np.sqrt(total))


def feasibility_distance(game: Game, x):
    R = SelectionOperator(game)
    own = R.apply_all(x)
    return float(np.linalg.norm(own - game.project(own)))


def project_estimates(game: Game, x):
    """Project the own-strategy coordinates onto ``X``; other estimates are unconstrained."""
    R = SelectionOperator(game)
    x = np.array(x, dtype=float, copy=True).reshape(-1)
    own = R.apply_all(x)
    mask = R.own_mask()
    x[mask] = R.adjoint(game.project(own))[mask]
    return x


def augmented_A_residual(game: Game, net: Network, alpha: float, x, return_distance=False):
    """``dist(0, A_alpha(x))`` with ``A_alpha = F_alpha + N_X``.

    Infeasible inputs are projected first; with ``return_distance`` the
    projection distance is returned as well.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    dist = feasibility_distance(game, x)
    if dist > 0:
        x = project_estimates(game, x)
    res = inclusion_residual(game, x, laplacian_part(net, game.n)(x), alpha)
    return (res, dist) if return_distance else res


def consensus_tools(x, N, n):
    """Mean estimate and distance to the consensus subspace."""
    X = as_blocks(x, N, n)
    mean = X.mean(axis=-2)
    diff = X - mean[..., None, :]
    return {"mean": mean, "residual": float(np.linalg.norm(diff))}


def phi_norm(net: Network, n, d):
    """``|d|_Phi`` with ``Phi = I + W kron I_n``."""
    d = np.asarray(d, dtype=float)
    Wl = lift_weight_matrix(net, n)
    return float(np.sqrt(max(d @ (d + Wl.matvec(d)), 0.0)))
