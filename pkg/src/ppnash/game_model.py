"""Games: agents, cost oracles, feasible sets, and an independent NE oracle.

All oracles are NumPy-vectorized over leading axes: the last axis of every
array argument is the coordinate axis, so a batch of ``M`` points is an
``(M, d)`` array.  This keeps the sampling-based checks in
:mod:`ppnash.monotonicity` fast.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from ppnash.kernels import interval_distance

SMOOTHNESS_TAGS = ("smooth", "nonsmooth-separable", "nonsmooth-coupled")

#: tolerance for oracle soundness checks (cubic terms on unit-scale samples)
DEFAULT_TOL = 1e-9


class GameError(ValueError):
    """Raised on malformed game definitions or invalid inputs."""


# ---------------------------------------------------------------------------
# Feasible sets
# ---------------------------------------------------------------------------

class FeasibleSet:
    """Closed convex set in ``R^dim`` exposed through its projection.

    The normal cone is never built explicitly; :meth:`residual` returns the
    distance of the origin to ``[lo, hi] + N(x)`` which is all the solvers
    and residual checks need.
    """

    kind = "custom"

    def __init__(self, dim: int):
        if dim < 1:
            raise GameError("feasible set dimension must be >= 1")
        self.dim = int(dim)

    def project(self, v):
        raise NotImplementedError

    def contains(self, v, tol=0.0):
        v = np.asarray(v, dtype=float)
        return bool(np.all(np.linalg.norm(self.project(v) - v, axis=-1) <= tol))

    def residual(self, x, lo, hi=None):
        """Distance of 0 to the set ``[lo, hi] + N(x)`` (``hi`` defaults to ``lo``)."""
        raise NotImplementedError

    def sample(self, rng, size, box):
        """Uniform points of ``[-box, box]^dim`` projected onto the set."""
        return self.project(rng.uniform(-box, box, size=(size, self.dim)))


class WholeSpace(FeasibleSet):
    kind = "whole-space"

    def project(self, v):
        return np.array(v, dtype=float, copy=True)

    def contains(self, v, tol=0.0):
        return bool(np.all(np.isfinite(v)))

    def residual(self, x, lo, hi=None):
        hi = lo if hi is None else hi
        return float(interval_distance(np.asarray(lo, float), np.asarray(hi, float)))


class Box(FeasibleSet):
    kind = "box"

    def __init__(self, lower, upper):
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise GameError("box bounds must be 1-D arrays of equal length")
        if np.any(lower > upper):
            raise GameError("box lower bound exceeds upper bound")
        super().__init__(lower.size)
        self.lower = lower
        self.upper = upper

    def project(self, v):
        return np.clip(np.asarray(v, dtype=float), self.lower, self.upper)

    def contains(self, v, tol=0.0):
        v = np.asarray(v, dtype=float)
        return bool(np.all(v >= self.lower - tol) and np.all(v <= self.upper + tol))

    def residual(self, x, lo, hi=None, tol=1e-12):
        x = np.asarray(x, dtype=float)
        lo = np.array(lo, dtype=float, copy=True)
        hi = lo.copy() if hi is None else np.array(hi, dtype=float, copy=True)
        # active lower bound: normal cone is (-inf, 0]; active upper: [0, inf)
        lo[x <= self.lower + tol] = -np.inf
        hi[x >= self.upper - tol] = np.inf
        return float(interval_distance(lo, hi))


class Halfspaces(FeasibleSet):
    """Polyhedron ``{v : A v <= b}``."""

    kind = "halfspaces"

    def __init__(self, A, b, max_iter=10_000, tol=1e-13):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if A.shape[0] != b.size:
            raise GameError("halfspace rows and offsets have different lengths")
        super().__init__(A.shape[1])
        self.A = A
        self.b = b
        self._max_iter = max_iter
        self._tol = tol

    def _project_one(self, v):
        # Dykstra's alternating projections over the individual halfspaces
        x = v.copy()
        incr = np.zeros((self.A.shape[0], self.dim))
        norms = np.einsum("ij,ij->i", self.A, self.A)
        for _ in range(self._max_iter):
            x_old = x.copy()
            for k, (a, bk) in enumerate(zip(self.A, self.b)):
                y = x + incr[k]
                viol = a @ y - bk
                x = y - (viol / norms[k]) * a if viol > 0 else y
                incr[k] = y - x
            if np.linalg.norm(x - x_old) <= self._tol and np.all(self.A @ x <= self.b + 1e-12):
                break
        return x

    def project(self, v):
        v = np.asarray(v, dtype=float)
        if v.ndim == 1:
            return self._project_one(v)
        flat = v.reshape(-1, self.dim)
        return np.array([self._project_one(row) for row in flat]).reshape(v.shape)

    def contains(self, v, tol=0.0):
        v = np.asarray(v, dtype=float)
        return bool(np.all(v @ self.A.T <= self.b + tol))

    def residual(self, x, lo, hi=None, tol=1e-9):
        x = np.asarray(x, dtype=float)
        lo = np.asarray(lo, dtype=float)
        hi = lo if hi is None else np.asarray(hi, dtype=float)
        active = self.A[self.A @ x >= self.b - tol]
        if active.shape[0] == 0:
            return float(interval_distance(lo, hi))
        # min || lo + d + A_act^T lam ||,  0 <= d <= hi - lo,  lam >= 0
        free = np.flatnonzero(hi > lo)
        mat = np.hstack([np.eye(self.dim)[:, free], active.T])
        lb = np.zeros(mat.shape[1])
        ub = np.concatenate([(hi - lo)[free], np.full(active.shape[0], np.inf)])
        sol = optimize.lsq_linear(mat, -lo, bounds=(lb, ub), tol=1e-14)
        return float(np.linalg.norm(mat @ sol.x + lo))


class CustomSet(FeasibleSet):
    """User-supplied projection.

    Without a normal-cone description the residual falls back to the natural
    map ``|x - proj(x - g)|`` at the midpoint ``g`` of ``[lo, hi]``.
    """

    kind = "custom"

    def __init__(self, dim, project, contains=None):
        super().__init__(dim)
        self._project = project
        self._contains = contains

    def project(self, v):
        return np.asarray(self._project(np.asarray(v, dtype=float)), dtype=float)

    def contains(self, v, tol=0.0):
        if self._contains is not None:
            return bool(self._contains(v, tol))
        return super().contains(v, tol)

    def residual(self, x, lo, hi=None):
        hi = lo if hi is None else hi
        g = 0.5 * (np.asarray(lo, float) + np.asarray(hi, float))
        return float(np.linalg.norm(x - self.project(x - g)))


# ---------------------------------------------------------------------------
# Cost oracles and games
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CostOracle:
    """Cost of one agent, ``f_i(x_i, x_{-i})``.

    ``gradient`` returns one canonical element of the partial
    subdifferential.  Set-valued points are described by ``bounds``, which
    returns the coordinate-wise interval ``(lo, hi)`` containing the
    subdifferential (exact for separable 1-D kinks), and by ``kinks``, which
    lists the kink locations in the own variable for ``n_i = 1``.

    ``quadratic_own(x_minus_i) -> (H, g)`` declares
    ``f_i(y, x_{-i}) = 0.5 y'Hy + g'y + const``; ``prox(center, x_minus_i,
    alpha)`` returns the unconstrained minimizer of
    ``f_i(y, x_{-i}) + |y - center|^2 / alpha``.  Both enable exact local
    updates.
    """

    value: Callable
    gradient: Callable
    smoothness: str = "smooth"
    bounds: Optional[Callable] = None
    kinks: Optional[Callable] = None
    quadratic_own: Optional[Callable] = None
    prox: Optional[Callable] = None

    def __post_init__(self):
        if self.smoothness not in SMOOTHNESS_TAGS:
            raise GameError(f"unknown smoothness tag {self.smoothness!r}")

    def partial_subgradient(self, x_i, x_minus_i):
        return np.asarray(self.gradient(np.asarray(x_i, float), np.asarray(x_minus_i, float)), float)

    def subdifferential(self, x_i, x_minus_i):
        """Coordinate-wise interval ``(lo, hi)`` of the partial subdifferential."""
        if self.bounds is None:
            g = self.partial_subgradient(x_i, x_minus_i)
            return g, g
        lo, hi = self.bounds(np.asarray(x_i, float), np.asarray(x_minus_i, float))
        return np.asarray(lo, float), np.asarray(hi, float)

    def endpoints(self, x_i, x_minus_i):
        """Enumerate the corners of the subdifferential box at a single point."""
        lo, hi = self.subdifferential(x_i, x_minus_i)
        if np.array_equal(lo, hi):
            return [lo]
        axes = [(l,) if l == h else (l, h) for l, h in zip(lo, hi)]
        return [np.array(c) for c in itertools.product(*axes)]


@dataclass(frozen=True)
class Game:
    """A Nash equilibrium problem with ``N`` agents and ``n = sum(dims)``."""

    dims: tuple
    costs: tuple
    feasible_sets: tuple
    name: str = "game"
    offsets: tuple = field(init=False, repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1 or any(d < 1 for d in dims):
            raise GameError("a game needs N >= 1 agents with positive dimensions")
        if len(self.costs) != len(dims) or len(self.feasible_sets) != len(dims):
            raise GameError("costs and feasible_sets must have one entry per agent")
        for d, fs in zip(dims, self.feasible_sets):
            if fs.dim != d:
                raise GameError("feasible set dimension does not match agent dimension")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "costs", tuple(self.costs))
        object.__setattr__(self, "feasible_sets", tuple(self.feasible_sets))
        object.__setattr__(self, "offsets", tuple(np.concatenate([[0], np.cumsum(dims)]).tolist()))

    @property
    def N(self):
        return len(self.dims)

    @property
    def n(self):
        return int(sum(self.dims))

    def own_slice(self, i):
        return slice(self.offsets[i], self.offsets[i + 1])

    def split(self, x, i):
        """Return ``(x_i, x_{-i})`` for a (batched) vector in ``R^n``."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise GameError(f"expected vectors of length {self.n}, got {x.shape[-1]}")
        s = self.own_slice(i)
        rest = np.concatenate([x[..., : s.start], x[..., s.stop:]], axis=-1)
        return x[..., s], rest

    def join(self, i, x_i, x_minus_i):
        s = self.own_slice(i)
        x_i = np.asarray(x_i, dtype=float)
        x_minus_i = np.asarray(x_minus_i, dtype=float)
        return np.concatenate([x_minus_i[..., : s.start], x_i, x_minus_i[..., s.start:]], axis=-1)

    def cost(self, i, x):
        x_i, rest = self.split(x, i)
        return self.costs[i].value(x_i, rest)

    def mapping(self, x):
        """Canonical element of ``F(x) = col(d_{x_i} f_i(x_i, x_{-i}))``."""
        blocks = []
        for i, c in enumerate(self.costs):
            x_i, rest = self.split(x, i)
            blocks.append(c.partial_subgradient(x_i, rest))
        return np.concatenate(blocks, axis=-1)

    def mapping_bounds(self, x):
        los, his = [], []
        for i, c in enumerate(self.costs):
            x_i, rest = self.split(x, i)
            lo, hi = c.subdifferential(x_i, rest)
            los.append(lo)
            his.append(hi)
        return np.concatenate(los, axis=-1), np.concatenate(his, axis=-1)

    @property
    def is_set_valued(self):
        return any(c.bounds is not None for c in self.costs)

    @property
    def is_unconstrained(self):
        return all(fs.kind == "whole-space" for fs in self.feasible_sets)

    def project(self, x):
        x = np.asarray(x, dtype=float)
        return np.concatenate([fs.project(x[..., self.own_slice(i)])
                               for i, fs in enumerate(self.feasible_sets)], axis=-1)

    def contains(self, x, tol=1e-12):
        x = np.asarray(x, dtype=float)
        return all(fs.contains(x[..., self.own_slice(i)], tol)
                   for i, fs in enumerate(self.feasible_sets))

    def ne_residual(self, x):
        """Distance of 0 to ``F(x) + N_X(x)`` using the subdifferential boxes."""
        x = np.asarray(x, dtype=float)
        lo, hi = self.mapping_bounds(x)
        parts = []
        for i, fs in enumerate(self.feasible_sets):
            s = self.own_slice(i)
            parts.append(fs.residual(x[s], lo[s], hi[s]))
        return float(np.linalg.norm(parts))


# ---------------------------------------------------------------------------
# Quadratic games
# ---------------------------------------------------------------------------

def quadratic_game(Q, c, dims, feasible_sets=None, name="quadratic"):
    """Game with ``F(x) = Q x + c``.

    Agent ``i`` minimizes ``0.5 x_i'Q_ii x_i + x_i' sum_{j != i} Q_ij x_j +
    c_i' x_i``; the diagonal blocks of ``Q`` must be symmetric positive
    semidefinite for the game to be convex.
    """
    Q = np.asarray(Q, dtype=float)
    c = np.asarray(c, dtype=float)
    dims = tuple(int(d) for d in dims)
    n = sum(dims)
    if Q.shape != (n, n) or c.shape != (n,):
        raise GameError(f"Q must be {n}x{n} and c of length {n}")
    offs = np.concatenate([[0], np.cumsum(dims)])
    costs = []
    for i in range(len(dims)):
        s = slice(offs[i], offs[i + 1])
        Qii = Q[s, s]
        if not np.allclose(Qii, Qii.T, atol=1e-12):
            raise GameError(f"diagonal block {i} of Q must be symmetric")
        if np.linalg.eigvalsh(Qii).min() < -1e-12:
            raise GameError(f"diagonal block {i} of Q must be positive semidefinite")
        rest = np.r_[0:offs[i], offs[i + 1]:n]
        costs.append(_quadratic_cost(Qii, Q[s][:, rest], c[s]))
    if feasible_sets is None:
        feasible_sets = [WholeSpace(d) for d in dims]
    return Game(dims, costs, feasible_sets, name=name)


def _quadratic_cost(Qii, Qrest, ci):
    def value(y, z):
        return (0.5 * np.einsum("...i,ij,...j->...", y, Qii, y)
                + np.einsum("...i,ij,...j->...", y, Qrest, z) + y @ ci)

    def gradient(y, z):
        return y @ Qii.T + z @ Qrest.T + ci

    def quadratic_own(z):
        return Qii, np.asarray(z, float) @ Qrest.T + ci

    return CostOracle(value, gradient, "smooth", quadratic_own=quadratic_own)


def random_quadratic_game(N, dims=None, seed=None, mu=0.5, coupling=0.5, scale=1.0):
    """Random strongly monotone quadratic game.

    ``Q = S + K`` with ``S`` symmetric positive definite (smallest eigenvalue
    at least ``mu``) and ``K`` skew-symmetric with zero diagonal blocks, so
    every ``Q_ii`` is symmetric and ``F`` is ``mu``-strongly monotone.
    """
    rng = np.random.default_rng(seed)
    dims = tuple(dims) if dims is not None else (1,) * N
    if len(dims) != N:
        raise GameError("dims must have length N")
    n = sum(dims)
    B = rng.normal(size=(n, n)) * scale / np.sqrt(n)
    S = B @ B.T + mu * np.eye(n)
    K = rng.normal(size=(n, n)) * coupling / np.sqrt(n)
    K = K - K.T
    offs = np.concatenate([[0], np.cumsum(dims)])
    for i in range(N):
        K[offs[i]:offs[i + 1], offs[i]:offs[i + 1]] = 0.0
    c = rng.normal(size=n)
    return quadratic_game(S + K, c, dims, name=f"random-quadratic-N{N}")


def _drop_tail(fun, k):
    if fun is None:
        return None
    return lambda *args: fun(*_strip(args, k))


def _strip(args, k):
    # the context is the second positional argument of every oracle callable
    args = list(args)
    idx = 0 if len(args) == 1 else 1
    args[idx] = np.asarray(args[idx], dtype=float)[..., :-k]
    return args


def with_bystanders(game: Game, extra=1):
    """Append ``extra`` scalar agents with cost ``y^2`` that ignore everyone else.

    The original agents ignore the newcomers, so the equilibria are those
    of ``game`` with zeros appended.  Used to run two-agent games on larger
    networks.
    """
    if extra < 1:
        raise GameError("extra must be >= 1")
    costs = []
    for cost in game.costs:
        prox = None
        if cost.prox is not None:
            prox = (lambda p: lambda c, z, a: p(c, np.asarray(z, float)[..., :-extra], a))(cost.prox)
        costs.append(CostOracle(_drop_tail(cost.value, extra), _drop_tail(cost.gradient, extra),
                                cost.smoothness, _drop_tail(cost.bounds, extra),
                                _drop_tail(cost.kinks, extra), _drop_tail(cost.quadratic_own, extra),
                                prox))
    for _ in range(extra):
        costs.append(CostOracle(lambda y, z: np.asarray(y, float)[..., 0] ** 2,
                                lambda y, z: 2.0 * np.asarray(y, float),
                                quadratic_own=lambda z: (np.array([[2.0]]), np.zeros(1))))
    return Game(game.dims + (1,) * extra, costs,
                list(game.feasible_sets) + [WholeSpace(1) for _ in range(extra)],
                name=f"{game.name}+{extra}")


def zero_game(dims):
    """Game with all costs identically zero."""
    costs = [CostOracle(lambda y, z: np.zeros(np.shape(y)[:-1]),
                        lambda y, z: np.zeros(np.shape(y)),
                        "smooth",
                        quadratic_own=(lambda d: (lambda z: (np.zeros((d, d)), np.zeros(d))))(d))
             for d in dims]
    return Game(tuple(dims), costs, [WholeSpace(d) for d in dims], name="zero")


# ---------------------------------------------------------------------------
# Independent NE oracle
# ---------------------------------------------------------------------------

@dataclass
class NEOracleResult:
    x_star: np.ndarray
    residual: float
    method: str
    converged: bool
    iterations: int


def brute_force_ne(game, x0=None, tol=1e-10, max_iter=500, box=10.0):
    """Compute a Nash equilibrium of a small game without the PPP machinery.

    Smooth unconstrained games use damped Newton on ``F(x) = 0`` with a
    finite-difference Jacobian; all other games use a Gauss-Seidel
    best-response iteration whose local problems are solved by grid search
    followed by bounded scalar refinement (``n_i = 1``) or L-BFGS-B.
    """
    x = np.zeros(game.n) if x0 is None else game.project(np.asarray(x0, float))
    smooth = all(c.smoothness == "smooth" for c in game.costs)
    if smooth and game.is_unconstrained:
        x, it = _damped_newton(game, x, tol, max_iter)
        method = "damped-newton"
    else:
        x, it = _best_response_iteration(game, x, tol, max_iter, box)
        method = "best-response"
    res = game.ne_residual(x)
    return NEOracleResult(x, res, method, bool(res <= max(tol, 1e-8)), it)


def _fd_jacobian(fun, x, h=1e-6):
    n = x.size
    J = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h * max(1.0, abs(x[k]))
        J[:, k] = (fun(x + e) - fun(x - e)) / (2 * e[k])
    return J


def _damped_newton(game, x, tol, max_iter):
    Fx = game.mapping(x)
    for it in range(max_iter):
        nrm = np.linalg.norm(Fx)
        if nrm <= tol * 1e-2:
            return x, it
        J = _fd_jacobian(game.mapping, x)
        try:
            step = np.linalg.solve(J, -Fx)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(J, Fx, rcond=None)[0]
        t = 1.0
        while t > 1e-12:
            x_new = x + t * step
            F_new = game.mapping(x_new)
            if np.linalg.norm(F_new) < (1 - 1e-4 * t) * nrm:
                break
            t *= 0.5
        else:
            return x, it
        x, Fx = x_new, F_new
    return x, max_iter


def best_response(game, i, x, box=10.0, grid=401):
    """Minimize ``f_i(., x_{-i})`` over ``X_i`` (independent local solver)."""
    x_i, rest = game.split(x, i)
    fs = game.feasible_sets[i]
    cost = game.costs[i]

    def obj(y):
        return float(cost.value(np.atleast_1d(y), rest))

    if game.dims[i] == 1:
        lo = max(x_i[0] - box, fs.lower[0]) if fs.kind == "box" else x_i[0] - box
        hi = min(x_i[0] + box, fs.upper[0]) if fs.kind == "box" else x_i[0] + box
        ys = np.linspace(lo, hi, grid)
        vals = cost.value(ys[:, None], np.broadcast_to(rest, (grid, rest.size)))
        k = int(np.argmin(vals))
        a, b = ys[max(k - 1, 0)], ys[min(k + 1, grid - 1)]
        if a == b:
            return np.array([a])
        r = optimize.minimize_scalar(obj, bounds=(a, b), method="bounded",
                                     options={"xatol": 1e-13, "maxiter": 500})
        y = r.x if r.fun <= vals[k] else ys[k]
        return fs.project(np.array([y]))
    bounds = list(zip(fs.lower, fs.upper)) if fs.kind == "box" else None
    r = optimize.minimize(lambda y: obj(y), x_i, method="L-BFGS-B", bounds=bounds,
                          options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 2000})
    return fs.project(r.x)


def _best_response_iteration(game, x, tol, max_iter, box):
    x = x.copy()
    for it in range(max_iter):
        x_old = x.copy()
        for i in range(game.N):
            x[game.own_slice(i)] = best_response(game, i, x, box=box)
        if np.linalg.norm(x - x_old) <= tol:
            return x, it + 1
    return x, max_iter


# ---------------------------------------------------------------------------
# Convexity spot checks
# ---------------------------------------------------------------------------

@dataclass
class ConvexityReport:
    passed: bool
    samples: int
    violations: int
    worst_gap: float
    witness: Optional[dict] = None


def check_convexity(game, samples=1000, seed=0, box=5.0, tol=DEFAULT_TOL):
    """Sample the convexity inequality of every ``f_i(., x_{-i})``.

    Checks ``f(t a + (1-t) b) <= t f(a) + (1-t) f(b) + tol`` on random
    ``(a, b, t, x_{-i})``; the witness is the sample with the largest gap.
    """
    rng = np.random.default_rng(seed)
    worst = None
    violations = 0
    for i, (d, cost, fs) in enumerate(zip(game.dims, game.costs, game.feasible_sets)):
        z = rng.uniform(-box, box, size=(samples, game.n - d))
        a = fs.sample(rng, samples, box)
        b = fs.sample(rng, samples, box)
        t = rng.uniform(0, 1, size=(samples, 1))
        mid = t * a + (1 - t) * b
        gap = cost.value(mid, z) - (t[:, 0] * cost.value(a, z) + (1 - t[:, 0]) * cost.value(b, z))
        scale = 1.0 + np.abs(cost.value(a, z)) + np.abs(cost.value(b, z))
        bad = gap > tol * scale
        violations += int(bad.sum())
        k = int(np.argmax(gap / scale))
        if worst is None or gap[k] / scale[k] > worst["relative_gap"]:
            worst = {"agent": i, "a": a[k], "b": b[k], "t": float(t[k, 0]),
                     "x_minus_i": z[k], "gap": float(gap[k]),
                     "relative_gap": float(gap[k] / scale[k])}
    return ConvexityReport(violations == 0, samples, violations,
                           worst["gap"], worst if violations else None)


def check_subgradients(game, samples=1000, seed=0, box=5.0, tol=DEFAULT_TOL):
    """Count violations of ``f(z) >= f(x) + <g, z - x> - tol`` for returned ``g``."""
    rng = np.random.default_rng(seed)
    violations = 0
    for i, (d, cost, fs) in enumerate(zip(game.dims, game.costs, game.feasible_sets)):
        ctx = rng.uniform(-box, box, size=(samples, game.n - d))
        x = fs.sample(rng, samples, box)
        z = fs.sample(rng, samples, box)
        g = cost.partial_subgradient(x, ctx)
        lhs = cost.value(z, ctx)
        rhs = cost.value(x, ctx) + np.einsum("ij,ij->i", g, z - x)
        violations += int(np.sum(lhs < rhs - tol * (1 + np.abs(rhs))))
    return violations


def finite_difference_error(game, samples=200, seed=0, box=1.0, h=1e-6):
    """Max deviation between oracle gradients and central differences."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i, (d, cost) in enumerate(zip(game.dims, game.costs)):
        if cost.smoothness != "smooth":
            continue
        ctx = rng.uniform(-box, box, size=(samples, game.n - d))
        x = rng.uniform(-box, box, size=(samples, d))
        g = cost.partial_subgradient(x, ctx)
        fd = np.empty_like(g)
        for k in range(d):
            e = np.zeros(d)
            e[k] = h
            fd[:, k] = (cost.value(x + e, ctx) - cost.value(x - e, ctx)) / (2 * h)
        worst = max(worst, float(np.abs(g - fd).max()))
    return worst
