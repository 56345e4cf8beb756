"""Communication graphs and doubly stochastic weight matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

#: tolerance for symmetry / stochasticity of weight matrices
WEIGHT_TOL = 1e-12


class NetworkError(ValueError):
    """Raised when a graph or weight matrix violates the connectivity assumptions."""


@dataclass(frozen=True)
class Network:
    """Undirected connected graph with a symmetric doubly stochastic ``W``.

    Nodes are 0-indexed internally; edge files and configs are 1-indexed.
    """

    N: int
    edges: frozenset
    W: np.ndarray
    sigma: float = field(init=False)
    degenerate: bool = field(init=False)

    def __post_init__(self):
        W = np.array(self.W, dtype=float)
        W.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "edges", frozenset(_normalize_edges(self.edges)))
        validate_weights(W, self.edges)
        sv = np.linalg.svd(W, compute_uv=False)
        object.__setattr__(self, "degenerate", self.N == 1)
        object.__setattr__(self, "sigma", 0.0 if self.N == 1 else float(sv[1]))

    def neighbors(self, i):
        """Indices ``j != i`` with ``w_ij > 0``."""
        return [j for j in np.flatnonzero(self.W[i]) if j != i]

    def lifted(self, n):
        return lift_weight_matrix(self, n)

    def to_csv(self, path):
        np.savetxt(path, self.W, delimiter=",", fmt="%.17g")


def _normalize_edges(edges):
    out = set()
    for e in edges:
        i, j = (int(v) for v in e)
        if i == j:
            continue
        out.add((min(i, j), max(i, j)))
    return out


def connected_components(N, edges):
    adj = {i: set() for i in range(N)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, comps = set(), []
    for s in range(N):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u] - seen:
                seen.add(v)
                stack.append(v)
        comps.append(sorted(comp))
    return comps


def validate_weights(W, edges):
    """Check symmetry, positive self-loops, double stochasticity and connectivity."""
    W = np.asarray(W, dtype=float)
    N = W.shape[0]
    if W.shape != (N, N):
        raise NetworkError("weight matrix must be square")
    if not np.allclose(W, W.T, atol=WEIGHT_TOL, rtol=0):
        raise NetworkError("weight matrix is not symmetric")
    if np.any(np.diag(W) <= 0):
        raise NetworkError("weight matrix needs positive self-loop weights w_ii")
    if np.any(W < -WEIGHT_TOL):
        raise NetworkError("weight matrix has negative entries")
    ones = np.ones(N)
    if np.abs(W @ ones - ones).max() > WEIGHT_TOL or np.abs(ones @ W - ones).max() > WEIGHT_TOL:
        raise NetworkError("weight matrix is not doubly stochastic")
    for i in range(N):
        for j in range(N):
            if i != j and (W[i, j] > 0) != ((min(i, j), max(i, j)) in edges):
                raise NetworkError(f"weight w[{i + 1},{j + 1}] disagrees with the edge set")
    comps = connected_components(N, edges)
    if len(comps) > 1:
        listed = "; ".join("{" + ", ".join(str(v + 1) for v in c) + "}" for c in comps)
        raise NetworkError(f"graph is disconnected; components: {listed}")


def metropolis_weights(edges: Iterable, N: int) -> Network:
    """Metropolis weights ``w_ij = 1 / (1 + max(d_i, d_j))`` on a 0-indexed edge list."""
    edges = _normalize_edges(edges)
    for i, j in edges:
        if not (0 <= i < N and 0 <= j < N):
            raise NetworkError(f"edge ({i + 1}, {j + 1}) references a node outside 1..{N}")
    comps = connected_components(N, edges)
    if len(comps) > 1:
        listed = "; ".join("{" + ", ".join(str(v + 1) for v in c) + "}" for c in comps)
        raise NetworkError(f"graph is disconnected; components: {listed}")
    deg = np.zeros(N, dtype=int)
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    W = np.zeros((N, N))
    for i, j in edges:
        W[i, j] = W[j, i] = 1.0 / (1.0 + max(deg[i], deg[j]))
    W[np.diag_indices(N)] = 1.0 - W.sum(axis=1)
    return Network(N, frozenset(edges), W)


def from_weight_matrix(W) -> Network:
    """Wrap a user matrix, deriving the edge set from its off-diagonal support."""
    W = np.asarray(W, dtype=float)
    N = W.shape[0]
    edges = {(i, j) for i in range(N) for j in range(i + 1, N) if W[i, j] > 0 or W[j, i] > 0}
    return Network(N, frozenset(edges), W)


def complete_graph(N):
    return metropolis_weights([(i, j) for i in range(N) for j in range(i + 1, N)], N)


def path_graph(N):
    return metropolis_weights([(i, i + 1) for i in range(N - 1)], N)


def cycle_graph(N):
    if N < 3:
        return path_graph(N)
    return metropolis_weights([(i, (i + 1) % N) for i in range(N)], N)


def star_graph(N):
    return metropolis_weights([(0, j) for j in range(1, N)], N)


def random_connected_graph(N, p=0.5, seed=None):
    """Erdos-Renyi graph with a random spanning path added to force connectivity."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(N)
    edges = {(int(perm[k]), int(perm[k + 1])) for k in range(N - 1)}
    for i in range(N):
        for j in range(i + 1, N):
            if rng.random() < p:
                edges.add((i, j))
    return metropolis_weights(edges, N)


def read_edge_list(path_or_lines):
    """Parse ``i j`` lines (1-indexed; ``#`` comments allowed).

    Returns ``(edges, N)`` with 0-indexed edges and ``N`` the largest index.
    """
    if isinstance(path_or_lines, (str, bytes)) or hasattr(path_or_lines, "__fspath__"):
        with open(path_or_lines) as fh:
            lines = fh.read().splitlines()
    else:
        lines = list(path_or_lines)
    edges, N = [], 0
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if len(parts) != 2:
                raise ValueError
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise NetworkError(f"line {lineno}: expected two integers 'i j', got {line!r}") from None
        if i < 1 or j < 1:
            raise NetworkError(f"line {lineno}: node indices are 1-based")
        edges.append((i - 1, j - 1))
        N = max(N, i, j)
    return edges, N


class LiftedWeights:
    """``W kron I_n`` applied blockwise to vectors of length ``N n``.

    ``matvec`` works on stacked vectors or on ``(N, n)`` block arrays
    without forming the ``Nn x Nn`` matrix.
    """

    def __init__(self, W, n):
        self.W = np.asarray(W, dtype=float)
        self.n = int(n)
        self.N = self.W.shape[0]
        self.shape = (self.N * self.n, self.N * self.n)

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        blocks = x.reshape(x.shape[:-1] + (self.N, self.n))
        out = np.einsum("ij,...jk->...ik", self.W, blocks)
        return out.reshape(x.shape)

    __matmul__ = matvec

    def toarray(self):
        return np.kron(self.W, np.eye(self.n))


def lift_weight_matrix(net, n):
    """Return the block operator ``W kron I_n``."""
    if n < 1:
        raise NetworkError("lift dimension must be >= 1")
    W = net.W if isinstance(net, Network) else np.asarray(net, dtype=float)
    return LiftedWeights(W, n)


def spectral_report(net: Network):
    """Eigenvalues of ``W`` (descending), ``sigma`` and ``lambda_min(I + W)``."""
    try:
        eig = np.sort(np.linalg.eigvalsh(net.W))[::-1]
    except np.linalg.LinAlgError as exc:
        raise NetworkError(f"eigensolver failed: {exc}") from exc
    return {
        "N": net.N,
        "sigma": net.sigma,
        "eigenvalues": eig.tolist(),
        "lambda_min_I_plus_W": float(1.0 + eig[-1]),
        "degenerate": net.degenerate,
    }
