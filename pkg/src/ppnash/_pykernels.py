"""Pure-Python/NumPy implementations of the hot numerical kernels.

Used whenever the compiled extension is unavailable, or when the
environment variable ``PPNASH_PURE_PYTHON`` is set.
"""

import numpy as np


def mix_estimates(W, X):
    """Return ``0.5 * (X + W @ X)`` reading only the nonzero entries of ``W``.

    Row ``i`` of the result depends only on rows ``j`` with ``W[i, j] != 0``,
    so non-neighbor data never enters an agent's update.
    """
    W = np.asarray(W, dtype=float)
    X = np.asarray(X, dtype=float)
    out = np.empty_like(X)
    for i in range(W.shape[0]):
        acc = X[i].copy()
        for j in np.flatnonzero(W[i]):
            acc += W[i, j] * X[j]
        out[i] = 0.5 * acc
    return out


def pair_products(DA, DB):
    """Row-wise ``<a, b>``, ``|a|^2`` and ``|b|^2`` for two (M, d) arrays."""
    DA = np.asarray(DA, dtype=float)
    DB = np.asarray(DB, dtype=float)
    inner = np.einsum("ij,ij->i", DA, DB)
    na2 = np.einsum("ij,ij->i", DA, DA)
    nb2 = np.einsum("ij,ij->i", DB, DB)
    return inner, na2, nb2


def interval_distance(lo, hi):
    """Euclidean distance of the origin to the box ``[lo, hi]``, per row.

    ``lo`` and ``hi`` have shape (..., d) and may contain infinities.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    gap = np.maximum(lo, 0.0) + np.minimum(hi, 0.0)
    return np.sqrt(np.sum(gap * gap, axis=-1))
