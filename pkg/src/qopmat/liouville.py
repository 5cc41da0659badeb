"""Liouville-space embedding and the reshuffling involution.

``vec`` stacks an operator row by row, so ``vec(A)[d*i + j] == A[i, j]`` and
``kron(A, B) @ vec(C) == vec(A @ C @ B.T)``.
"""
from __future__ import annotations

import math

import numpy as np

from qopmat.errors import DimensionError
from qopmat.linalg import as_matrix


def vec(a) -> np.ndarray:
    return as_matrix(a, square=True).reshape(-1).copy()


def unvec(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    d = math.isqrt(v.size)
    if d * d != v.size or d == 0:
        raise DimensionError(f"vector length {v.size} is not a perfect square")
    return v.reshape(d, d).copy()


def _root(size: int) -> int:
    d = math.isqrt(size)
    if d * d != size:
        raise DimensionError(f"dimension {size} is not a perfect square")
    return d


def reshuffle(x, d: int | None = None) -> np.ndarray:
    """Exchange Kronecker and dyadic structure: ``out[(i,j),(k,l)] = x[(i,k),(j,l)]``.

    Maps ``kron(A, B.conj())`` to ``outer(vec(A), vec(B).conj())`` and back.
    The map is an entry permutation and its own inverse.
    """
    x = as_matrix(x, square=True)
    if d is None:
        d = _root(x.shape[0])
    if x.shape[0] != d * d:
        raise DimensionError(f"expected a {d * d}x{d * d} matrix, got {x.shape}")
    return x.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def reshuffle_sum(x, d: int) -> np.ndarray:
    """Reshuffle as the literal sum ``sum_g (I (x) pi_g) X (pi_g (x) I)``.

    Quadratic in the number of entries; kept to cross-check :func:`reshuffle`.
    """
    x = as_matrix(x, square=True)
    eye = np.eye(d)
    out = np.zeros_like(x)
    for g in range(d * d):
        pi = np.zeros((d, d))
        pi[divmod(g, d)] = 1
        out += np.kron(eye, pi) @ x @ np.kron(pi, eye)
    return out


def pair_order(d: int, n: int) -> np.ndarray:
    """Index map from row-major ``vec`` of an ``n``-qudit operator to pair order.

    Pair order lists the tensor factors as (out_1, mirror_1, out_2, mirror_2,
    ...), i.e. ``vec(A1 (x) A2) -> kron(vec(A1), vec(A2))``. Entry ``p`` of the
    returned array is the row-major position that lands at pair position ``p``.
    """
    axes = [ax for q in range(n) for ax in (q, n + q)]
    return np.arange(d ** (2 * n)).reshape([d] * (2 * n)).transpose(axes).reshape(-1)


def to_pair_order(x, d: int, n: int) -> np.ndarray:
    """Conjugate a superoperator matrix from row-major vec order into pair order."""
    p = pair_order(d, n)
    return np.asarray(x)[np.ix_(p, p)]


def from_pair_order(x, d: int, n: int) -> np.ndarray:
    inv = np.argsort(pair_order(d, n))
    return np.asarray(x)[np.ix_(inv, inv)]


def reshuffle_pairs(x, d: int, n: int) -> np.ndarray:
    """Apply the reshuffle independently to each qudit pair of a pair-ordered matrix."""
    x = as_matrix(x, square=True)
    size = d ** (2 * n)
    if x.shape[0] != size:
        raise DimensionError(f"expected a {size}x{size} matrix, got {x.shape}")
    t = x.reshape([d] * (4 * n))
    # axes: rows (o_1, m_1, ..., o_n, m_n), cols (o_1', m_1', ...)
    axes = list(range(4 * n))
    for q in range(n):
        m_row, o_col = 2 * q + 1, 2 * n + 2 * q
        axes[m_row], axes[o_col] = axes[o_col], axes[m_row]
    return t.transpose(axes).reshape(size, size)
