"""Dense complex matrix helpers.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` stored in
row-major (C) order. Tensor factors of a composite space are ordered so that
``|i>|j>`` maps to the composite index ``d*i + j``; this is the layout
produced by :func:`numpy.kron` and by C-order reshapes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from qopmat.errors import DimensionError, NotHermitianError

HERMITIAN_TOL = 1e-10


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError("matrix must have at least one row and column")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf entries")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        out = np.kron(out, f)
    return out


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def transpose(a) -> np.ndarray:
    return as_matrix(a).T


def conj(a) -> np.ndarray:
    return as_matrix(a).conj()


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a, square=True)))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``Tr(a^dag b)``, conjugate-linear in ``a``."""
    a, b = as_matrix(a, square=True), as_matrix(b, square=True)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hermiticity_deviation(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T)))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in descending order; eigenvectors are the columns of ``vectors``."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def eigh(a, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(A + A^dag)/2`` before decomposition.
    Raises :class:`NotHermitianError` when ``max|A - A^dag|`` exceeds ``tol``.
    """
    a = as_matrix(a, square=True)
    dev = hermiticity_deviation(a)
    if dev > tol:
        raise NotHermitianError(dev, tol)
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    order = np.argsort(w, kind="stable")[::-1]
    return EigenDecomposition(values=w[order], vectors=v[:, order])


def _check_dims(a: np.ndarray, dims: Sequence[int]) -> None:
    if any(int(k) < 1 for k in dims):
        raise DimensionError(f"factor dimensions must be positive, got {list(dims)}")
    if int(np.prod(dims)) != a.shape[0]:
        raise DimensionError(
            f"factor dimensions {list(dims)} do not multiply to {a.shape[0]}"
        )


def partial_trace(a, dims: Sequence[int], traced: Iterable[int]) -> np.ndarray:
    """Trace out the tensor factors listed in ``traced`` (0-based)."""
    a = as_matrix(a, square=True)
    dims = [int(k) for k in dims]
    _check_dims(a, dims)
    traced = sorted(set(int(t) for t in traced))
    if any(t < 0 or t >= len(dims) for t in traced):
        raise DimensionError(f"factor index out of range for {len(dims)} factors")
    n = len(dims)
    t = a.reshape(dims + dims)
    # trace highest axes first so lower axis numbers stay valid
    for k in reversed(traced):
        t = np.trace(t, axis1=k, axis2=k + t.ndim // 2)
    kept = [dims[k] for k in range(n) if k not in traced]
    size = int(np.prod(kept)) if kept else 1
    return t.reshape(size, size)


def partial_transpose(a, dims: Sequence[int], factor: int) -> np.ndarray:
    """Transpose the tensor factor ``factor`` (0-based) only."""
    a = as_matrix(a, square=True)
    dims = [int(k) for k in dims]
    _check_dims(a, dims)
    n = len(dims)
    if not 0 <= factor < n:
        raise DimensionError(f"factor {factor} out of range for {n} factors")
    axes = list(range(2 * n))
    axes[factor], axes[n + factor] = axes[n + factor], axes[factor]
    return a.reshape(dims + dims).transpose(axes).reshape(a.shape)


def permute_factors(a, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of a square operator.

    Factor ``k`` of the result is factor ``perm[k]`` of ``a``, so that
    ``permute_factors(kron(x, y), [dx, dy], [1, 0]) == kron(y, x)``.
    """
    a = as_matrix(a, square=True)
    dims = [int(k) for k in dims]
    _check_dims(a, dims)
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"{perm} is not a permutation of {n} factors")
    axes = perm + [n + p for p in perm]
    return a.reshape(dims + dims).transpose(axes).reshape(a.shape)
