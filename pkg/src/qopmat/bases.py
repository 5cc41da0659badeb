"""Operator bases of the Hilbert-Schmidt space of a qudit.

Three canonical families are provided (transition operators, Weyl
displacement operators, generalized Gell-Mann matrices) plus validated custom
bases. Every basis holds ``d**2`` operators that are orthonormal and complete
under ``Tr(A^dag B)``.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from qopmat.errors import DimensionError, InvalidBasisError
from qopmat.linalg import kron

BASIS_TOL = 1e-10
KINDS = ("transition", "weyl", "gellmann", "custom")


@dataclass(frozen=True)
class BasisReport:
    """Max deviations of each basis identity; ``passed`` iff all are below ``tol``."""

    orthonormality: float
    completeness: float
    reconstruction: float
    depolarizing: float
    tol: float = BASIS_TOL

    @property
    def passed(self) -> bool:
        return max(self.deviations().values()) < self.tol

    def deviations(self) -> dict:
        return {
            "orthonormality": self.orthonormality,
            "completeness": self.completeness,
            "reconstruction": self.reconstruction,
            "depolarizing": self.depolarizing,
        }

    def failures(self) -> list[str]:
        return [k for k, v in self.deviations().items() if not v < self.tol]


def _as_elements(elements) -> np.ndarray:
    e = np.asarray(elements, dtype=np.complex128)
    if e.ndim != 3 or e.shape[1] != e.shape[2]:
        raise DimensionError(f"basis elements must have shape (d*d, d, d), got {e.shape}")
    d = e.shape[1]
    if e.shape[0] != d * d:
        raise DimensionError(f"a basis for d={d} needs {d * d} elements, got {e.shape[0]}")
    return e


def validate_basis(basis, n_random: int = 20, seed: int = 0) -> BasisReport:
    """Check orthonormality, completeness, expansion and depolarizing identities.

    ``basis`` may be an :class:`OperatorBasis` or a raw ``(d*d, d, d)`` array,
    so that broken candidate sets can be diagnosed without constructing one.
    """
    e = basis.elements if isinstance(basis, OperatorBasis) else _as_elements(basis)
    d = e.shape[1]
    flat = e.reshape(d * d, d * d)

    gram = flat.conj() @ flat.T
    ortho = float(np.max(np.abs(gram - np.eye(d * d))))

    # sum_a <n|E_a^dag|m><l|E_a|k> = delta_nk delta_ml, all n, m, l, k
    lhs = np.einsum("amn,alk->nmlk", e.conj(), e)
    rhs = np.einsum("nk,ml->nmlk", np.eye(d), np.eye(d))
    complete = float(np.max(np.abs(lhs - rhs)))

    rng = np.random.default_rng(seed)
    recon = depol = 0.0
    for _ in range(n_random):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        coeffs = np.einsum("aij,ij->a", e.conj(), a)
        back = np.einsum("a,aij->ij", coeffs, e)
        recon = max(recon, float(np.max(np.abs(back - a))))
        twirl = np.einsum("aij,jk,alk->il", e, a, e.conj()) / d
        depol = max(depol, float(np.max(np.abs(twirl - np.trace(a) / d * np.eye(d)))))
    return BasisReport(ortho, complete, recon, depol)


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """An orthonormal, complete operator basis for ``d x d`` matrices.

    Construction validates the elements, so every instance is usable by the
    conversion routines. ``elements[a]`` is the ``a``-th basis operator.
    """

    d: int
    elements: np.ndarray = field(repr=False)
    kind: str = "custom"

    def __post_init__(self):
        e = _as_elements(self.elements)
        if e.shape[1] != self.d:
            raise DimensionError(f"elements are {e.shape[1]}x{e.shape[1]}, expected d={self.d}")
        if self.kind not in KINDS:
            raise InvalidBasisError(f"unknown basis kind {self.kind!r}")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "elements", e)
        report = validate_basis(e)
        if not report.passed:
            raise InvalidBasisError(
                f"not an orthonormal complete basis (failed: {', '.join(report.failures())})",
                report,
            )

    def __len__(self) -> int:
        return self.d * self.d

    def __getitem__(self, a: int) -> np.ndarray:
        return self.elements[a]

    @cached_property
    def key(self) -> str:
        """Content fingerprint; equal keys mean identical elements, whatever the label."""
        h = hashlib.sha1(self.elements.tobytes()).hexdigest()
        return f"{self.d}:{h}"

    def __eq__(self, other) -> bool:
        return isinstance(other, OperatorBasis) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @cached_property
    def vec_matrix(self) -> np.ndarray:
        """``d*d x d*d`` unitary whose columns are the row-major vecs of the elements."""
        return self.elements.reshape(self.d * self.d, self.d * self.d).T.copy()

    @property
    def is_hermitian(self) -> bool:
        e = self.elements
        return bool(np.max(np.abs(e - e.conj().transpose(0, 2, 1))) < BASIS_TOL)

    def coefficients(self, a) -> np.ndarray:
        """Expansion coefficients ``Tr(E_a^dag A)``."""
        return np.einsum("aij,ij->a", self.elements.conj(), np.asarray(a, dtype=complex))

    def combine(self, coeffs) -> np.ndarray:
        return np.einsum("a,aij->ij", np.asarray(coeffs, dtype=complex), self.elements)


def _check_d(d: int) -> int:
    if int(d) != d or d < 2:
        raise DimensionError(f"qudit dimension must be an integer >= 2, got {d}")
    return int(d)


def transition_basis(d: int) -> OperatorBasis:
    d = _check_d(d)
    return OperatorBasis(d, np.eye(d * d, dtype=complex).reshape(d * d, d, d), "transition")


def weyl_basis(d: int) -> OperatorBasis:
    """Displacement operators ``U_(m,n)``, ordered by ``d*m + n``.

    ``omega**(m*n/2)`` is taken on the principal branch ``exp(i pi m n / d)``.
    """
    d = _check_d(d)
    omega = np.exp(2j * np.pi / d)
    elems = np.zeros((d * d, d, d), dtype=complex)
    for m in range(d):
        for n in range(d):
            u = elems[d * m + n]
            for k in range(d):
                u[(k + n) % d, k] = omega ** (m * k)
            u *= np.exp(1j * np.pi * m * n / d) / np.sqrt(d)
    return OperatorBasis(d, elems, "weyl")


def gellmann_basis(d: int) -> OperatorBasis:
    """Normalized identity, then symmetric ``u``, antisymmetric ``v``, diagonal ``w``.

    ``v_(i,j) = i(|i><j| - |j><i|)/sqrt(2)`` and
    ``w_k = (-sum_{i<k} |i><i| + k|k><k|)/sqrt(k(k+1))``.
    """
    d = _check_d(d)
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    elems = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for i, j in pairs:
        u = np.zeros((d, d), dtype=complex)
        u[i, j] = u[j, i] = 1 / np.sqrt(2)
        elems.append(u)
    for i, j in pairs:
        v = np.zeros((d, d), dtype=complex)
        v[i, j] = 1j / np.sqrt(2)
        v[j, i] = -1j / np.sqrt(2)
        elems.append(v)
    for k in range(1, d):
        w = np.zeros((d, d), dtype=complex)
        w[np.arange(k), np.arange(k)] = -1
        w[k, k] = k
        elems.append(w / np.sqrt(k * (k + 1)))
    return OperatorBasis(d, np.array(elems), "gellmann")


_FACTORIES = {
    "transition": transition_basis,
    "weyl": weyl_basis,
    "gellmann": gellmann_basis,
}


def make_basis(kind: str, d: int) -> OperatorBasis:
    try:
        factory = _FACTORIES[kind]
    except KeyError:
        raise InvalidBasisError(
            f"unknown basis kind {kind!r}; choose one of {sorted(_FACTORIES)}"
        ) from None
    return factory(d)


def custom_basis(elements) -> OperatorBasis:
    e = _as_elements(elements)
    return OperatorBasis(e.shape[1], e, "custom")


def change_of_basis_unitary(src: OperatorBasis, dst: OperatorBasis) -> np.ndarray:
    """Matrix ``U[a, b] = Tr(E_a^dag F_b)`` with ``F_b = sum_a E_a U[a, b]``."""
    if src.d != dst.d:
        raise DimensionError(f"bases act on different dimensions ({src.d} vs {dst.d})")
    return src.vec_matrix.conj().T @ dst.vec_matrix


def isotropic_state(d: int) -> np.ndarray:
    """``(1/d)|I>><<I|`` on the doubled space."""
    d = _check_d(d)
    v = np.eye(d, dtype=complex).reshape(-1)
    return np.outer(v, v.conj()) / d


def swap_operator(d: int) -> np.ndarray:
    d = _check_d(d)
    v = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            v[d * j + i, d * i + j] = 1
    return v


def isotropic_from_basis(basis: OperatorBasis) -> np.ndarray:
    """``(1/d) sum_a E_a (x) E_a^*``; equals :func:`isotropic_state` for any basis."""
    return sum(kron(e, e.conj()) for e in basis.elements) / basis.d


def swap_from_basis(basis: OperatorBasis) -> np.ndarray:
    """``sum_a E_a (x) E_a^dag``; equals :func:`swap_operator` for any basis."""
    return sum(kron(e, e.conj().T) for e in basis.elements)
