"""Chi-matrix, S-matrix and Kraus forms of a qudit channel.

For an ``n``-qudit channel with per-qudit bases ``E^(1), ..., E^(n)`` the
product operators ``Phi_a = E^(1)_{a_1} (x) ... (x) E^(n)_{a_n}`` are indexed by
``a = a_1 * d**(2(n-1)) + ... + a_n``. Then

* ``S(rho) = sum_ab chi[a, b] Phi_a rho Phi_b^dag``
* ``S(Phi_b) = sum_a smat[a, b] Phi_a``

The Choi operator is laid out with tensor factors (out_1, mirror_1, out_2,
mirror_2, ...). Conversions between ``chi`` and ``smat`` use the per-qudit
matrices ``Q^g``, ``R^g`` of a :class:`ConversionKit`; the same sum maps in
both directions.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence, Union

import numpy as np

from qopmat.bases import OperatorBasis, change_of_basis_unitary, gellmann_basis
from qopmat.errors import (
    BasisMismatchError,
    DimensionError,
    NotCompletelyPositiveError,
    SizeGuardError,
)
from qopmat.linalg import as_matrix, eigh, kron_all
from qopmat.liouville import pair_order, to_pair_order

CP_TOL = 1e-9
KRAUS_CUTOFF = 1e-12
DEFAULT_SIZE_CAP = 4096


def size_cap() -> int:
    """Largest allowed superoperator dimension; ``QOPMAT_SIZE_CAP`` overrides."""
    raw = os.environ.get("QOPMAT_SIZE_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise SizeGuardError(f"QOPMAT_SIZE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise SizeGuardError(f"QOPMAT_SIZE_CAP must be positive, got {cap}")
    return cap


def check_size(d: int, n: int) -> None:
    dim = d ** (2 * n)
    cap = size_cap()
    if dim > cap:
        raise SizeGuardError(
            f"{n} qudits of dimension {d} need {dim}x{dim} matrices, above the cap {cap}"
        )


def _normalize_bases(bases, n: int) -> tuple:
    if isinstance(bases, OperatorBasis):
        return (bases,) * n
    bases = tuple(bases)
    if len(bases) != n:
        raise DimensionError(f"expected {n} per-qudit bases, got {len(bases)}")
    if len({b.d for b in bases}) != 1:
        raise DimensionError("all qudits must share the same dimension")
    return bases


def _qudit_count(size: int, d: int) -> int:
    n, s = 0, 1
    while s < size:
        s *= d
        n += 1
    if s != size or n == 0:
        raise DimensionError(f"{size} is not a positive power of {d}")
    return n


class _BasisMatrix:
    """Shared behaviour of chi- and S-matrices."""

    data: np.ndarray
    bases: tuple

    def _setup(self):
        if not self.bases:
            raise DimensionError("at least one per-qudit basis is required")
        object.__setattr__(self, "bases", _normalize_bases(self.bases, len(self.bases)))
        m = as_matrix(self.data, square=True).copy()
        expected = self.d ** (2 * self.n)
        if m.shape[0] != expected:
            raise DimensionError(
                f"{self.n} qudits of dimension {self.d} need a {expected}x{expected} "
                f"matrix, got {m.shape}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "data", m)

    @property
    def d(self) -> int:
        return self.bases[0].d

    @property
    def n(self) -> int:
        return len(self.bases)

    @property
    def dim(self) -> int:
        """Dimension of the ``n``-qudit Hilbert space, ``d**n``."""
        return self.d**self.n


@dataclass(frozen=True, eq=False)
class ChiMatrix(_BasisMatrix):
    data: np.ndarray = field(repr=False)
    bases: tuple

    def __post_init__(self):
        if isinstance(self.bases, OperatorBasis):
            d = self.bases.d
            object.__setattr__(
                self, "bases", (self.bases,) * (_qudit_count(np.shape(self.data)[0], d) // 2)
            )
        self._setup()


@dataclass(frozen=True, eq=False)
class SMatrix(_BasisMatrix):
    data: np.ndarray = field(repr=False)
    bases: tuple

    def __post_init__(self):
        if isinstance(self.bases, OperatorBasis):
            d = self.bases.d
            object.__setattr__(
                self, "bases", (self.bases,) * (_qudit_count(np.shape(self.data)[0], d) // 2)
            )
        self._setup()


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """``S(rho) = sum_i K_i rho K_i^dag`` on ``n`` qudits of dimension ``d``."""

    operators: tuple = field(repr=False)
    d: int
    n: int = 1

    def __post_init__(self):
        ops = tuple(as_matrix(k, square=True).copy() for k in self.operators)
        if not ops:
            raise DimensionError("a Kraus channel needs at least one operator")
        size = self.d**self.n
        for k in ops:
            if k.shape[0] != size:
                raise DimensionError(
                    f"Kraus operator of shape {k.shape} on {self.n} qudit(s) of dimension {self.d}"
                )
            k.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @classmethod
    def from_operators(cls, operators, d: int | None = None) -> "KrausChannel":
        ops = [as_matrix(k, square=True) for k in operators]
        size = ops[0].shape[0]
        if d is None:
            d = size
        return cls(tuple(ops), d, _qudit_count(size, d))

    @property
    def dim(self) -> int:
        return self.d**self.n

    def gram(self) -> np.ndarray:
        """``sum_i K_i^dag K_i``."""
        return sum(k.conj().T @ k for k in self.operators)


Channel = Union[ChiMatrix, SMatrix, KrausChannel]


def product_elements(bases: Sequence[OperatorBasis]) -> np.ndarray:
    """All products ``E^(1)_{a_1} (x) ... (x) E^(n)_{a_n}`` in packed index order."""
    out = np.ones((1, 1, 1), dtype=complex)
    for b in bases:
        out = np.einsum("aij,bkl->abikjl", out, b.elements).reshape(
            out.shape[0] * len(b), out.shape[1] * b.d, out.shape[2] * b.d
        )
    return out


def pair_vec_matrix(bases: Sequence[OperatorBasis]) -> np.ndarray:
    """Columns are pair-ordered vecs of the product basis operators."""
    return kron_all(b.vec_matrix for b in bases)


# -- conversion kits ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConversionKit:
    """``Q[g] = <<E_a|(I (x) pi_g)|E_b>>`` and ``R[g] = <<E_a|(pi_g (x) I)|E_b>>``."""

    basis: OperatorBasis
    Q: np.ndarray = field(repr=False)
    R: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.basis.d

    @cached_property
    def M(self) -> np.ndarray:
        """``M[(a',b'),(a,b)] = sum_g Q[g][a',a] R[g][b,b']``; Hermitian and unitary."""
        n2 = self.d * self.d
        return np.einsum("gpa,gbq->pqab", self.Q, self.R).reshape(n2 * n2, n2 * n2)

    @cached_property
    def transfer(self) -> np.ndarray:
        """``T[a, c, e, b] = sum_g Q[g][a, c] R[g][e, b]``, the per-qudit conversion map."""
        return np.einsum("gac,geb->aceb", self.Q, self.R)


@lru_cache(maxsize=64)
def build_kit(basis: OperatorBasis) -> ConversionKit:
    """Compute the ``Q`` and ``R`` matrices of a (validated) basis, with caching."""
    if not isinstance(basis, OperatorBasis):
        raise TypeError("build_kit needs an OperatorBasis")
    d = basis.d
    b = basis.vec_matrix
    bh = b.conj().T
    eye = np.eye(d)
    q, r = [], []
    for g in range(d * d):
        pi = np.zeros((d, d))
        pi[divmod(g, d)] = 1
        q.append(bh @ np.kron(eye, pi) @ b)
        r.append(bh @ np.kron(pi, eye) @ b)
    kit = ConversionKit(basis, np.array(q), np.array(r))
    n2 = d * d
    m = kit.M
    if (
        np.max(np.abs(m - m.conj().T)) > 1e-10
        or np.max(np.abs(m @ m.conj().T - np.eye(n2 * n2))) > 1e-10
    ):
        raise DimensionError("conversion matrix M is not Hermitian-unitary")
    kit.Q.setflags(write=False)
    kit.R.setflags(write=False)
    return kit


def build_two_qudit_kit(basis_e: OperatorBasis, basis_f: OperatorBasis):
    """Kits for the first (``Q``, ``R``) and second (``S``, ``T``) qudit."""
    if basis_e.d != basis_f.d:
        raise DimensionError("both qudits must have the same dimension")
    return build_kit(basis_e), build_kit(basis_f)


def _kits_for(bases, kits) -> tuple:
    if kits is None:
        return tuple(build_kit(b) for b in bases)
    if isinstance(kits, ConversionKit):
        kits = (kits,)
    kits = tuple(kits)
    if len(kits) != len(bases):
        raise DimensionError(f"expected {len(bases)} kits, got {len(kits)}")
    for k, b in zip(kits, bases):
        if k.basis != b:
            raise BasisMismatchError("conversion kit was built for a different basis")
    return kits


def _kit_sum_1(x: np.ndarray, kit: ConversionKit) -> np.ndarray:
    out = np.zeros_like(x)
    for q, r in zip(kit.Q, kit.R):
        out += q @ x @ r
    return out


def _kit_sum_2(x: np.ndarray, kit1: ConversionKit, kit2: ConversionKit) -> np.ndarray:
    out = np.zeros_like(x)
    for q, r in zip(kit1.Q, kit1.R):
        for s, t in zip(kit2.Q, kit2.R):
            out += np.kron(q, s) @ x @ np.kron(r, t)
    return out


def kit_sum_literal(x, kits: Sequence[ConversionKit]) -> np.ndarray:
    """``sum over (g_1..g_n) of (Q^g1 (x) ... ) X (R^g1 (x) ...)``, term by term.

    Cost grows as ``d**(8n)``; used to cross-check the factorized path.
    """
    x = np.asarray(x, dtype=complex)
    out = np.zeros_like(x)
    for gs in itertools.product(*(range(len(k.Q)) for k in kits)):
        q = kron_all(k.Q[g] for k, g in zip(kits, gs))
        r = kron_all(k.R[g] for k, g in zip(kits, gs))
        out += q @ x @ r
    return out


def _kit_sum_factorized(x: np.ndarray, kits: Sequence[ConversionKit]) -> np.ndarray:
    n = len(kits)
    n2 = kits[0].d ** 2
    t = x.reshape([n2] * (2 * n))
    for i, kit in enumerate(kits):
        t = np.tensordot(kit.transfer, t, axes=([1, 2], [i, n + i]))
        t = np.moveaxis(t, [0, 1], [i, n + i])
    return t.reshape(x.shape)


def chi_to_s(chi: ChiMatrix, kit: ConversionKit | None = None) -> SMatrix:
    """Single-qudit ``S = sum_g Q^g chi R^g``."""
    if chi.n != 1:
        raise DimensionError("chi_to_s handles one qudit; use chi_to_s_2 or convert_n")
    (kit,) = _kits_for(chi.bases, kit)
    return SMatrix(_kit_sum_1(chi.data, kit), chi.bases)


def s_to_chi(s: SMatrix, kit: ConversionKit | None = None) -> ChiMatrix:
    """Single-qudit ``chi = sum_g Q^g S R^g``."""
    if s.n != 1:
        raise DimensionError("s_to_chi handles one qudit; use s_to_chi_2 or convert_n")
    (kit,) = _kits_for(s.bases, kit)
    return ChiMatrix(_kit_sum_1(s.data, kit), s.bases)


def chi_to_s_2(chi: ChiMatrix, kits=None) -> SMatrix:
    """Two-qudit ``S = sum_{g,l} (Q^g (x) S^l) chi (R^g (x) T^l)``."""
    if chi.n != 2:
        raise DimensionError("chi_to_s_2 needs a two-qudit chi matrix")
    k1, k2 = _kits_for(chi.bases, kits)
    return SMatrix(_kit_sum_2(chi.data, k1, k2), chi.bases)


def s_to_chi_2(s: SMatrix, kits=None) -> ChiMatrix:
    if s.n != 2:
        raise DimensionError("s_to_chi_2 needs a two-qudit S matrix")
    k1, k2 = _kits_for(s.bases, kits)
    return ChiMatrix(_kit_sum_2(s.data, k1, k2), s.bases)


def convert_n(rep: ChiMatrix | SMatrix, kits=None) -> ChiMatrix | SMatrix:
    """Swap between chi and S form for any number of qudits.

    One and two qudits use :func:`chi_to_s` / :func:`chi_to_s_2` (and their
    mirrors); larger registers apply the per-qudit conversion map factor by
    factor, which equals the full product-kit sum.
    """
    check_size(rep.d, rep.n)
    kits = _kits_for(rep.bases, kits)
    if isinstance(rep, ChiMatrix):
        if rep.n == 1:
            return chi_to_s(rep, kits)
        if rep.n == 2:
            return chi_to_s_2(rep, kits)
        return SMatrix(_kit_sum_factorized(rep.data, kits), rep.bases)
    if isinstance(rep, SMatrix):
        if rep.n == 1:
            return s_to_chi(rep, kits)
        if rep.n == 2:
            return s_to_chi_2(rep, kits)
        return ChiMatrix(_kit_sum_factorized(rep.data, kits), rep.bases)
    raise TypeError(f"convert_n expects a ChiMatrix or SMatrix, got {type(rep).__name__}")


# -- Kraus forms -------------------------------------------------------------


def chi_from_kraus(k: KrausChannel, bases=None) -> ChiMatrix:
    """``chi[a, b] = sum_i c_i[a] conj(c_i[b])`` with ``K_i = sum_a c_i[a] Phi_a``."""
    bases = _normalize_bases(gellmann_basis(k.d) if bases is None else bases, k.n)
    if bases[0].d != k.d:
        raise DimensionError(f"basis dimension {bases[0].d} does not match channel d={k.d}")
    phi = product_elements(bases)
    c = np.array([np.einsum("aij,ij->a", phi.conj(), op) for op in k.operators])
    return ChiMatrix(c.T @ c.conj(), bases)


def kraus_from_chi(chi: ChiMatrix) -> KrausChannel:
    """Canonical Kraus operators from the eigendecomposition of ``chi``.

    Raises :class:`NotCompletelyPositiveError` if an eigenvalue is below
    ``-1e-9 * max eigenvalue``. Eigenvalues under ``1e-12 * max`` are dropped.
    """
    eig = eigh(chi.data)
    lam = eig.values
    top = lam[0]
    if lam[-1] < -CP_TOL * max(top, 0.0):
        raise NotCompletelyPositiveError(float(lam[-1]))
    if top <= 0:
        return KrausChannel((np.zeros((chi.dim, chi.dim)),), chi.d, chi.n)
    keep = lam > KRAUS_CUTOFF * top
    phi = product_elements(chi.bases)
    ops = [
        np.sqrt(l) * np.einsum("a,aij->ij", eig.vectors[:, m], phi)
        for m, l in zip(np.flatnonzero(keep), lam[keep])
    ]
    return KrausChannel(tuple(ops), chi.d, chi.n)


# -- dispatch between forms -----------------------------------------------------


def to_chi(rep: Channel, bases=None) -> ChiMatrix:
    """Chi matrix of any representation, optionally in new per-qudit ``bases``."""
    if isinstance(rep, KrausChannel):
        return chi_from_kraus(rep, bases)
    if isinstance(rep, SMatrix):
        rep = convert_n(rep)
    elif not isinstance(rep, ChiMatrix):
        raise TypeError(f"not a channel representation: {type(rep).__name__}")
    return rep if bases is None else change_basis(rep, bases)


def to_smatrix(rep: Channel, bases=None) -> SMatrix:
    if isinstance(rep, SMatrix):
        return rep if bases is None else change_basis(rep, bases)
    return convert_n(to_chi(rep, bases))


def to_kraus(rep: Channel) -> KrausChannel:
    if isinstance(rep, KrausChannel):
        return rep
    return kraus_from_chi(to_chi(rep))


def change_basis(rep: Channel, new_bases) -> Channel:
    """Re-express ``rep`` in ``new_bases`` via ``U^dag X U`` with ``U = (x)_q U_q``."""
    if isinstance(rep, KrausChannel):
        return rep
    new_bases = _normalize_bases(new_bases, rep.n)
    if new_bases[0].d != rep.d:
        raise DimensionError("new basis acts on a different qudit dimension")
    if new_bases == rep.bases:
        return rep
    u = kron_all(change_of_basis_unitary(old, new) for old, new in zip(rep.bases, new_bases))
    return type(rep)(u.conj().T @ rep.data @ u, new_bases)


def same_bases(a: Channel, b: Channel) -> bool:
    return getattr(a, "bases", None) == getattr(b, "bases", None)


# -- matrices on the doubled space -------------------------------------------


def superop_matrix(rep: Channel) -> np.ndarray:
    """Matrix ``L`` with ``vec(S(rho)) = L @ vec(rho)`` (row-major vec)."""
    if isinstance(rep, KrausChannel):
        return sum(np.kron(k, k.conj()) for k in rep.operators)
    phi = product_elements(rep.bases)
    if isinstance(rep, ChiMatrix):
        dim = rep.dim
        out = np.einsum("ab,aij,bkl->ikjl", rep.data, phi, phi.conj(), optimize=True)
        return out.reshape(dim * dim, dim * dim)
    if isinstance(rep, SMatrix):
        b = phi.reshape(len(phi), -1).T
        return b @ rep.data @ b.conj().T
    raise TypeError(f"not a channel representation: {type(rep).__name__}")


def choi_operator(rep: Channel) -> np.ndarray:
    """``(S (x) I)(|I>><<I|)`` with factors ordered (out_1, mirror_1, out_2, ...)."""
    if isinstance(rep, KrausChannel):
        vs = [to_pair_order_vec(k, rep.d, rep.n) for k in rep.operators]
        return sum(np.outer(v, v.conj()) for v in vs)
    if isinstance(rep, ChiMatrix):
        b = pair_vec_matrix(rep.bases)
        return b @ rep.data @ b.conj().T
    if isinstance(rep, SMatrix):
        phi = product_elements(rep.bases)
        dim = rep.dim
        kr = np.einsum("ab,aij,bkl->ikjl", rep.data, phi, phi.conj(), optimize=True)
        return to_pair_order(kr.reshape(dim * dim, dim * dim), rep.d, rep.n)
    raise TypeError(f"not a channel representation: {type(rep).__name__}")


def to_pair_order_vec(a, d: int, n: int) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)[pair_order(d, n)]


def apply_channel(rep: Channel, rho) -> np.ndarray:
    """Evaluate the channel on an operator directly from the given form."""
    rho = as_matrix(rho, square=True)
    if isinstance(rep, KrausChannel):
        return sum(k @ rho @ k.conj().T for k in rep.operators)
    if rho.shape[0] != rep.dim:
        raise DimensionError(f"operator of shape {rho.shape} on a {rep.dim}-dim register")
    phi = product_elements(rep.bases)
    if isinstance(rep, ChiMatrix):
        return np.einsum("ab,aij,jk,blk->il", rep.data, phi, rho, phi.conj(), optimize=True)
    if isinstance(rep, SMatrix):
        coeffs = np.einsum("aij,ij->a", phi.conj(), rho)
        return np.einsum("a,aij->ij", rep.data @ coeffs, phi)
    raise TypeError(f"not a channel representation: {type(rep).__name__}")
