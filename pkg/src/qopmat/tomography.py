"""Simulated entanglement-assisted process identification.

Half of each maximally entangled pair passes through the channel; the output
is the Choi operator. Measuring the product operators
``Phi_a (x) Phi_b^*`` pair by pair reads out the S-matrix directly, with no
inversion step. For ``n`` qudits the readout order is ``(a_1, b_1, a_2, b_2,
...)`` lexicographically, where ``a`` is the row and ``b`` the column of the
S-matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qopmat.bases import OperatorBasis, gellmann_basis
from qopmat.errors import DimensionError, InvalidBasisError, NotCompletelyPositiveError
from qopmat.physicality import PhysicalityReport, check_physical
from qopmat.representations import (
    Channel,
    ChiMatrix,
    SMatrix,
    check_size,
    choi_operator,
    convert_n,
)


@dataclass(frozen=True, eq=False)
class TomographyDataset:
    d: int
    n: int
    values: np.ndarray = field(repr=False)
    noise_sigma: float = 0.0
    seed: int | None = None
    basis: OperatorBasis | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.basis is None:
            object.__setattr__(self, "basis", gellmann_basis(self.d))
        if not self.basis.is_hermitian:
            raise InvalidBasisError("tomography needs a Hermitian operator basis")
        if self.basis.d != self.d:
            raise DimensionError("basis dimension does not match the dataset")
        v = np.asarray(self.values)
        if np.iscomplexobj(v):
            raise ValueError("expectation values must be real")
        v = v.astype(float).reshape(-1)
        if v.size != self.d ** (4 * self.n):
            raise DimensionError(
                f"expected {self.d ** (4 * self.n)} values for d={self.d}, n={self.n}, got {v.size}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("expectation values must be finite")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def _readout(choi: np.ndarray, basis: OperatorBasis, n: int) -> np.ndarray:
    """``Tr[(W_{a1 b1} (x) ... (x) W_{an bn})^dag choi]`` with ``W_ab = E_a (x) E_b^*``."""
    d2 = basis.d**2
    e = basis.elements
    w = np.einsum("aij,bkl->abikjl", e, e.conj()).reshape(d2, d2, d2, d2)
    axes = [ax for q in range(n) for ax in (q, n + q)]
    t = choi.reshape([d2] * (2 * n)).transpose(axes)
    # axes are now (r_1, c_1, r_2, c_2, ...); replace each pair by (a_q, b_q)
    for q in range(n):
        t = np.tensordot(w.conj(), t, axes=([2, 3], [2 * q, 2 * q + 1]))
        t = np.moveaxis(t, [0, 1], [2 * q, 2 * q + 1])
    return t.reshape(-1)


def simulate_dataset(
    channel: Channel,
    basis: OperatorBasis | None = None,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> TomographyDataset:
    """Expectation values of the product observables on the channel's Choi state.

    Noise is additive Gaussian with standard deviation ``noise_sigma`` drawn
    from ``numpy.random.default_rng(seed)``.
    """
    d, n = channel.d, channel.n
    basis = basis or gellmann_basis(d)
    if not basis.is_hermitian:
        raise InvalidBasisError("tomography needs a Hermitian operator basis")
    check_size(d, n)
    report = check_physical(channel)
    if not report.is_cp:
        raise NotCompletelyPositiveError(report.min_chi_eigenvalue)
    values = _readout(choi_operator(channel), basis, n)
    if np.max(np.abs(values.imag), initial=0.0) > 1e-9:
        raise ValueError("channel does not preserve Hermiticity; readout is not real")
    values = values.real.copy()
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        values += rng.normal(0.0, noise_sigma, size=values.size)
    return TomographyDataset(d, n, values, float(noise_sigma), seed, basis)


def smatrix_from_dataset(ds: TomographyDataset) -> SMatrix:
    d2, n = ds.d**2, ds.n
    t = ds.values.reshape([d2] * (2 * n))
    axes = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    size = d2**n
    return SMatrix(t.transpose(axes).reshape(size, size).astype(complex), (ds.basis,) * n)


def reconstruct(ds: TomographyDataset) -> tuple[SMatrix, ChiMatrix, PhysicalityReport]:
    """S-matrix by reindexing, chi by conversion, plus an (unrepaired) physicality report."""
    s = smatrix_from_dataset(ds)
    chi = convert_n(s)
    return s, chi, check_physical(chi)
