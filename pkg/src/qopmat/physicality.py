"""Physicality diagnostics, process fidelity and purity of channels."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from qopmat.errors import NotRankOneError
from qopmat.linalg import HERMITIAN_TOL, hermiticity_deviation, partial_trace
from qopmat.representations import (
    CP_TOL,
    Channel,
    ChiMatrix,
    change_basis,
    choi_operator,
    to_chi,
)

TRACE_TOL = 1e-9


@dataclass(frozen=True)
class PhysicalityReport:
    hermiticity_deviation: float
    min_chi_eigenvalue: float
    max_chi_eigenvalue: float
    trace_condition_excess: float
    trace_condition_deficit: float
    is_cp: bool
    is_trace_nonincreasing: bool
    is_trace_preserving: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _hermitian_eigvals(m: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def trace_condition_matrix(rep: Channel) -> np.ndarray:
    """Choi operator with every output factor traced out.

    Equals ``(sum_i K_i^dag K_i)^T``; the channel is trace non-increasing iff
    this is at most the identity.
    """
    choi = choi_operator(rep)
    d, n = rep.d, rep.n
    return partial_trace(choi, [d] * (2 * n), range(0, 2 * n, 2))


def check_physical(rep: Channel) -> PhysicalityReport:
    """Complete positivity from the chi spectrum; trace conditions from the Choi operator."""
    chi = to_chi(rep)
    herm = hermiticity_deviation(chi.data)
    lam = _hermitian_eigvals(chi.data)
    lo, hi = float(lam[0]), float(lam[-1])
    is_cp = herm <= HERMITIAN_TOL and lo >= -CP_TOL * hi

    t = trace_condition_matrix(chi)
    mu = _hermitian_eigvals(t - np.eye(t.shape[0]))
    excess, deficit = float(mu[-1]), float(-mu[0])
    return PhysicalityReport(
        hermiticity_deviation=herm,
        min_chi_eigenvalue=lo,
        max_chi_eigenvalue=hi,
        trace_condition_excess=excess,
        trace_condition_deficit=deficit,
        is_cp=bool(is_cp),
        is_trace_nonincreasing=excess <= TRACE_TOL,
        is_trace_preserving=excess <= TRACE_TOL and deficit <= TRACE_TOL,
    )


def process_fidelity(actual: Channel, ideal: Channel) -> float:
    """``Tr(chi_actual chi_ideal) / d**(2n)`` against a rank-one ideal.

    ``actual`` is re-expressed in the basis of ``ideal`` when they differ.
    """
    chi_b = to_chi(ideal)
    chi_a = to_chi(actual)
    if (chi_a.d, chi_a.n) != (chi_b.d, chi_b.n):
        raise ValueError("channels act on different registers")
    if chi_a.bases != chi_b.bases:
        chi_a = change_basis(chi_a, chi_b.bases)
    lam = _hermitian_eigvals(chi_b.data)
    if lam[-1] <= 0 or (len(lam) > 1 and abs(lam[-2]) > 1e-9 * lam[-1]) or lam[0] < -1e-9 * lam[-1]:
        raise NotRankOneError(
            "the ideal channel must have a rank-one chi matrix "
            f"(top eigenvalues {lam[-1]:.3g}, {lam[-2] if len(lam) > 1 else 0:.3g})"
        )
    overlap = np.sum(chi_a.data * chi_b.data.T)
    return float(overlap.real) / chi_b.d ** (2 * chi_b.n)


def channel_purity(rep: Channel) -> float:
    """``Tr[(chi / d**n)**2]``; 1 exactly for unitary channels."""
    chi: ChiMatrix = to_chi(rep)
    x = chi.data / chi.dim
    return float(np.sum(x * x.T).real)
