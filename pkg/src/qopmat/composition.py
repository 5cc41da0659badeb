"""Sequential composition of channels and circuits on a qudit register.

S-matrices compose by matrix product: ``compose(s1, s2)`` is the channel that
applies ``s2`` first and ``s1`` second. Circuit steps are listed in temporal
order, so the circuit's S-matrix is ``S_k ... S_2 S_1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from qopmat.bases import OperatorBasis, gellmann_basis
from qopmat.errors import BasisMismatchError, DimensionError
from qopmat.linalg import kron_all, permute_factors
from qopmat.representations import (
    Channel,
    ChiMatrix,
    KrausChannel,
    SMatrix,
    check_size,
    chi_from_kraus,
    convert_n,
    to_chi,
)


@dataclass(frozen=True)
class CircuitSpec:
    """Channel applications on named wires; ``steps`` holds ``(channel_ref, targets)``."""

    d: int
    wires: tuple
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(self.wires))
        if not self.wires:
            raise DimensionError("a circuit needs at least one wire")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError("wire names must be distinct")
        steps = []
        for ref, targets in self.steps:
            targets = tuple(int(t) for t in targets)
            _check_targets(targets, len(self.wires))
            steps.append((ref, targets))
        object.__setattr__(self, "steps", tuple(steps))

    @property
    def n(self) -> int:
        return len(self.wires)


def _check_targets(targets: Sequence[int], n: int) -> None:
    if not targets:
        raise ValueError("a step needs at least one target wire")
    if len(set(targets)) != len(targets):
        raise ValueError(f"target wires must be distinct, got {list(targets)}")
    if any(t < 0 or t >= n for t in targets):
        raise ValueError(f"targets {list(targets)} outside a {n}-wire register")


def compose(s1: SMatrix, s2: SMatrix) -> SMatrix:
    """Channel ``s1 o s2`` (``s2`` acts first)."""
    if (s1.d, s1.n) != (s2.d, s2.n):
        raise DimensionError("cannot compose channels on different registers")
    if s1.bases != s2.bases:
        raise BasisMismatchError("S-matrices must be expressed in the same bases")
    return SMatrix(s1.data @ s2.data, s1.bases)


def identity_smatrix(d: int, n: int, basis: OperatorBasis | None = None) -> SMatrix:
    basis = basis or gellmann_basis(d)
    return SMatrix(np.eye(d ** (2 * n), dtype=complex), (basis,) * n)


def _register_basis(rep: Channel, d: int) -> OperatorBasis:
    bases = getattr(rep, "bases", None)
    if bases and len(set(bases)) == 1:
        return bases[0]
    return gellmann_basis(d)


def lift(
    rep: Channel,
    targets: Sequence[int],
    n_wires: int,
    basis: OperatorBasis | None = None,
) -> SMatrix:
    """S-matrix of ``rep`` acting on ``targets`` of an ``n_wires`` register.

    The channel's chi matrix is tensored with the identity channel's chi
    matrix on every other wire, its qudit factors are moved to the target
    positions, and the result is converted to S form. ``targets[j]`` is the
    wire that receives the channel's ``j``-th qudit.
    """
    targets = [int(t) for t in targets]
    _check_targets(targets, n_wires)
    if len(targets) != rep.n:
        raise DimensionError(f"channel acts on {rep.n} qudit(s) but {len(targets)} targets given")
    d = rep.d
    check_size(d, n_wires)
    basis = basis or _register_basis(rep, d)

    chi_t = to_chi(rep, (basis,) * rep.n).data
    chi_id = chi_from_kraus(KrausChannel((np.eye(d),), d, 1), basis).data
    rest = [w for w in range(n_wires) if w not in targets]
    chi = kron_all([chi_t] + [chi_id] * len(rest))
    order = targets + rest
    perm = [order.index(w) for w in range(n_wires)]
    chi = permute_factors(chi, [d * d] * n_wires, perm)
    return convert_n(ChiMatrix(chi, (basis,) * n_wires))


def run_circuit(
    circuit: CircuitSpec,
    channels: Mapping[str, Channel],
    basis: OperatorBasis | None = None,
) -> SMatrix:
    """Ordered product of the lifted S-matrices, later steps on the left."""
    check_size(circuit.d, circuit.n)
    basis = basis or gellmann_basis(circuit.d)
    total = identity_smatrix(circuit.d, circuit.n, basis)
    for ref, targets in circuit.steps:
        try:
            rep = channels[ref]
        except KeyError:
            raise KeyError(f"circuit references unknown channel {ref!r}") from None
        if rep.d != circuit.d:
            raise DimensionError(f"channel {ref!r} has d={rep.d}, circuit has d={circuit.d}")
        total = compose(lift(rep, targets, circuit.n, basis), total)
    return total


def permute_wires(s: SMatrix, perm: Sequence[int]) -> SMatrix:
    """Relabel qudits: wire ``k`` of the result is wire ``perm[k]`` of ``s``."""
    return SMatrix(
        permute_factors(s.data, [s.d * s.d] * s.n, perm), tuple(s.bases[p] for p in perm)
    )
