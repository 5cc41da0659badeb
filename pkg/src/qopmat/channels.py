"""Standard channels and random channel generators."""
from __future__ import annotations

import numpy as np

from qopmat.bases import make_basis
from qopmat.errors import DimensionError
from qopmat.representations import KrausChannel


def identity_channel(d: int, n: int = 1) -> KrausChannel:
    return KrausChannel((np.eye(d**n),), d, n)


def unitary_channel(u, d: int | None = None) -> KrausChannel:
    return KrausChannel.from_operators([u], d)


def depolarizing_channel(d: int, basis: str = "transition") -> KrausChannel:
    """Completely depolarizing map, Kraus operators ``E_a / sqrt(d)`` of any basis."""
    b = make_basis(basis, d)
    return KrausChannel(tuple(e / np.sqrt(d) for e in b.elements), d, 1)


def shift(d: int) -> np.ndarray:
    """Generalized X: ``|k> -> |k+1 mod d>``."""
    return np.roll(np.eye(d), 1, axis=0).astype(complex)


def clock(d: int) -> np.ndarray:
    """Generalized Z: ``|k> -> omega^k |k>``."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def fourier(d: int) -> np.ndarray:
    """Discrete Fourier transform; the Hadamard gate for ``d = 2``."""
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


def controlled_shift(d: int) -> np.ndarray:
    """``|a, b> -> |a, b + a mod d>``; CNOT for qubits."""
    u = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            u[d * a + (a + b) % d, d * a + b] = 1
    return u


def swap_gate(d: int) -> np.ndarray:
    u = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            u[d * b + a, d * a + b] = 1
    return u


_PAULI_Y = np.array([[0, -1j], [1j, 0]])


def named_channel(name: str, d: int) -> KrausChannel:
    """Built-in channels usable by name in circuit files."""
    key = name.lower()
    if key == "identity":
        return identity_channel(d)
    if key == "depolarizing":
        return depolarizing_channel(d)
    if key == "x":
        return unitary_channel(shift(d), d)
    if key == "z":
        return unitary_channel(clock(d), d)
    if key == "h":
        return unitary_channel(fourier(d), d)
    if key == "cnot":
        return unitary_channel(controlled_shift(d), d)
    if key == "swap":
        return unitary_channel(swap_gate(d), d)
    if key == "y":
        if d != 2:
            raise DimensionError("the 'y' gate is defined for qubits only")
        return unitary_channel(_PAULI_Y, d)
    raise KeyError(name)


CHANNEL_NAMES = ("identity", "depolarizing", "x", "y", "z", "h", "cnot", "swap")


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_kraus_channel(
    d: int, n: int, rank: int, rng: np.random.Generator, trace_preserving: bool = True
) -> KrausChannel:
    """Random channel from a Gaussian isometry split into ``rank`` Kraus blocks."""
    dim = d**n
    z = rng.normal(size=(rank * dim, dim)) + 1j * rng.normal(size=(rank * dim, dim))
    if trace_preserving:
        z, _ = np.linalg.qr(z)
    else:
        z /= np.linalg.norm(z, 2) * 1.01
    return KrausChannel(tuple(z.reshape(rank, dim, dim)), d, n)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)
