import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_matrix
from qopmat.errors import DimensionError, NotHermitianError
from qopmat.linalg import (
    dagger,
    eigh,
    hs_inner,
    kron,
    matmul,
    partial_trace,
    partial_transpose,
    permute_factors,
    trace,
)
from qopmat.liouville import vec

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])


def triple_loop(a, b):
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            for k in range(a.shape[1]):
                out[i, j] += a[i, k] * b[k, j]
    return out


def test_matmul_identity_and_involution(rng):
    a = random_matrix(rng, 2)
    assert np.array_equal(matmul(np.eye(2), a), a)
    assert np.array_equal(matmul(SX, SX), np.eye(2))


def test_matmul_matches_triple_loop(rng):
    a, b = random_matrix(rng, 3), random_matrix(rng, 3)
    assert np.max(np.abs(matmul(a, b) - triple_loop(a, b))) < 1e-14


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionError):
        matmul(np.eye(2), np.eye(3))


def test_kron_trivial_cases(rng):
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    a = random_matrix(rng, 3)
    assert np.array_equal(kron(a, np.eye(1)), a)


def test_kron_factor_ordering():
    # |i>|j> -> index d*i + j
    ket = lambda k, d: np.eye(d)[:, [k]]
    assert np.array_equal(kron(ket(1, 2), ket(0, 3))[:, 0], np.eye(6)[:, 3])


def test_kron_mixed_product(rng):
    a, b, c, d = (random_matrix(rng, 2) for _ in range(4))
    lhs = kron(a, b) @ kron(c, d)
    assert np.max(np.abs(lhs - kron(a @ c, b @ d))) < 1e-13


def test_hs_inner_examples(rng):
    assert hs_inner(np.eye(2), np.eye(2)) == 2
    assert hs_inner(SX, SY) == 0
    a = random_matrix(rng, 3)
    assert np.array_equal(dagger(dagger(a)), a)


def test_hs_inner_is_vec_dot(rng):
    a, b = random_matrix(rng, 3), random_matrix(rng, 3)
    direct = sum(np.conj(a[i, j]) * b[i, j] for i in range(3) for j in range(3))
    assert abs(hs_inner(a, b) - direct) < 1e-14
    assert abs(np.vdot(vec(a), vec(b)) - np.trace(a.conj().T @ b)) < 1e-14


complex_mats = arrays(
    np.complex128,
    (3, 3),
    elements=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
)


@settings(max_examples=50, deadline=None)
@given(complex_mats, complex_mats)
def test_hs_inner_conjugate_symmetric(a, b):
    assert abs(hs_inner(a, b) - np.conj(hs_inner(b, a))) <= 1e-12 * (1 + abs(hs_inner(a, b)))


def test_eigh_examples():
    e = eigh(np.diag([3.0, 1.0]))
    assert np.array_equal(e.values, [3, 1])
    assert np.allclose(np.abs(e.vectors), np.eye(2))
    e = eigh(SX)
    assert np.allclose(e.values, [1, -1], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 9, 17, 64])
def test_eigh_reconstruction_and_unitarity(rng, n):
    a = random_matrix(rng, n)
    h = (a + a.conj().T) / 2
    e = eigh(h)
    assert np.all(np.diff(e.values) <= 0)
    assert np.max(np.abs(e.vectors.conj().T @ e.vectors - np.eye(n))) < 1e-10
    assert np.max(np.abs(e.reconstruct() - h)) < 1e-10


def test_eigh_deterministic(rng):
    a = random_matrix(rng, 9)
    h = (a + a.conj().T) / 2
    e1, e2 = eigh(h), eigh(h)
    assert np.array_equal(e1.values, e2.values) and np.array_equal(e1.vectors, e2.vectors)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NotHermitianError) as info:
        eigh(np.array([[1, 1e-3], [0, 1]]))
    assert info.value.deviation == pytest.approx(1e-3)


def test_partial_trace_identity():
    assert np.array_equal(partial_trace(np.eye(4), [2, 2], {1}), 2 * np.eye(2))


def _direct_partial_traces(x, d):
    t1 = np.zeros((d, d), dtype=complex)
    t2 = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                t2[i, j] += x[d * i + k, d * j + k]
                t1[i, j] += x[d * k + i, d * k + j]
    return t1, t2


def test_partial_trace_of_dyad(rng):
    a, b = random_matrix(rng, 2), random_matrix(rng, 2)
    dyad = np.outer(vec(a), vec(b).conj())
    tr_first, tr_second = _direct_partial_traces(dyad, 2)
    assert np.max(np.abs(partial_trace(dyad, [2, 2], {1}) - tr_second)) < 1e-13
    assert np.max(np.abs(partial_trace(dyad, [2, 2], {0}) - tr_first)) < 1e-13
    assert np.max(np.abs(tr_second - a @ b.conj().T)) < 1e-13
    assert np.max(np.abs(tr_first - a.T @ b.conj())) < 1e-13


def test_partial_trace_over_all_factors_is_trace(rng):
    x = random_matrix(rng, 12)
    assert abs(partial_trace(x, [2, 3, 2], {0, 1, 2})[0, 0] - trace(x)) < 1e-12


def test_partial_trace_middle_factor(rng):
    a, b, c = random_matrix(rng, 2), random_matrix(rng, 3), random_matrix(rng, 2)
    x = np.kron(np.kron(a, b), c)
    assert np.allclose(partial_trace(x, [2, 3, 2], [1]), np.trace(b) * np.kron(a, c))


def test_partial_trace_errors():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4), [2, 3], [0])
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4), [2, 2], [2])


def test_partial_transpose(rng):
    assert np.array_equal(partial_transpose(np.eye(4), [2, 2], 1), np.eye(4))
    x = random_matrix(rng, 6)
    assert np.array_equal(partial_transpose(partial_transpose(x, [2, 3], 1), [2, 3], 1), x)
    a, b = random_matrix(rng, 2), random_matrix(rng, 3)
    assert np.array_equal(partial_transpose(np.kron(a, b), [2, 3], 0), np.kron(a.T, b))
    with pytest.raises(DimensionError):
        partial_transpose(x, [2, 3], 2)


def test_partial_transpose_of_isotropic_is_swap():
    rho = np.zeros((4, 4))
    for i in (0, 3):
        for j in (0, 3):
            rho[i, j] = 0.5
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert np.array_equal(partial_transpose(2 * rho, [2, 2], 1), swap)


def test_permute_factors(rng):
    a, b, c = random_matrix(rng, 2), random_matrix(rng, 3), random_matrix(rng, 4)
    x = np.kron(np.kron(a, b), c)
    assert np.allclose(permute_factors(x, [2, 3, 4], [2, 0, 1]), np.kron(np.kron(c, a), b))
