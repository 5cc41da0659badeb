import numpy as np
import pytest

from qopmat.bases import gellmann_basis, weyl_basis
from qopmat.channels import (
    depolarizing_channel,
    identity_channel,
    named_channel,
    random_density_matrix,
    random_kraus_channel,
    random_unitary,
    unitary_channel,
)
from qopmat.composition import (
    CircuitSpec,
    compose,
    identity_smatrix,
    lift,
    permute_wires,
    run_circuit,
)
from qopmat.errors import BasisMismatchError, DimensionError
from qopmat.liouville import unvec, vec
from qopmat.representations import apply_channel, superop_matrix, to_chi, to_smatrix

G2 = gellmann_basis(2)


def max_dev(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def lift_oracle(u, targets, n):
    """Full-register unitary built from kron products and a wire permutation."""
    k = len(targets)
    rest = [w for w in range(n) if w not in targets]
    full = np.kron(u, np.eye(2 ** (n - k)))
    order = list(targets) + rest
    t = full.reshape([2] * (2 * n))
    perm = [order.index(w) for w in range(n)]
    t = t.transpose(perm + [n + p for p in perm])
    return t.reshape(2**n, 2**n)


def test_compose_known_values():
    x = to_smatrix(named_channel("x", 2), G2)
    assert max_dev(compose(identity_smatrix(2, 1), x).data, x.data) == 0
    dep = to_smatrix(depolarizing_channel(2), G2)
    assert max_dev(compose(dep, dep).data, dep.data) < 1e-14


def test_compose_matches_sequential_action(rng):
    a = random_kraus_channel(2, 1, 2, rng)
    b = random_kraus_channel(2, 1, 3, rng)
    s = compose(to_smatrix(a, G2), to_smatrix(b, G2))
    for _ in range(5):
        rho = random_density_matrix(2, rng)
        seq = apply_channel(a, apply_channel(b, rho))
        assert max_dev(apply_channel(s, rho), seq) < 1e-12
        l1, l2 = superop_matrix(a), superop_matrix(b)
        assert max_dev(unvec(l1 @ l2 @ vec(rho)), seq) < 1e-12


def test_compose_is_associative(rng):
    s = [to_smatrix(random_kraus_channel(2, 1, 2, rng), G2) for _ in range(3)]
    left = compose(compose(s[0], s[1]), s[2])
    right = compose(s[0], compose(s[1], s[2]))
    assert max_dev(left.data, right.data) < 1e-13


def test_compose_mismatches():
    with pytest.raises(BasisMismatchError):
        compose(identity_smatrix(2, 1, G2), identity_smatrix(2, 1, weyl_basis(2)))
    with pytest.raises(DimensionError):
        compose(identity_smatrix(2, 1), identity_smatrix(2, 2))


def test_lift_identity():
    assert max_dev(lift(identity_channel(2), [0], 2).data, np.eye(16)) < 1e-12


def test_lift_x_on_second_wire():
    s = lift(named_channel("x", 2), [1], 2, G2)
    rho = np.zeros((4, 4))
    rho[0, 0] = 1
    out = apply_channel(s, rho)
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    assert max_dev(out, expected) < 1e-12


@pytest.mark.parametrize("targets", [(0,), (1,), (2,), (0, 2), (2, 0), (1, 0)])
def test_lift_matches_unitary_oracle(targets, rng):
    u = random_unitary(2 ** len(targets), rng)
    s = lift(unitary_channel(u, 2), targets, 3, G2)
    want = to_smatrix(unitary_channel(lift_oracle(u, targets, 3), 2), G2)
    assert max_dev(s.data, want.data) < 1e-12


def test_lift_matches_kron_then_permute(rng):
    kraus = random_kraus_channel(2, 1, 2, rng)
    s = to_smatrix(kraus, G2).data
    lifted = lift(kraus, [1], 2, G2)
    # channel on wire 0 of (S (x) I), then swap wires
    base = np.kron(s, np.eye(4))
    swapped = permute_wires(type(lifted)(base, G2), [1, 0])
    assert max_dev(lifted.data, swapped.data) < 1e-12


def test_cnot_reversed_is_wire_swap():
    cnot = named_channel("cnot", 2)
    rev = lift(cnot, (1, 0), 2, G2)
    fwd = lift(cnot, (0, 1), 2, G2)
    assert max_dev(rev.data, permute_wires(fwd, [1, 0]).data) < 1e-12


def test_disjoint_lifts_commute(rng):
    a = lift(random_kraus_channel(2, 1, 2, rng), [0], 2, G2)
    b = lift(random_kraus_channel(2, 1, 3, rng), [1], 2, G2)
    assert max_dev(compose(a, b).data, compose(b, a).data) < 1e-12


def test_lift_errors():
    with pytest.raises(DimensionError):
        lift(named_channel("cnot", 2), [0], 2)
    with pytest.raises(ValueError):
        lift(named_channel("x", 2), [2], 2)
    with pytest.raises(ValueError):
        lift(named_channel("cnot", 2), [1, 1], 2)


def test_empty_and_involution_circuits():
    c = CircuitSpec(2, ("a",), ())
    assert max_dev(run_circuit(c, {}).data, np.eye(4)) == 0
    c = CircuitSpec(2, ("a",), (("x", (0,)), ("x", (0,))))
    s = run_circuit(c, {"x": named_channel("x", 2)})
    assert max_dev(s.data, np.eye(4)) < 1e-12


def test_bell_circuit():
    c = CircuitSpec(2, ("q0", "q1"), (("h", (0,)), ("cnot", (0, 1))))
    s = run_circuit(c, {"h": named_channel("h", 2), "cnot": named_channel("cnot", 2)})
    rho = np.zeros((4, 4))
    rho[0, 0] = 1
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert max_dev(apply_channel(s, rho), np.outer(psi, psi)) < 1e-12
    chi = to_chi(s)
    assert abs(np.trace(chi.data) - 4) < 1e-12
    assert np.sum(np.linalg.eigvalsh(chi.data) > 1e-9) == 1


def test_circuit_order_is_temporal(rng):
    a = random_kraus_channel(2, 1, 2, rng)
    b = random_kraus_channel(2, 1, 2, rng)
    c = CircuitSpec(2, ("w",), (("a", (0,)), ("b", (0,))))
    s = run_circuit(c, {"a": a, "b": b}, G2)
    rho = random_density_matrix(2, rng)
    assert max_dev(apply_channel(s, rho), apply_channel(b, apply_channel(a, rho))) < 1e-12


def test_circuit_validation():
    with pytest.raises(ValueError):
        CircuitSpec(2, ("a", "a"))
    with pytest.raises(ValueError):
        CircuitSpec(2, ("a",), (("x", (1,)),))
    with pytest.raises(KeyError):
        run_circuit(CircuitSpec(2, ("a",), (("x", (0,)),)), {})
