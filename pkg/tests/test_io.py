import json

import numpy as np
import pytest

from qopmat import io
from qopmat.bases import custom_basis, gellmann_basis, weyl_basis
from qopmat.channels import random_kraus_channel, random_unitary
from qopmat.errors import FormatError
from qopmat.representations import to_chi, to_smatrix
from qopmat.tomography import simulate_dataset


def test_canonical_dumps_is_sorted_and_compact():
    assert io.canonical_dumps({"b": 1, "a": [0.1, -0.0]}) == '{"a":[0.1,-0.0],"b":1}\n'
    assert io.encode_matrix(np.array([[-0.0 + 0j]])) == [[[0.0, 0.0]]]
    assert json.dumps(io.encode_matrix(np.array([[-0.0 - 0.0j]]))) == "[[[0.0, 0.0]]]"


def test_matrix_roundtrip_is_exact(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    text = io.canonical_dumps(io.encode_matrix(m))
    assert np.array_equal(io.decode_matrix(json.loads(text)), m)


def test_decode_flat_and_bad_matrices():
    flat = [[1, 0], [0, 0], [0, 0], [1, 0]]
    assert np.array_equal(io.decode_matrix(flat), np.eye(2))
    for bad in ([[1, 0], [0, 0], [0, 0]], "x", [[[1, 0, 0]]], [[[float("inf"), 0]]]):
        with pytest.raises(FormatError):
            io.decode_matrix(bad)


@pytest.mark.parametrize("form", ["chi", "smatrix", "kraus"])
def test_channel_roundtrip(form, rng):
    kraus = random_kraus_channel(2, 2, 2, rng)
    bases = (gellmann_basis(2), weyl_basis(2))
    rep = {"chi": to_chi(kraus, bases), "smatrix": to_smatrix(kraus, bases), "kraus": kraus}[form]
    obj = json.loads(io.canonical_dumps(io.channel_to_json(rep)))
    back = io.channel_from_json(obj)
    assert type(back) is type(rep)
    if form == "kraus":
        assert all(np.array_equal(a, b) for a, b in zip(back.operators, rep.operators))
    else:
        assert back.bases == rep.bases
        assert np.array_equal(back.data, rep.data)


def test_custom_basis_roundtrip(rng):
    b = custom_basis(np.einsum("ab,aij->bij", random_unitary(4, rng), gellmann_basis(2).elements))
    assert "elements" in io.basis_to_json(b, with_elements=False)
    assert io.basis_from_json(io.basis_to_json(b)) == b
    with pytest.raises(FormatError):
        io.basis_from_json({"d": 2, "kind": "custom"})


def test_channel_format_errors():
    good = io.channel_to_json(to_chi(random_kraus_channel(2, 1, 1, np.random.default_rng(0))))
    for key, value in [("format", "other"), ("repr", "ptm"), ("d", "2"), ("d", True), ("basis", None)]:
        obj = dict(good, **{key: value})
        with pytest.raises(FormatError):
            io.channel_from_json(obj)
    obj = dict(good)
    del obj["data"]
    with pytest.raises(FormatError):
        io.channel_from_json(obj)


def test_dataset_roundtrip(rng):
    ds = simulate_dataset(random_kraus_channel(2, 1, 2, rng), noise_sigma=0.01, seed=3)
    back = io.dataset_from_json(json.loads(io.canonical_dumps(io.dataset_to_json(ds))))
    assert np.array_equal(back.values, ds.values)
    assert back.seed == 3 and back.noise_sigma == 0.01


def test_circuit_parsing(tmp_path):
    (tmp_path / "g.json").write_text(
        io.canonical_dumps(io.channel_to_json(random_kraus_channel(2, 1, 1, np.random.default_rng(1))))
    )
    obj = {"d": 2, "wires": ["a", "b"], "steps": [{"channel": "h", "targets": ["a"]},
                                                   {"channel": "g.json", "targets": ["b"]}]}
    circuit, channels = io.circuit_from_json(obj, tmp_path)
    assert circuit.steps == (("h", (0,)), ("g.json", (1,)))
    assert set(channels) == {"h", "g.json"}
    with pytest.raises(FormatError):
        io.circuit_from_json(dict(obj, steps=[{"channel": "h", "targets": ["c"]}]), tmp_path)
