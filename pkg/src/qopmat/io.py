"""JSON file formats.

Complex entries are ``[re, im]`` pairs and matrices are lists of rows. Output
is canonical: sorted keys, compact separators and shortest round-trip float
text, so identical inputs produce byte-identical files.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from qopmat.bases import KINDS, OperatorBasis, make_basis
from qopmat.channels import named_channel
from qopmat.composition import CircuitSpec
from qopmat.errors import FormatError
from qopmat.representations import Channel, ChiMatrix, KrausChannel, SMatrix
from qopmat.tomography import TomographyDataset

FORMAT_TAG = "qopmat-v1"
REPRS = ("chi", "smatrix", "kraus")


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def _num(x: float) -> float:
    # collapses -0.0 so equal values serialize identically
    return float(x) + 0.0


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[_num(z.real), _num(z.imag)] for z in row] for row in m]


def decode_matrix(obj) -> np.ndarray:
    """Accept a list of rows of pairs, or a flat row-major list of pairs."""
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix entries must be [re, im] number pairs: {exc}") from None
    if a.ndim == 2 and a.shape[1] == 2:
        side = math.isqrt(a.shape[0])
        if side * side != a.shape[0]:
            raise FormatError(f"flat matrix of {a.shape[0]} entries is not square")
        a = a.reshape(side, side, 2)
    if a.ndim != 3 or a.shape[2] != 2 or a.shape[0] == 0:
        raise FormatError(f"matrix must be rows of [re, im] pairs, got array shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise FormatError("matrix contains non-finite numbers")
    return a[..., 0] + 1j * a[..., 1]


def _require(obj: dict, key: str, kind=None):
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    if key not in obj:
        raise FormatError(f"missing required field {key!r}")
    value = obj[key]
    if kind is not None and (not isinstance(value, kind) or (kind is int and isinstance(value, bool))):
        raise FormatError(f"field {key!r} has the wrong type")
    return value


# -- bases -------------------------------------------------------------------


def basis_to_json(basis: OperatorBasis, with_elements: bool = True) -> dict:
    obj = {"d": basis.d, "kind": basis.kind}
    if with_elements or basis.kind == "custom":
        obj["elements"] = [encode_matrix(e) for e in basis.elements]
    return obj


def basis_from_json(obj) -> OperatorBasis:
    d = _require(obj, "d", int)
    kind = obj.get("kind", "custom")
    if kind not in KINDS:
        raise FormatError(f"unknown basis kind {kind!r}")
    if "elements" in obj:
        elems = np.array([decode_matrix(m) for m in obj["elements"]])
        return OperatorBasis(d, elems, kind)
    if kind == "custom":
        raise FormatError("a custom basis must list its elements")
    return make_basis(kind, d)


# -- channels ----------------------------------------------------------------


def channel_to_json(rep: Channel) -> dict:
    if isinstance(rep, KrausChannel):
        return {
            "format": FORMAT_TAG,
            "d": rep.d,
            "n": rep.n,
            "basis": None,
            "repr": "kraus",
            "data": [encode_matrix(k) for k in rep.operators],
        }
    return {
        "format": FORMAT_TAG,
        "d": rep.d,
        "n": rep.n,
        "basis": [basis_to_json(b, with_elements=False) for b in rep.bases],
        "repr": "chi" if isinstance(rep, ChiMatrix) else "smatrix",
        "data": encode_matrix(rep.data),
    }


def channel_from_json(obj) -> Channel:
    tag = _require(obj, "format")
    if tag != FORMAT_TAG:
        raise FormatError(f"unsupported channel format {tag!r}")
    d = _require(obj, "d", int)
    n = _require(obj, "n", int)
    kind = _require(obj, "repr")
    if kind not in REPRS:
        raise FormatError(f"unknown repr {kind!r}; expected one of {REPRS}")
    data = _require(obj, "data")
    if kind == "kraus":
        if not isinstance(data, list) or not data:
            raise FormatError("kraus data must be a non-empty list of matrices")
        return KrausChannel(tuple(decode_matrix(m) for m in data), d, n)
    raw = obj.get("basis")
    if raw is None:
        raise FormatError("chi and smatrix files need a basis")
    bases = [basis_from_json(b) for b in raw] if isinstance(raw, list) else [basis_from_json(raw)] * n
    if len(bases) != n:
        raise FormatError(f"expected {n} per-qudit bases, got {len(bases)}")
    if any(b.d != d for b in bases):
        raise FormatError("basis dimension does not match d")
    cls = ChiMatrix if kind == "chi" else SMatrix
    return cls(decode_matrix(data), tuple(bases))


# -- datasets and circuits ---------------------------------------------------


def dataset_to_json(ds: TomographyDataset) -> dict:
    return {
        "d": ds.d,
        "n": ds.n,
        "sigma": _num(ds.noise_sigma),
        "seed": ds.seed,
        "values": [_num(v) for v in ds.values],
    }


def dataset_from_json(obj) -> TomographyDataset:
    d = _require(obj, "d", int)
    n = _require(obj, "n", int)
    values = _require(obj, "values", list)
    sigma = obj.get("sigma", 0.0)
    seed = obj.get("seed")
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        raise FormatError("dataset values must be real numbers") from None
    return TomographyDataset(d, n, arr, float(sigma), seed)


def circuit_from_json(obj, base_dir: Path | None = None):
    """Parse a circuit file; returns ``(CircuitSpec, channels_by_ref)``.

    A step's ``channel`` is a built-in name (see
    :data:`qopmat.channels.CHANNEL_NAMES`) or a channel file path relative
    to ``base_dir``.
    """
    d = _require(obj, "d", int)
    wires = _require(obj, "wires", list)
    steps_raw = _require(obj, "steps", list)
    index = {w: i for i, w in enumerate(wires)}
    steps, channels = [], {}
    for step in steps_raw:
        ref = _require(step, "channel", str)
        names = _require(step, "targets", list)
        try:
            targets = tuple(index[w] for w in names)
        except (KeyError, TypeError):
            raise FormatError(f"step targets {names} name unknown wires") from None
        if ref not in channels:
            channels[ref] = _resolve_channel(ref, d, base_dir)
        steps.append((ref, targets))
    return CircuitSpec(d, tuple(wires), tuple(steps)), channels


def _resolve_channel(ref: str, d: int, base_dir: Path | None) -> Channel:
    try:
        return named_channel(ref, d)
    except KeyError:
        pass
    path = Path(ref)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    return channel_from_json(read_json(path))


def read_json(path) -> object:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj), encoding="utf-8")
