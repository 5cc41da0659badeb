"""Command-line interface.

Exit status is 0 on success, 1 when an input fails validation (bad basis,
non-CP channel where one is required, size cap exceeded) and 2 on I/O or
parse failures.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from qopmat import io
from qopmat.bases import make_basis
from qopmat.composition import run_circuit
from qopmat.errors import FormatError, QopmatError
from qopmat.physicality import check_physical, process_fidelity
from qopmat.representations import to_chi, to_kraus, to_smatrix
from qopmat.tomography import reconstruct, simulate_dataset

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class _IOFailure(Exception):
    pass


def _load(path: str, parser):
    try:
        obj = io.read_json(path)
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise _IOFailure(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    try:
        return parser(obj)
    except (FormatError, OSError, json.JSONDecodeError) as exc:
        raise _IOFailure(f"{path}: {exc}") from None


def _emit(obj, out: str | None) -> None:
    if out is None:
        sys.stdout.write(io.canonical_dumps(obj))
        return
    try:
        io.write_json(out, obj)
    except OSError as exc:
        raise _IOFailure(f"cannot write {out}: {exc.strerror or exc}") from None


def _basis_arg(value: str | None, d: int):
    if value is None:
        return make_basis("gellmann", d)
    if Path(value).suffix == ".json" or Path(value).exists():
        return _load(value, io.basis_from_json)
    return make_basis(value, d)


def cmd_basis(args) -> int:
    basis = make_basis(args.kind, args.d)
    _emit(io.basis_to_json(basis), args.out)
    return EXIT_OK


def cmd_convert(args) -> int:
    rep = _load(args.input, io.channel_from_json)
    bases = (_basis_arg(args.basis, rep.d),) * rep.n if args.basis else None
    if args.to == "chi":
        out = to_chi(rep, bases)
    elif args.to == "smatrix":
        out = to_smatrix(rep, bases)
    else:
        out = to_kraus(rep)
    _emit(io.channel_to_json(out), args.out)
    return EXIT_OK


def cmd_kraus(args) -> int:
    rep = _load(args.input, io.channel_from_json)
    _emit(io.channel_to_json(to_kraus(rep)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = _load(args.input, io.channel_from_json)
    report = check_physical(rep)
    _emit(report.to_dict(), None)
    if args.strict and not (report.is_cp and report.is_trace_nonincreasing):
        return EXIT_INVALID
    return EXIT_OK


def cmd_compose(args) -> int:
    base = Path(args.circuit).parent

    def parse(obj):
        return io.circuit_from_json(obj, base)

    circuit, channels = _load(args.circuit, parse)
    basis = _basis_arg(args.basis, circuit.d)
    _emit(io.channel_to_json(run_circuit(circuit, channels, basis)), args.out)
    return EXIT_OK


def cmd_fidelity(args) -> int:
    a = _load(args.a, io.channel_from_json)
    b = _load(args.b, io.channel_from_json)
    print(format(process_fidelity(a, b), ".15g"))
    return EXIT_OK


def cmd_tomo(args) -> int:
    if args.reconstruct:
        ds = _load(args.reconstruct, io.dataset_from_json)
        s, chi, report = reconstruct(ds)
        _emit(io.channel_to_json(chi if args.to == "chi" else s), args.out)
        if args.out is not None:
            _emit(report.to_dict(), None)
        return EXIT_OK
    if not args.channel:
        raise _UsageError("tomo needs --channel (simulate) or --reconstruct")
    rep = _load(args.channel, io.channel_from_json)
    ds = simulate_dataset(rep, noise_sigma=args.sigma, seed=args.seed)
    _emit(io.dataset_to_json(ds), args.out)
    return EXIT_OK


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qopmat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", help="write a canonical operator basis")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--kind", choices=["transition", "weyl", "gellmann"], required=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_basis)

    c = sub.add_parser("convert", help="convert a channel file between forms and bases")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--to", choices=["chi", "smatrix", "kraus"], required=True)
    c.add_argument("--basis", help="basis kind or basis file (default: keep, else gellmann)")
    c.add_argument("--out")
    c.set_defaults(func=cmd_convert)

    k = sub.add_parser("kraus", help="extract canonical Kraus operators")
    k.add_argument("--in", dest="input", required=True)
    k.add_argument("--out")
    k.set_defaults(func=cmd_kraus)

    v = sub.add_parser("verify", help="print a physicality report as JSON")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--strict", action="store_true", help="exit 1 unless CP and trace non-increasing")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("compose", help="S-matrix of a circuit file")
    m.add_argument("--circuit", required=True)
    m.add_argument("--basis", help="register basis kind or file (default gellmann)")
    m.add_argument("--out")
    m.set_defaults(func=cmd_compose)

    f = sub.add_parser("fidelity", help="process fidelity of --a against rank-one --b")
    f.add_argument("--a", required=True)
    f.add_argument("--b", required=True)
    f.set_defaults(func=cmd_fidelity)

    t = sub.add_parser("tomo", help="simulate or reconstruct a tomography dataset")
    t.add_argument("--channel")
    t.add_argument("--sigma", type=float, default=0.0)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--reconstruct", metavar="DATASET")
    t.add_argument("--to", choices=["chi", "smatrix"], default="chi")
    t.add_argument("--out")
    t.set_defaults(func=cmd_tomo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _IOFailure as exc:
        print(f"qopmat: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except _UsageError as exc:
        parser.error(str(exc))
    except (QopmatError, ValueError, KeyError) as exc:
        print(f"qopmat: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
