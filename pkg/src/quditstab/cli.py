"""Command-line front end over JSON documents.

Every document is a JSON object with ``schema_version``, ``kind``, ``d`` and
(except for plain matrices) ``n``, followed by kind-specific arrays. Output
documents are written in a canonical layout: one top-level key per line, each
value compact on that line, keys in a fixed order per kind. Parsing a
canonical document and writing it back reproduces it byte for byte.

Exit codes: 0 success, 2 malformed input, 3 domain error, 4 dense size cap.
Errors are written to stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

import numpy as np

from . import clifford as cl
from . import oracle
from .decomp import GATE_TYPES, GateSequence, decompose, fold
from .errors import DimensionCap, EvenDimension, PhaseParityViolation, QuditError
from .pauli import PauliElement
from .stabilizer import (
    OddStabilizerForm,
    StabilizerGenerators,
    StateExpansion,
    expand,
    expand_generic,
    expand_raw,
    from_odd_stabilizer_form,
    minimize_generators,
    normal_form,
    odd_apply_clifford,
    odd_expand,
    to_odd_stabilizer_form,
    validate_stabilizer,
)
from .zmod import MAX_DIMENSION, MAX_MODULUS, smith_normal_form

SCHEMA_VERSION = "1"

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_CAP = 0, 2, 3, 4

KEY_ORDER = {
    "pauli": ["a", "delta"],
    "clifford": ["C", "h", "g"],
    "stabilizer": ["S", "f", "b"],
    "gate_sequence": ["gates"],
    "expansion": ["phase_modulus", "normalization", "exponents", "labels"],
    "matrix": ["A"],
    "smith": ["F", "K", "L", "rank"],
    "normal_form": ["m", "S", "f", "T", "R", "Q", "B", "f_prime", "qbar", "q", "y",
                    "M", "p", "x_star", "rank"],
    "report": ["object", "valid", "m"],
    "dense": ["object", "shape", "real", "imag"],
}
HEADER = ["schema_version", "kind", "d", "n"]


class ParseError(Exception):
    pass


class CapExceeded(Exception):
    pass


# ---- emitting ---------------------------------------------------------------

def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def _float(x: float) -> str:
    """Shortest round-trip form, capped at 16 significant digits."""
    text = repr(x)
    digits = text.lower().split("e")[0].replace("-", "").replace(".", "").lstrip("0")
    return text if len(digits) <= 16 else format(x, ".16g")


def _encode(value) -> str:
    if isinstance(value, float):
        return _float(value)
    if isinstance(value, list):
        return "[" + ",".join(_encode(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_encode(v)}" for k, v in value.items()) + "}"
    return json.dumps(value)


def emit(doc: dict) -> str:
    """Canonical text of a document, newline terminated."""
    kind = doc["kind"]
    order = HEADER + KEY_ORDER.get(kind, [])
    keys = [k for k in order if k in doc] + sorted(k for k in doc if k not in order)
    lines = [f"  {json.dumps(k)}: {_encode(_plain(doc[k]))}" for k in keys]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _doc(kind: str, d: int, n: int | None, **payload) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "kind": kind, "d": d}
    if n is not None:
        out["n"] = n
    out.update(payload)
    return out


def pauli_doc(x: PauliElement, odd: bool = False) -> dict:
    delta = cl.half(x.d) * x.delta % x.d if odd else x.delta
    return _doc("pauli", x.d, x.n, a=x.a, delta=delta)


def clifford_doc(q: cl.CliffordOp, odd: bool = False) -> dict:
    if odd:
        return _doc("clifford", q.d, q.n, C=q.C, g=cl.to_odd_form(q).g)
    return _doc("clifford", q.d, q.n, C=q.C, h=q.h)


def stabilizer_doc(st: StabilizerGenerators, odd: bool = False) -> dict:
    if odd:
        return _doc("stabilizer", st.d, st.n, S=st.S, b=to_odd_stabilizer_form(st).b)
    return _doc("stabilizer", st.d, st.n, S=st.S, f=st.f)


def gate_to_json(gate) -> dict:
    out = {"gate": type(gate).__name__}
    for fld in fields(gate):
        out[fld.name] = _plain(list(getattr(gate, fld.name))
                               if fld.name == "a" else getattr(gate, fld.name))
    return out


def sequence_doc(seq: GateSequence) -> dict:
    return _doc("gate_sequence", seq.d, seq.n, gates=[gate_to_json(g) for g in seq.gates])


def expansion_doc(e: StateExpansion) -> dict:
    return _doc("expansion", e.d, e.n, phase_modulus=e.phase_modulus,
                normalization=e.normalization, exponents=e.exponents, labels=e.labels)


# ---- parsing ----------------------------------------------------------------

def _require(doc: dict, key: str):
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    return doc[key]


def _int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{name} must be an integer")
    return value


def _array(value, name: str, modulus: int, shape: tuple) -> np.ndarray:
    try:
        arr = np.array(value, dtype=object)
    except ValueError as exc:
        raise ParseError(f"{name}: ragged array") from exc
    if arr.shape != shape:
        raise ParseError(f"{name} must have shape {shape}, got {arr.shape}")
    for x in arr.flat:
        _int(x, name)
        if not 0 <= x < modulus:
            raise ParseError(f"{name} entries must be residues in [0, {modulus}), got {x}")
    return arr.astype(np.int64)


def _header(doc: dict, kinds) -> tuple[str, int, int | None]:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"schema_version must be {SCHEMA_VERSION!r}")
    kind = _require(doc, "kind")
    if kind not in kinds:
        raise ParseError(f"expected kind in {sorted(kinds)}, got {kind!r}")
    d = _int(_require(doc, "d"), "d")
    if not 2 <= d <= MAX_MODULUS:
        raise ParseError(f"d must lie in [2, {MAX_MODULUS}]")
    n = None
    if kind != "matrix":
        n = _int(_require(doc, "n"), "n")
        if not 1 <= n <= MAX_DIMENSION // 2:
            raise ParseError(f"n must lie in [1, {MAX_DIMENSION // 2}]")
    allowed = set(HEADER) | set(KEY_ORDER[kind])
    extra = set(doc) - allowed
    if extra:
        raise ParseError(f"unknown fields {sorted(extra)}")
    return kind, d, n


def _one_phase(doc: dict, general: str, odd_name: str, odd: bool) -> str:
    want, other = (odd_name, general) if odd else (general, odd_name)
    if other in doc:
        flag = "without" if odd else "with"
        raise ParseError(f"field {other!r} is only valid {flag} --odd-form")
    _require(doc, want)
    return want


def parse_pauli(doc: dict, odd: bool = False) -> PauliElement:
    _, d, n = _header(doc, {"pauli"})
    a = _array(_require(doc, "a"), "a", d, (2 * n,))
    if odd:
        cl.half(d)
        delta = _int(_require(doc, "delta"), "delta")
        if not 0 <= delta < d:
            raise ParseError(f"delta must lie in [0, {d}) with --odd-form")
        return PauliElement(d, a, 2 * delta)
    delta = _int(_require(doc, "delta"), "delta")
    if not 0 <= delta < 2 * d:
        raise ParseError(f"delta must lie in [0, {2 * d})")
    return PauliElement(d, a, delta)


def parse_clifford(doc: dict, odd: bool = False) -> cl.CliffordOp:
    _, d, n = _header(doc, {"clifford"})
    C = _array(_require(doc, "C"), "C", d, (2 * n, 2 * n))
    key = _one_phase(doc, "h", "g", odd)
    if key == "g":
        g = _array(doc["g"], "g", d, (2 * n,))
        return cl.from_odd_form(cl.OddCliffordForm(d, C, g))
    return cl.CliffordOp(d, C, _array(doc["h"], "h", 2 * d, (2 * n,)))


def parse_stabilizer(doc: dict, odd: bool = False) -> StabilizerGenerators:
    _, d, n = _header(doc, {"stabilizer"})
    S = _require(doc, "S")
    m = len(S[0]) if isinstance(S, list) and S and isinstance(S[0], list) else 0
    if m > MAX_DIMENSION:
        raise ParseError(f"too many generators ({m})")
    S = _array(S, "S", d, (2 * n, m))
    key = _one_phase(doc, "f", "b", odd)
    if key == "b":
        return from_odd_stabilizer_form(OddStabilizerForm(d, S, _array(doc["b"], "b", d, (m,))))
    return StabilizerGenerators(d, S, _array(doc["f"], "f", 2 * d, (m,)))


def parse_gate(obj, n: int, d: int):
    if not isinstance(obj, dict) or "gate" not in obj:
        raise ParseError("each gate must be an object with a 'gate' field")
    name = obj["gate"]
    if name not in GATE_TYPES:
        raise ParseError(f"unknown gate {name!r}")
    cls = GATE_TYPES[name]
    names = [f.name for f in fields(cls)]
    if set(obj) != {"gate", *names}:
        raise ParseError(f"{name} takes fields {names}")
    if name == "PauliCorrection":
        a = _array(obj["a"], "a", d, (2 * n,))
        return cls(tuple(int(x) for x in a))
    return cls(*[_int(obj[k], k) for k in names])


def parse_sequence(doc: dict) -> GateSequence:
    _, d, n = _header(doc, {"gate_sequence"})
    gates = _require(doc, "gates")
    if not isinstance(gates, list):
        raise ParseError("gates must be a list")
    return GateSequence(d, n, tuple(parse_gate(g, n, d) for g in gates))


def parse_expansion(doc: dict) -> StateExpansion:
    _, d, n = _header(doc, {"expansion"})
    mod = _int(_require(doc, "phase_modulus"), "phase_modulus")
    if mod not in (d, 2 * d):
        raise ParseError("phase_modulus must be d or 2d")
    norm = _require(doc, "normalization")
    if isinstance(norm, bool) or not isinstance(norm, (int, float)) or norm <= 0:
        raise ParseError("normalization must be a positive number")
    exps = _require(doc, "exponents")
    k = len(exps) if isinstance(exps, list) else -1
    return StateExpansion(d, _array(exps, "exponents", mod, (k,)),
                          _array(_require(doc, "labels"), "labels", d, (k, n)),
                          float(norm), mod)


def parse_matrix(doc: dict) -> tuple[np.ndarray, int]:
    _, d, _ = _header(doc, {"matrix"})
    A = _require(doc, "A")
    if not (isinstance(A, list) and A and isinstance(A[0], list)):
        raise ParseError("A must be a non-empty matrix")
    shape = (len(A), len(A[0]))
    if max(shape) > MAX_DIMENSION:
        raise ParseError(f"matrix dimensions must not exceed {MAX_DIMENSION}")
    return _array(A, "A", d, shape), d


PARSERS = {
    "pauli": parse_pauli,
    "clifford": parse_clifford,
    "stabilizer": parse_stabilizer,
    "gate_sequence": lambda doc, odd=False: parse_sequence(doc),
    "expansion": lambda doc, odd=False: parse_expansion(doc),
    "matrix": lambda doc, odd=False: parse_matrix(doc),
}


def load(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def parse(doc: dict, kinds, odd: bool = False):
    """Decode a document of one of ``kinds``; returns ``(kind, object)``."""
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind not in kinds:
        raise ParseError(f"expected kind in {sorted(kinds)}, got {kind!r}")
    try:
        return kind, PARSERS[kind](doc, odd)
    except (ParseError, EvenDimension):
        raise
    except QuditError as exc:
        # shape and limit problems found while building the object
        raise ParseError(f"{type(exc).__name__}: {exc}") from exc


# ---- commands ---------------------------------------------------------------

def _odd_check(d: int, odd: bool) -> None:
    if odd:
        cl.half(d)


def cmd_validate(args) -> dict:
    kind, obj = parse(load(args.input), {"pauli", "clifford", "stabilizer", "gate_sequence"},
                      args.odd_form)
    payload = {"object": kind, "valid": True}
    if kind == "clifford":
        cl.validate(obj.C, obj.h, obj.d)
    elif kind == "stabilizer":
        validate_stabilizer(obj)
        payload["m"] = minimize_generators(obj).m
    elif kind == "gate_sequence":
        fold(obj)
    return _doc("report", obj.d, obj.n, **payload)


def _clifford_arg(path: str, odd: bool) -> cl.CliffordOp:
    q = parse(load(path), {"clifford"}, odd)[1]
    return cl.validate(q.C, q.h, q.d)


def cmd_compose(args) -> dict:
    a = _clifford_arg(args.outer, args.odd_form)
    b = _clifford_arg(args.inner, args.odd_form)
    if args.odd_form:
        _odd_check(a.d, True)
        out = cl.from_odd_form(cl.odd_compose(cl.to_odd_form(a), cl.to_odd_form(b)))
    else:
        out = cl.compose(a, b)
    return clifford_doc(out, args.odd_form)


def cmd_invert(args) -> dict:
    q = _clifford_arg(args.input, args.odd_form)
    if args.odd_form:
        out = cl.from_odd_form(cl.odd_invert(cl.to_odd_form(q)))
    else:
        out = cl.invert(q)
    return clifford_doc(out, args.odd_form)


def cmd_conjugate(args) -> dict:
    q = _clifford_arg(args.op, args.odd_form)
    kind, x = parse(load(args.target), {"pauli", "stabilizer"}, args.odd_form)
    if kind == "stabilizer":
        if args.odd_form:
            o = odd_apply_clifford(to_odd_stabilizer_form(x), cl.to_odd_form(q))
            return stabilizer_doc(from_odd_stabilizer_form(o), True)
        from .stabilizer import apply_clifford

        return stabilizer_doc(apply_clifford(x, q))
    if args.odd_form:
        b, eps = cl.odd_conjugate_pauli(cl.to_odd_form(q), x.a, x.delta // 2)
        return pauli_doc(PauliElement(x.d, b, 2 * eps), True)
    return pauli_doc(cl.conjugate_pauli(q, x))


def cmd_decompose(args) -> dict:
    return sequence_doc(decompose(_clifford_arg(args.input, args.odd_form)))


def cmd_fold(args) -> dict:
    seq = parse(load(args.input), {"gate_sequence"})[1]
    return clifford_doc(fold(seq), args.odd_form)


def cmd_canonicalize(args) -> dict:
    st = parse(load(args.input), {"stabilizer"}, args.odd_form)[1]
    st2 = minimize_generators(st)
    form = normal_form(st2)
    return _doc("normal_form", st.d, st.n, m=st2.m, S=st2.S, f=st2.f, T=form.T, R=form.R,
                Q=form.Q, B=form.B, f_prime=form.f_prime, qbar=form.qbar, q=form.q, y=form.y,
                M=form.M, p=form.p, x_star=form.x_star, rank=form.rank)


def cmd_expand(args) -> dict:
    st = parse(load(args.input), {"stabilizer"}, args.odd_form)[1]
    if args.raw:
        e = expand_raw(st)
    elif args.generic:
        e = expand_generic(st)
    elif args.odd_form:
        e = odd_expand(to_odd_stabilizer_form(st))
    else:
        e = expand(st)
    if args.odd_form and e.phase_modulus != e.d:
        if (e.exponents % 2).any():
            raise PhaseParityViolation("expansion has odd zeta exponents")
        e = StateExpansion(e.d, e.exponents // 2, e.labels, e.normalization, e.d)
    return expansion_doc(e)


def _round(x: np.ndarray) -> list:
    out = np.round(x, 12) + 0.0  # folds -0.0 into 0.0
    return out.tolist()


def cmd_simulate(args) -> dict:
    doc = load(args.input)
    kind, obj = parse(doc, {"pauli", "clifford", "gate_sequence", "stabilizer", "expansion"},
                      args.odd_form)
    cap = args.force_cap if args.force_cap is not None else oracle.DEFAULT_CAP
    n = obj.n
    if obj.d**n > cap:
        raise CapExceeded(f"d**n = {obj.d ** n} exceeds cap {cap}; pass --force-cap")
    if kind == "pauli":
        out = oracle.pauli_operator(obj, cap)
    elif kind == "clifford":
        q = cl.validate(obj.C, obj.h, obj.d)
        out = oracle.sequence_operator(decompose(q), cap)
    elif kind == "gate_sequence":
        out = oracle.sequence_operator(obj, cap)
    elif kind == "stabilizer":
        out = expand(obj).dense()
    else:
        out = obj.dense()
    return _doc("dense", obj.d, n, object=kind, shape=list(out.shape),
                real=_round(out.real), imag=_round(out.imag))


def cmd_snf(args) -> dict:
    A, d = parse(load(args.input), {"matrix"})[1]
    s = smith_normal_form(A, d)
    return _doc("smith", d, None, F=s.F, K=s.K, L=s.L, rank=s.rank)


COMMANDS = {
    "validate": (cmd_validate, "check a pauli, clifford, stabilizer or gate_sequence document",
                 "quditstab validate state.json"),
    "compose": (cmd_compose, "product A B of two Clifford ops (B acts first)",
                "quditstab compose a.json b.json"),
    "invert": (cmd_invert, "inverse of a Clifford op", "quditstab invert op.json"),
    "conjugate": (cmd_conjugate, "image Q X Q^dagger of a Pauli element or stabilizer state",
                  "quditstab conjugate op.json pauli.json"),
    "decompose": (cmd_decompose, "elementary gate sequence for a Clifford op",
                  "quditstab decompose op.json"),
    "fold": (cmd_fold, "Clifford op of a gate sequence", "quditstab fold seq.json"),
    "canonicalize": (cmd_canonicalize, "minimal generators and normal-form data of a state",
                     "quditstab canonicalize state.json"),
    "expand": (cmd_expand, "standard-basis expansion of a stabilizer state",
               "quditstab expand state.json --raw"),
    "simulate": (cmd_simulate, "dense matrix or vector of a document",
                 "quditstab simulate op.json --force-cap 10000"),
    "snf": (cmd_snf, "Smith normal form of a matrix document", "quditstab snf matrix.json"),
}


def build_parser() -> argparse.ArgumentParser:
    epilog = "commands:\n" + "\n".join(
        f"  {name:<13}{info[1]}\n  {'':<13}e.g. {info[2]}" for name, info in COMMANDS.items()
    )
    parser = argparse.ArgumentParser(
        prog="quditstab",
        description="Qudit Pauli, Clifford and stabilizer computations over JSON documents.",
        epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--odd-form", action="store_true",
                        help="read and write phases as powers of omega (odd d only)")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    for name, (_, help_text, example) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text,
                           description=f"{help_text}.", epilog=f"example: {example}")
        if name == "compose":
            p.add_argument("outer")
            p.add_argument("inner")
        elif name == "conjugate":
            p.add_argument("op")
            p.add_argument("target")
        else:
            p.add_argument("input", help="document path, or - for stdin")
        if name == "expand":
            mode = p.add_mutually_exclusive_group()
            mode.add_argument("--raw", action="store_true",
                              help="one term per t in Z_d^n, repeats kept")
            mode.add_argument("--generic", action="store_true",
                              help="one term per t in Z_d^m straight from S and f")
        if name == "simulate":
            p.add_argument("--force-cap", type=int, metavar="N",
                           help=f"allow d**n up to N (default {oracle.DEFAULT_CAP})")
    return parser


def _fail(code: int, error: str, kind: str, message: str) -> int:
    json.dump({"error": error, "type": kind, "message": message}, sys.stderr)
    sys.stderr.write("\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        doc = handler(args)
    except ParseError as exc:
        return _fail(EXIT_PARSE, "ParseError", "ParseError", str(exc))
    except CapExceeded as exc:
        return _fail(EXIT_CAP, "CapExceeded", "DimensionCap", str(exc))
    except DimensionCap as exc:
        return _fail(EXIT_CAP, "CapExceeded", "DimensionCap", str(exc))
    except QuditError as exc:
        return _fail(EXIT_DOMAIN, "DomainError", type(exc).__name__, str(exc))
    text = emit(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
