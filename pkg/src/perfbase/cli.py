"""Command-line front end and certificate I/O.

Certificates are JSON documents (schema version "1") holding the field, the
construction name and parameters, the target-space basis, the claimed base,
any auxiliary matrices, and the verification report.  Field elements
serialize as canonical integer encodings and matrices as row-major integer
arrays, so fixtures diff cleanly and third parties can re-check them without
this library.

Exit codes: 0 verified, 1 internal verification failure (a bug), 2 invalid
input, 3 search guard exceeded.  The last stdout line is always a single
JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import construct as cons
from . import rmcode
from .errors import GuardExceeded, InternalVerificationError, PerfbaseError
from .exactla import FqMatrix, MatrixSpace
from .gf import Field, field_make
from .tensor3 import (
    BaseCandidate,
    exhaustive_trk,
    kruskal_bound,
    verify_base,
)

SCHEMA_VERSION = "1"
DEFAULT_ORACLE_GUARD = 100_000_000


# --- serialization -------------------------------------------------------------------


def field_to_json(F: Field) -> dict:
    return {"p": F.p, "deg": F.deg, "modulus": list(F.modulus)}


def field_from_json(obj) -> Field:
    modulus = obj.get("modulus") or None
    return field_make(int(obj["p"]), int(obj.get("deg", 1)), modulus)


def matrix_to_json(M: FqMatrix) -> dict:
    return {"n": M.n, "m": M.m, "entries": [list(r) for r in M.rows]}


def matrix_from_json(field: Field, obj) -> FqMatrix:
    M = FqMatrix(field, obj["entries"])
    if M.shape != (int(obj["n"]), int(obj["m"])):
        raise ValueError("matrix entries disagree with the declared shape")
    return M


def certificate_from_result(field: Field, result, code_info=None) -> dict:
    cert = {
        "schema_version": SCHEMA_VERSION,
        "field": field_to_json(field),
        "construction": {"name": result.construction,
                         "params": result.params},
        "target_basis": [matrix_to_json(B) for B in result.candidate.target.basis],
        "base": [matrix_to_json(A) for A in result.candidate.matrices],
        "auxiliary": {k: matrix_to_json(v) for k, v in result.auxiliary.items()},
        "report": result.report.to_dict(),
    }
    if code_info is not None:
        cert["code"] = code_info
    return cert


def dumps_certificate(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=1) + "\n"


def write_certificate(cert: dict, path: str):
    with open(path, "w") as fh:
        fh.write(dumps_certificate(cert))


def load_certificate(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def reverify(cert: dict, guard: int) -> dict:
    """Re-check a loaded certificate from scratch; returns a verdict dict."""
    if cert.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("unsupported schema version")
    field = field_from_json(cert["field"])
    target_mats = [matrix_from_json(field, o) for o in cert["target_basis"]]
    base_mats = [matrix_from_json(field, o) for o in cert["base"]]
    if not target_mats:
        raise ValueError("certificate has an empty target")
    shape = target_mats[0].shape
    target = MatrixSpace(field, shape, target_mats)
    cand = BaseCandidate(tuple(base_mats), target)
    report = verify_base(cand)
    fresh = report.to_dict()
    verdict = {"checks": fresh, "ok": report.passed}
    stored = cert.get("report")
    if stored is not None and {k: stored.get(k) for k in fresh} != fresh:
        verdict["ok"] = False
        verdict["stored_report_mismatch"] = True
    code = cert.get("code")
    if code is not None:
        claimed_k = int(code["k"])
        claimed_d = int(code["d"])
        space = MatrixSpace(
            field, shape,
            [matrix_from_json(field, o) for o in code["space_basis"]])
        rank_code = rmcode.RankCode(space)
        dim_ok = rank_code.k == claimed_k
        d_real = rank_code.distance(guard)
        d_ok = d_real == claimed_d
        verdict["code_checks"] = {"dim_ok": dim_ok, "distance": d_real,
                                  "distance_ok": d_ok}
        if code.get("mtr"):
            mtr_ok = (report.passed and dim_ok and d_ok
                      and len(base_mats) == kruskal_bound(claimed_k, claimed_d))
            verdict["code_checks"]["mtr_ok"] = mtr_ok
            verdict["ok"] = verdict["ok"] and mtr_ok
        verdict["ok"] = verdict["ok"] and dim_ok and d_ok
    return verdict


def _code_info(code: rmcode.RankCode, guard: int, mtr: bool) -> dict:
    return {
        "q": code.field.q,
        "n": code.n,
        "m": code.m,
        "k": code.k,
        "d": code.distance(guard),
        "mtr": mtr,
        "space_basis": [matrix_to_json(B) for B in code.space.basis],
    }


# --- argument plumbing ----------------------------------------------------------------


def _parse_ints(text: str):
    return [int(t) for t in text.split(",") if t != ""]


def _field_from_args(args) -> Field:
    modulus = _parse_ints(args.modulus) if getattr(args, "modulus", None) else None
    return field_make(args.p, getattr(args, "deg", 1) or 1, modulus)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ValueError(f"--{name} is required for this construction")


def _spec_from_args(field, args) -> cons.CompanionSpec:
    _require(args, "bottom")
    bottom = _parse_ints(args.bottom)
    if args.m is not None and args.m != len(bottom):
        raise ValueError("--m disagrees with the bottom row length")
    return cons.CompanionSpec(field, len(bottom), tuple(bottom))


def _gammas_from_args(field, args, s):
    if getattr(args, "gammas", None):
        return cons.GammaSet(field, tuple(_parse_ints(args.gammas)))
    return cons.GammaSet.canonical(field, s)


def _guard(args) -> int:
    env = os.environ.get("PERFBASE_GUARD")
    if getattr(args, "guard", None):
        return args.guard
    if env:
        return int(env)
    return rmcode.DEFAULT_SCAN_GUARD


# --- subcommands -------------------------------------------------------------------------


def cmd_construct(args) -> int:
    field = _field_from_args(args)
    guard = _guard(args)
    code_info = None
    name = args.kind
    if name == "dual-powers":
        _require(args, "s")
        spec = _spec_from_args(field, args)
        result = cons.base_dual_powers(spec, args.s,
                                       _gammas_from_args(field, args, args.s))
    elif name == "dual-powers-rect":
        _require(args, "n", "s")
        spec = _spec_from_args(field, args)
        result = cons.base_dual_powers_rect(spec, args.n, args.s,
                                            _gammas_from_args(field, args, args.s))
    elif name == "inverse-family":
        spec = _spec_from_args(field, args)
        powers = _parse_ints(args.powers) if args.powers else []
        result = cons.base_inverse_family(spec, tuple(powers))
    elif name == "rect-small-n":
        _require(args, "n")
        spec = _spec_from_args(field, args)
        result = cons.base_rect_small_n(spec, args.n)
    elif name == "singular":
        _require(args, "s")
        spec = _spec_from_args(field, args)
        result = cons.base_singular(spec, args.s)
    elif name == "atkinson":
        _require(args, "n")
        result = cons.atkinson_base(args.n, field)
    elif name == "gabidulin-dual-mtr":
        _require(args, "m", "n")
        code, result = rmcode.dual_gabidulin_mtr_base(args.p, args.m, args.n)
        code_info = _code_info(code, guard, mtr=True)
    elif name == "build-mtr":
        _require(args, "n", "m", "k", "d")
        code, cand = rmcode.build_mtr(args.p, args.n, args.m, args.k, args.d)
        report = verify_base(cand)
        result = cons.ConstructionResult(
            cand, "build-mtr",
            {"q": args.p, "n": args.n, "m": args.m, "k": args.k, "d": args.d},
            {}, report)
        code_info = _code_info(code, guard, mtr=True)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(name)
    cert = certificate_from_result(field, result, code_info)
    out = args.out or f"{name}.cert.json"
    write_certificate(cert, out)
    print(json.dumps({"ok": True, "construction": name,
                      "base_size": len(cert["base"]),
                      "target_dim": cert["report"]["target_dim"],
                      "certificate": out}))
    return 0


def cmd_verify(args) -> int:
    try:
        cert = load_certificate(args.certificate)
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"ok": False, "error": f"unreadable certificate: {exc}"}))
        return 2
    try:
        verdict = reverify(cert, _guard(args))
    except (KeyError, ValueError, TypeError) as exc:
        print(json.dumps({"ok": False, "error": f"malformed certificate: {exc}"}))
        return 2
    print(json.dumps(verdict, sort_keys=True))
    return 0 if verdict["ok"] else 1


def cmd_oracle(args) -> int:
    with open(args.space) as fh:
        obj = json.load(fh)
    field = field_from_json(obj["field"])
    mats = [matrix_from_json(field, o) for o in obj["basis"]]
    space = MatrixSpace(field, mats[0].shape, mats)
    guard = args.guard or int(os.environ.get("PERFBASE_GUARD",
                                             DEFAULT_ORACLE_GUARD))
    trk, witness = exhaustive_trk(space, guard)
    cert = {
        "schema_version": SCHEMA_VERSION,
        "field": field_to_json(field),
        "construction": {"name": "oracle", "params": {"guard": guard}},
        "target_basis": [matrix_to_json(B) for B in space.basis],
        "base": [matrix_to_json(A) for A in witness.matrices],
        "auxiliary": {},
        "report": verify_base(witness).to_dict(),
        "tensor_rank": trk,
    }
    if args.out:
        write_certificate(cert, args.out)
    print(json.dumps({"ok": True, "tensor_rank": trk,
                      "witness_size": len(witness.matrices),
                      "certificate": args.out}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perfbase",
        description="construct and verify rank-one bases of matrix spaces "
                    "over finite fields")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("construct", help="run a construction, emit a certificate")
    pc.add_argument("kind", choices=[
        "dual-powers", "dual-powers-rect", "inverse-family", "rect-small-n",
        "singular", "atkinson", "gabidulin-dual-mtr", "build-mtr"])
    pc.add_argument("--p", type=int, required=True, help="field characteristic")
    pc.add_argument("--deg", type=int, default=1, help="extension degree")
    pc.add_argument("--modulus", help="modulus coefficients, low to high")
    pc.add_argument("--m", type=int, help="matrix size / extension degree")
    pc.add_argument("--n", type=int, help="row count")
    pc.add_argument("--s", type=int, help="number of powers in the span")
    pc.add_argument("--k", type=int, help="code dimension")
    pc.add_argument("--d", type=int, help="code distance")
    pc.add_argument("--bottom", help="companion bottom row a_1,...,a_m")
    pc.add_argument("--gammas", help="distinct nonzero scalars, first 1")
    pc.add_argument("--powers", help="extra exponents, comma separated")
    pc.add_argument("--guard", type=int, help="distance-scan guard")
    pc.add_argument("--out", help="certificate output path")
    pc.set_defaults(func=cmd_construct)

    pv = sub.add_parser("verify", help="independently re-check a certificate")
    pv.add_argument("certificate")
    pv.add_argument("--guard", type=int, help="distance-scan guard")
    pv.set_defaults(func=cmd_verify)

    po = sub.add_parser("oracle", help="exact tensor rank of a small space")
    po.add_argument("space", help="JSON file with field and basis")
    po.add_argument("--guard", type=int, help="membership-test guard")
    po.add_argument("--out", help="witness certificate output path")
    po.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(json.dumps({"ok": False, "error": str(exc), "kind": "guard"}))
        return 3
    except InternalVerificationError as exc:
        print(json.dumps({"ok": False, "error": str(exc), "kind": "internal"}))
        return 1
    except (PerfbaseError, ValueError, OSError) as exc:
        print(json.dumps({"ok": False, "error": str(exc), "kind": "input"}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
