"""Command-line front end: ``abelfb {verify-pr, analyze, dual, apply}``.

Exit codes: 0 pass, 1 mathematical failure (no PR, not a frame, non-FIR
dual), 2 input error (unreadable file, malformed JSON, schema violation).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .documents import (
    APPLY_SCHEMA_ID,
    REPORT_SCHEMA_ID,
    DocumentError,
    decode_bank,
    decode_signal,
    dumps,
    encode_bank,
    encode_terms,
    loads,
)
from .errors import FilterBankError, NonFIRDualError, NotAFrameError
from .frames import DEFAULT_GRID, canonical_dual, check_dual_frames, frame_bounds
from .modulation import alias_identity_residual, mod_polyphase_residuals, w_orthogonality_residual
from .polyphase import PR_TOL, apply_filter_bank, pr_residual

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(command: str, **fields) -> dict:
    return {"$schema": REPORT_SCHEMA_ID, "tool_version": __version__, "command": command, **fields}


def _pr_section(bank, tol: float) -> dict:
    residual = pr_residual(bank)
    return {
        "holds": residual <= tol,
        "residual": residual,
        "tol": tol,
        "method": "exact-enumeration" if bank.is_finite else "laurent-identity",
    }


def cmd_verify_pr(args) -> int:
    bank = decode_bank(_read_json(args.bank), args.transversal)
    if bank.synthesis is None:
        raise DocumentError("verify-pr needs synthesis filters")
    section = _pr_section(bank, args.tol)
    _emit(_report("verify-pr", perfect_reconstruction=section), args.out)
    return EXIT_OK if section["holds"] else EXIT_FAIL


def cmd_analyze(args) -> int:
    bank = decode_bank(_read_json(args.bank), args.transversal)
    frame = frame_bounds(bank, grid=args.grid, tol=args.tol)
    fields = {"frame": frame.to_dict()}
    if bank.synthesis is not None:
        fields["perfect_reconstruction"] = _pr_section(bank, args.tol)
        fields["duality"] = check_dual_frames(bank, tol=args.tol, grid=args.grid).to_dict()
    if bank.is_finite:
        fwd, back = mod_polyphase_residuals(bank)
        fields["modulation"] = {
            "factorization_residual": fwd,
            "inverse_factorization_residual": back,
            "w_orthogonality_residual": w_orthogonality_residual(bank.lattice),
            "filter_alias_residual": max(alias_identity_residual(h, bank.lattice) for h in bank.analysis),
            "method": "exact-enumeration",
        }
    _emit(_report("analyze", **fields), args.out)
    return EXIT_OK


def cmd_dual(args) -> int:
    bank = decode_bank(_read_json(args.bank), args.transversal)
    try:
        dual = canonical_dual(bank, grid=args.grid)
    except (NotAFrameError, NonFIRDualError) as exc:
        print(f"abelfb dual: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(encode_bank(dual), args.out)
    return EXIT_OK


def cmd_apply(args) -> int:
    bank = decode_bank(_read_json(args.bank), args.transversal)
    x = decode_signal(_read_json(args.signal))
    if x.group != bank.group:
        raise DocumentError(f"signal lives on {x.group}, bank on {bank.group}")
    subbands, y = apply_filter_bank(x, bank)
    doc = {
        "$schema": APPLY_SCHEMA_ID,
        "tool_version": __version__,
        "subbands": [encode_terms(c) for c in subbands],
        "output": None if y is None else encode_terms(y),
    }
    _emit(doc, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abelfb", description="Filter banks on discrete abelian groups.")
    parser.add_argument("--version", action="version", version=f"abelfb {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=False):
        p.add_argument("bank", help="bank JSON document ('-' for stdin)")
        p.add_argument("--tol", type=float, default=PR_TOL, help="verdict tolerance (default 1e-10)")
        p.add_argument("--transversal", choices=["lex", "negative"], default=None,
                       help="override the document's transversal convention")
        p.add_argument("--out", default=None, help="write the result here instead of stdout")
        if grid:
            p.add_argument("--grid", type=int, default=DEFAULT_GRID,
                           help="torus samples per dimension on Z^d (default 64)")

    p = sub.add_parser("verify-pr", help="exit 0 iff the bank reconstructs perfectly")
    common(p)
    p.set_defaults(func=cmd_verify_pr)

    p = sub.add_parser("analyze", help="frame bounds, tight/Riesz verdicts, modulation residuals")
    common(p, grid=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dual", help="emit the bank completed with its canonical dual")
    common(p, grid=True)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("apply", help="run the bank on a signal")
    common(p)
    p.add_argument("signal", help="signal JSON document")
    p.set_defaults(func=cmd_apply)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DocumentError) as exc:
        print(f"abelfb {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FilterBankError as exc:
        print(f"abelfb {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
