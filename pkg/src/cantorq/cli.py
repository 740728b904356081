"""Command-line entry point: ``cantorq {optimal,error,verify,scan,checkpoints}``.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import asymptotics
from .distortion import (
    CHECKPOINT_REFERENCE,
    checkpoint_matches,
    codebook_distortion,
    proof_checkpoint_integrals,
    vn_exact,
)
from .lloyd import LloydConfig, best_of_restarts, gap_correction
from .measure import InvalidWordError
from .quantizers import (
    CardinalityError,
    LevelError,
    Quantizer,
    all_optimal_quantizers,
    count_optimal_sets,
    family_deviation,
    optimal_quantizer,
    regime_of,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
DEFAULT_DIGITS = 12


class UsageError(Exception):
    pass


def exact_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def parse_rational(text: str) -> Fraction:
    try:
        if "." in text or "e" in text.lower():
            raise ValueError
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse {text!r} as an exact rational 'p/q'") from None


def rational_record(x: Fraction, digits: int) -> dict:
    return {"exact": exact_str(x), "decimal": decimal_str(x, digits)}


def quantizer_record(q: Quantizer, digits: int) -> dict:
    rec = {"points": [rational_record(p, digits) for p in q.points]}
    if q.index_set is not None:
        rec["index_set"] = str(q.index_set)
    return rec


def _regime_fields(n: int) -> dict:
    if n < 3:
        return {"ell": 0, "regime": "special", "count": 1}
    rd = regime_of(n)
    return {"ell": rd.ell, "regime": rd.regime.value, "count": count_optimal_sets(n)}


def cmd_optimal(args) -> tuple[dict, int]:
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    values = {"n": n, **_regime_fields(n)}
    if args.list_all:
        values["sets"] = [quantizer_record(q, args.digits) for q in all_optimal_quantizers(n, args.limit)]
    else:
        index_set = None
        if args.index_set is not None:
            index_set = [w for w in args.index_set.split(",") if w]
        try:
            q = optimal_quantizer(n, index_set)
        except (CardinalityError, LevelError, InvalidWordError) as e:
            raise UsageError(str(e)) from None
        values.update(quantizer_record(q, args.digits))
    return {"note": "constructed codebook; count is the number of valid index sets", "values": values}, EXIT_OK


def cmd_error(args) -> tuple[dict, int]:
    if (args.n is None) == (args.codebook is None):
        raise UsageError("give exactly one of --n or --codebook")
    if args.n is not None:
        if args.n < 1:
            raise UsageError("--n must be >= 1")
        v = vn_exact(args.n)
        values = {"n": args.n, "exact": True, "error": rational_record(v, args.digits)}
        return {"note": "closed-form n-th quantization error", "values": values}, EXIT_OK
    pts = [parse_rational(t) for t in args.codebook.split(",") if t.strip()]
    if not pts:
        raise UsageError("--codebook is empty")
    res = codebook_distortion(pts, depth_cap=args.depth_cap)
    values = {
        "codebook": [exact_str(p) for p in sorted(set(pts))],
        "exact": res.exact,
        "depth_used": res.depth_used,
        "empty_cells": list(res.empty_cells),
    }
    if res.exact:
        values["error"] = rational_record(res.value, args.digits)
    else:
        values["lower"] = rational_record(res.lower, args.digits)
        values["upper"] = rational_record(res.upper, args.digits)
    return {"note": "distortion by cylinder subdivision", "values": values}, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    n, depth = args.n, args.depth
    if n < 1 or not 1 <= depth <= 15 or n > 3**depth:
        raise UsageError(f"need 1 <= n <= 3^depth and 1 <= depth <= 15, got n={n}, depth={depth}")
    try:
        cfg = LloydConfig(tol=args.tol, restarts=args.restarts, rng_seed=args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = best_of_restarts(n, depth, cfg)
    corrected = res.discrete_distortion + float(gap_correction(depth))
    target = float(vn_exact(n))
    deviation = family_deviation(res.codebook, n)
    deviation_refl = family_deviation(res.codebook, n, allow_reflection=True)
    gap = corrected - target
    ok = deviation < args.point_tol and abs(gap) < args.error_tol
    values = {
        "n": n,
        "depth": depth,
        "restarts": args.restarts,
        "seed": args.seed,
        "codebook": [repr(float(c)) for c in res.codebook],
        "max_deviation": repr(deviation),
        "max_deviation_up_to_reflection": repr(deviation_refl),
        "discrete_distortion": repr(res.discrete_distortion),
        "gap_correction": rational_record(gap_correction(depth), args.digits),
        "corrected_distortion": repr(corrected),
        "closed_form_error": rational_record(vn_exact(n), args.digits),
        "distortion_gap": repr(gap),
        "status": "PASS" if ok else "FAIL",
    }
    note = "best Lloyd fixed point over seeded restarts vs constructed codebooks"
    return {"note": note, "values": values}, EXIT_OK if ok else EXIT_MISMATCH


SCAN_FIELDS = ["n", "ell", "regime", "x", "scaled_error"]


def scan_rows(n_min: int, n_max: int, digits: int) -> list[dict]:
    rows = asymptotics.scan_scaled_errors(n_min, n_max)
    nstr = asymptotics.mp.nstr
    return [
        {"n": r.n, "ell": r.ell, "regime": r.regime, "x": nstr(r.x, digits), "scaled_error": nstr(r.scaled_error, digits)}
        for r in rows
    ]


def cmd_scan(args) -> tuple[dict | None, int]:
    if not 1 <= args.n_min <= args.n_max:
        raise UsageError("need 1 <= --n-min <= --n-max")
    rows = scan_rows(args.n_min, args.n_max, args.digits)
    buf = io.StringIO()
    if args.format == "csv":
        w = csv.DictWriter(buf, fieldnames=SCAN_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        record = {
            "command": "scan",
            "parameters": {"n_min": args.n_min, "n_max": args.n_max, "digits": args.digits},
            "note": "n^(2/beta) V_n with beta = log 3 / log 5",
            "rows": rows,
        }
        buf.write(json.dumps(record, indent=2) + "\n")
    if args.out in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(buf.getvalue())
        except OSError as e:
            print(f"cannot write {args.out}: {e}", file=sys.stderr)
            return None, EXIT_IO
    return None, EXIT_OK


def checkpoint_table(digits: int) -> list[dict]:
    table = []
    for name, value in proof_checkpoint_integrals().items():
        ref = CHECKPOINT_REFERENCE[name]
        table.append({
            "name": name,
            "exact": exact_str(value),
            "decimal": decimal_str(value, digits),
            "reference": ref,
            "match": checkpoint_matches(value, ref),
        })
    return table


def cmd_checkpoints(args) -> tuple[dict, int]:
    table = checkpoint_table(args.digits)
    ok = all(row["match"] for row in table)
    values = {"rows": table, "status": "PASS" if ok else "FAIL"}
    return {"note": "lower-bound integrals; decimal references compared after rounding", "values": values}, (
        EXIT_OK if ok else EXIT_MISMATCH
    )


def _print_text(record: dict, out) -> None:
    def emit(key, val, indent=""):
        if isinstance(val, dict) and set(val) == {"exact", "decimal"}:
            print(f"{indent}{key}: {val['exact']}  ({val['decimal']})", file=out)
        elif isinstance(val, dict):
            print(f"{indent}{key}:", file=out)
            for k, v in val.items():
                emit(k, v, indent + "  ")
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            print(f"{indent}{key}:", file=out)
            for i, v in enumerate(val):
                emit(f"[{i}]", v, indent + "  ")
        elif isinstance(val, list):
            print(f"{indent}{key}: {', '.join(str(v) for v in val)}", file=out)
        else:
            print(f"{indent}{key}: {val}", file=out)

    print(f"# {record['command']}: {record['note']}", file=out)
    for k, v in record["parameters"].items():
        print(f"{k} = {v}", file=out)
    for k, v in record["values"].items():
        emit(k, v)


def _default_seed() -> int:
    env = os.environ.get("CANTORQ_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CANTORQ_SEED={env!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default=None,
                        help="output format (csv only for scan; default text, or csv for scan)")
    common.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="significant digits of decimal renderings")

    p = argparse.ArgumentParser(prog="cantorq", description="Optimal quantizers of the triadic Cantor distribution.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("optimal", parents=[common], help="constructed optimal n-point codebook")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--index-set", help="comma-separated level-l words, e.g. 3 or 11,12,13")
    s.add_argument("--list-all", action="store_true", help="list every valid index set")
    s.add_argument("--limit", type=int, default=1000, help="cap on --list-all output")
    s.set_defaults(func=cmd_optimal)

    s = sub.add_parser("error", parents=[common], help="quantization error or codebook distortion")
    s.add_argument("--n", type=int)
    s.add_argument("--codebook", help="comma-separated rationals p/q")
    s.add_argument("--depth-cap", type=int, default=40)
    s.set_defaults(func=cmd_error)

    s = sub.add_parser("verify", parents=[common], help="Lloyd oracle vs constructed codebook")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--depth", type=int, default=6)
    s.add_argument("--restarts", type=int, default=64)
    s.add_argument("--seed", type=int, default=None, help="RNG seed (default: $CANTORQ_SEED or 0)")
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--point-tol", type=float, default=1e-6)
    s.add_argument("--error-tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", parents=[common], help="table of n^(2/beta) V_n")
    s.add_argument("--n-min", type=int, default=1)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--out", help="output path (default stdout)")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("checkpoints", parents=[common], help="lower-bound integral table")
    s.set_defaults(func=cmd_checkpoints)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "scan":
            args.format = args.format or "csv"
        elif args.format == "csv":
            raise UsageError("--format csv is only available for scan")
        else:
            args.format = args.format or "text"
        if args.digits < 1:
            raise UsageError("--digits must be >= 1")
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        record, code = args.func(args)
    except UsageError as e:
        print(f"cantorq {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if record is not None:
        params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "format")}
        record = {"command": args.command, "parameters": params, **record}
        if args.format == "json":
            sys.stdout.write(json.dumps(record, indent=2) + "\n")
        else:
            _print_text(record, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
