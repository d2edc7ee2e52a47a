"""Command-line interface: ``admissible-lab <subcommand> ...``.

JSON reports share one envelope::

    {"schema": "admissible-lab/v1", "subcommand": ..., "config": ...,
     "result": ..., "partial": bool}

Arbitrary-precision integers travel as decimal strings. Exit status is 0 on
success, 2 on invalid input and 3 when a search budget cut the scan short.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from decimal import Decimal
from pathlib import Path
from typing import Optional

from . import __version__
from .bounds import half_log_bound, mertens_product, required_r, rosser_schoenfeld_lower
from .heuristic import heuristic_expected_primes
from .primal import DEFAULT_ROUNDS
from .search import DEFAULT_PRESIEVE_CAP, TranslateQuery, refutation_harness, shift_search
from .sequences import DEFAULT_MATERIALIZATION_CAP, parse_sequence_spec, prefix
from .tuples import OffsetTuple, extract_admissible_subset, is_admissible, parse_tuple_text

SCHEMA = "admissible-lab/v1"
THREADS_ENV = "ADMISSIBLE_LAB_THREADS"
EXIT_OK, EXIT_INVALID, EXIT_PARTIAL = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _default_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return _positive_int(raw)
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None


def read_tuple(arg: str) -> OffsetTuple:
    """Inline ``0,2,6,8`` or ``@path`` to a tuple file."""
    text = Path(arg[1:]).read_text() if arg.startswith("@") else arg
    return parse_tuple_text(text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--workers", type=_positive_int, default=None, help=f"default: ${THREADS_ENV} or 1")
    common.add_argument("--rounds", type=_nonneg_int, default=DEFAULT_ROUNDS, help="extra probable-prime bases")
    common.add_argument("--cap", type=_nonneg_int, default=DEFAULT_MATERIALIZATION_CAP, help="max digits to materialize")
    common.add_argument("--presieve-cap", type=_positive_int, default=DEFAULT_PRESIEVE_CAP)

    parser = _Parser(prog="admissible-lab", description="Admissible tuples, Mertens-type bounds and translate prime searches.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("admissible", parents=[common], help="admissibility report for a tuple")
    p.add_argument("tuple")

    p = sub.add_parser("extract", parents=[common], help="greedy admissible subset")
    p.add_argument("tuple")
    p.add_argument("--early-exit", action="store_true")

    p = sub.add_parser("bounds", parents=[common], help="Mertens product and its lower bounds")
    p.add_argument("--r", type=_nonneg_int, required=True)

    p = sub.add_parser("sizing", parents=[common], help="r = ceil(exp(2BC)) and its inequality chain")
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--C", type=_positive_float, required=True)
    p.add_argument("--max-digits", type=_positive_int, default=1000)

    p = sub.add_parser("heuristic", parents=[common], help="expected prime count, sum of 1/ln a_n")
    p.add_argument("--seq", required=True)
    p.add_argument("--terms", default=None, help="count or 'tail-bounded'")

    p = sub.add_parser("seq", parents=[common], help="sequence terms")
    p.add_argument("--spec", required=True)
    p.add_argument("--prefix", type=_nonneg_int, required=True)

    def add_scan_flags(p):
        p.add_argument("--from", dest="shift_lo", type=int, required=True)
        p.add_argument("--to", dest="shift_hi", type=int, required=True)
        p.add_argument("--max-shifts", type=_positive_int, default=None)
        p.add_argument("--max-seconds", type=_positive_float, default=None)
        p.add_argument("--progress-every", type=_positive_int, default=None, help="shifts between progress records")

    p = sub.add_parser("search", parents=[common], help="shifts n with at least m primes among h_i + n")
    p.add_argument("--tuple", required=True)
    p.add_argument("--target", type=_positive_int, required=True)
    add_scan_flags(p)

    p = sub.add_parser("harness", parents=[common], help="extract + search for B+1 primes")
    p.add_argument("--seq", required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--B", type=_positive_int, required=True)
    p.add_argument("--C", type=_positive_float, default=1.0)
    add_scan_flags(p)
    return parser


# subcommand handlers return (result dict, partial flag)


def _cmd_admissible(args):
    return is_admissible(read_tuple(args.tuple)).to_dict(), False


def _cmd_extract(args):
    a = read_tuple(args.tuple)
    subset, trace = extract_admissible_subset(a, early_exit=args.early_exit)
    return {"subset": [str(x) for x in subset], "subset_size": len(subset), "trace": trace.to_dict()}, False


def _cmd_bounds(args):
    r = args.r
    product = mertens_product(r)
    result = {"r": r, "mertens_product": str(product)}
    if r > 1:
        rs, hl = rosser_schoenfeld_lower(r), half_log_bound(r)
        result.update(rosser_schoenfeld_lower=rs, half_log_bound=hl, chain_holds=product > Decimal(rs) and rs >= hl)
    else:
        result.update(rosser_schoenfeld_lower=None, half_log_bound=None, chain_holds=None)
    return result, False


def _cmd_sizing(args):
    return required_r(args.B, args.C, args.max_digits).to_dict(), False


def _cmd_heuristic(args):
    terms = args.terms
    if terms is not None and terms != "tail-bounded":
        terms = _positive_int(terms)
    return heuristic_expected_primes(parse_sequence_spec(args.seq), terms).to_dict(), False


def _cmd_seq(args):
    terms = prefix(parse_sequence_spec(args.spec), args.prefix, args.cap)
    return {"spec": args.spec, "terms": [t.to_dict() for t in terms]}, False


def _scan_options(args) -> dict:
    opts = {
        "workers": args.workers,
        "presieve_cap": args.presieve_cap,
        "max_shifts": args.max_shifts,
        "max_seconds": args.max_seconds,
    }
    if args.progress_every:
        def progress(scanned, hits):
            print(json.dumps({"progress": {"scanned": scanned, "hits": hits}}), file=args.progress_stream, flush=True)

        opts.update(progress=progress, progress_every=args.progress_every)
    return opts


def _cmd_search(args):
    q = TranslateQuery(read_tuple(args.tuple), args.shift_lo, args.shift_hi, args.target, args.rounds)
    result = shift_search(q, **_scan_options(args))
    return result.to_dict(), not result.complete


def _cmd_harness(args):
    terms = prefix(parse_sequence_spec(args.seq), args.r, args.cap)
    if any(t.too_large for t in terms):
        raise ValueError(f"{args.seq} terms beyond {args.cap} digits cannot enter a shift search")
    a = OffsetTuple(tuple(t.value for t in terms))
    if args.shift_lo > args.shift_hi:
        raise ValueError("--from must not exceed --to")
    report = refutation_harness(a, args.B, args.shift_lo, args.shift_hi, args.C, rounds=args.rounds, **_scan_options(args))
    return report.to_dict(), not report.complete


_COMMANDS = {
    "admissible": _cmd_admissible,
    "extract": _cmd_extract,
    "bounds": _cmd_bounds,
    "sizing": _cmd_sizing,
    "heuristic": _cmd_heuristic,
    "seq": _cmd_seq,
    "search": _cmd_search,
    "harness": _cmd_harness,
}

# flags that change how a run executes but not what it reports
_UNREPORTED = {"format", "workers", "subcommand", "progress_every", "progress_stream"}


def config_of(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _UNREPORTED}


def render_json(envelope: dict) -> str:
    return json.dumps(envelope, indent=2) + "\n"


def _hit_rows(hits):
    for h in hits:
        yield {
            "shift": h["shift"],
            "count": h["count"],
            "prime_indices": ";".join(map(str, h["prime_indices"])),
            "certainty": h["certainty"],
        }


def _csv_rows(subcommand: str, result: dict) -> list[dict]:
    if subcommand in ("search", "harness"):
        return list(_hit_rows(result["hits"]))
    if subcommand == "seq":
        return [
            {"index": t["index"], "value": t["value"], "log_value": json.dumps(t["log_value"]), "digits10": json.dumps(t["digits10"])}
            for t in result["terms"]
        ]
    if subcommand == "extract":
        return result["trace"]["steps"]
    row = {}
    for k, v in result.items():
        row[k] = ";".join(map(str, v)) if isinstance(v, list) else json.dumps(v) if isinstance(v, dict) else v
    return [row]


def render_csv(subcommand: str, result: dict) -> str:
    rows = _csv_rows(subcommand, result)
    out = io.StringIO()
    if rows:
        writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    elif subcommand in ("search", "harness"):
        out.write("shift,count,prime_indices,certainty\n")
    return out.getvalue()


def render_text(subcommand: str, result: dict, partial: bool) -> str:
    lines = [f"{subcommand}:"]
    for k, v in result.items():
        if k in ("hits", "terms") and isinstance(v, list):
            lines.append(f"  {k}: {len(v)}")
            for item in v:
                lines.append("    " + ", ".join(f"{a}={b}" for a, b in item.items()))
        elif k == "trace":
            lines.append(f"  trace: {v['input_size']} -> {v['output_size']} over {len(v['steps'])} primes")
        else:
            lines.append(f"  {k}: {v}")
    if partial:
        lines.append("  (partial: budget exhausted)")
    return "\n".join(lines) + "\n"


def run(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the subcommand, write the report; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    sys.set_int_max_str_digits(0)
    try:
        args = build_parser().parse_args(argv)
        if args.workers is None:
            args.workers = _default_workers()
        args.progress_stream = stderr
        result, partial = _COMMANDS[args.subcommand](args)
    except UsageError as exc:
        print(f"admissible-lab: error: {exc}", file=stderr)
        return EXIT_INVALID
    except (ValueError, IndexError, OverflowError, OSError) as exc:
        print(f"admissible-lab: error: {exc}", file=stderr)
        return EXIT_INVALID

    if args.format == "json":
        envelope = {
            "schema": SCHEMA,
            "subcommand": args.subcommand,
            "config": config_of(args),
            "result": result,
            "partial": partial,
        }
        stdout.write(render_json(envelope))
    elif args.format == "csv":
        stdout.write(render_csv(args.subcommand, result))
    else:
        stdout.write(render_text(args.subcommand, result, partial))
    return EXIT_PARTIAL if partial else EXIT_OK


def main() -> None:
    sys.exit(run())
