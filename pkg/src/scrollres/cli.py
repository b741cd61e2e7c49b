"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 failure in a math stage, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .curvegen import CurveSpec, build_curve
from .errors import ScrollresError
from .harness import (
    GridConfig,
    check_records,
    conjecture_report,
    read_records,
    run_batch,
    run_pipeline,
    tables_export,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MATH = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _spec_args(sub):
    sub.add_argument("--genus", type=int, required=True)
    sub.add_argument("--gonality", type=int, required=True)
    sub.add_argument("--char", type=int, default=10007)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--json", metavar="PATH", help="write the record as JSON")


def build_parser():
    parser = _Parser(prog="scrollres")
    subs = parser.add_subparsers(dest="command", required=True)

    _spec_args(subs.add_parser("construct", help="build and certify a curve model"))
    _spec_args(subs.add_parser("resolve", help="full pipeline through the resolution"))

    batch = subs.add_parser("batch", help="run a seeded (g, k, p) grid")
    batch.add_argument("--config", required=True, metavar="FILE")
    batch.add_argument("--out", required=True, metavar="JSONL")
    batch.add_argument("--threads", type=int, default=1)

    check = subs.add_parser("check", help="re-validate a results file")
    check.add_argument("--in", dest="inp", required=True, metavar="JSONL")

    conj = subs.add_parser("conjectures", help="tally conjecture predicates")
    conj.add_argument("--in", dest="inp", required=True, metavar="JSONL")
    conj.add_argument("--out", required=True, metavar="REPORT_MD")

    tables = subs.add_parser("tables", help="export per-(g,k) Betti tables")
    tables.add_argument("--in", dest="inp", required=True, metavar="JSONL")
    tables.add_argument("--format", choices=("md", "csv"), default="md")
    tables.add_argument("--out", required=True, metavar="DIR")
    return parser


def _cmd_construct(args):
    spec = CurveSpec(args.genus, args.gonality, args.char, args.seed)
    model = build_curve(spec)
    info = {
        "g": spec.g,
        "k": spec.k,
        "p": spec.p,
        "seed": spec.seed,
        "scrollType": list(model.basis.scroll_type),
        "quadricCount": model.quadric_count,
        "hilbert": [
            model.hilbert.projective_dimension,
            model.hilbert.degree,
            model.hilbert.arithmetic_genus,
        ],
        "attempts": model.attempts,
    }
    print(json.dumps(info, indent=2))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(info, fh, indent=2)
    return EXIT_OK


def _cmd_resolve(args):
    spec = CurveSpec(args.genus, args.gonality, args.char, args.seed)
    rec = run_pipeline(spec)
    print(rec.to_json())
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(rec.to_json() + "\n")
    if rec.status.startswith("failed"):
        return EXIT_MATH
    return EXIT_OK


def _cmd_batch(args):
    cfg = GridConfig.from_file(args.config)
    summary = run_batch(cfg, args.out, threads=args.threads)
    failed = 0
    for cell in sorted(summary):
        counts = summary[cell]
        failed += counts.get("failed", 0)
        g, k, p = cell
        print(
            f"g={g} k={k} p={p}: ok={counts.get('ok', 0)}"
            f" balanced={counts.get('balanced', 0)}"
            f" unbalanced={counts.get('unbalanced', 0)}"
            f" failed={counts.get('failed', 0)}"
        )
    return EXIT_MATH if failed else EXIT_OK


def _cmd_check(args):
    problems = check_records(args.inp)
    for line in problems:
        print(line)
    print(f"{len(problems)} problem(s)")
    return EXIT_MATH if problems else EXIT_OK


def _cmd_conjectures(args):
    report = conjecture_report(read_records(args.inp))
    with open(args.out, "w") as fh:
        fh.write(report)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_tables(args):
    written = tables_export(read_records(args.inp), args.format, args.out)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


_COMMANDS = {
    "construct": _cmd_construct,
    "resolve": _cmd_resolve,
    "batch": _cmd_batch,
    "check": _cmd_check,
    "conjectures": _cmd_conjectures,
    "tables": _cmd_tables,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ScrollresError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
