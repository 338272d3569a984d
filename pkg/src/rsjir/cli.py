"""Command-line entry point: ``rsjir {index,query,weights,curve,verify}``.

Exit codes: 0 success, 1 usage / I-O / parse failure, 2 a scheme was
undefined for a matched query term (Croft-Harper with df = N).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from rsjir.analysis import VerifyGrid, curve_csv, estimator_curve, verify, weight_table
from rsjir.errors import DegenerateDocFreq, RSJError
from rsjir.index import build_index, load_index, read_corpus, save_index
from rsjir.retrieval import format_run, rank, read_queries
from rsjir.schemes import parse_scheme
from rsjir.weighting import normalize_log_base

EXIT_OK, EXIT_FAILURE, EXIT_DEGENERATE = 0, 1, 2


def _emit(text: str, output) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _log_base(args) -> str:
    raw = args.log_base or os.environ.get("RSJ_LOG_BASE") or "e"
    return normalize_log_base(raw)


def cmd_index(args) -> int:
    index = build_index(read_corpus(args.input))
    save_index(index, args.output)
    print(f"indexed N={index.corpus_size} terms={index.vocabulary_size}")
    return EXIT_OK


def cmd_query(args) -> int:
    scheme = parse_scheme(args.scheme, _log_base(args))
    index = load_index(args.index)
    queries = read_queries(args.queries)
    try:
        ranked = [rank(index, q, scheme, args.k) for q in queries]
    except DegenerateDocFreq as exc:
        print(f"rsjir: scheme {scheme.label} is undefined for query term {exc.term!r}: {exc}",
              file=sys.stderr)
        return EXIT_DEGENERATE
    _emit(format_run(ranked, args.run_tag or scheme.label), args.output)
    return EXIT_OK


def cmd_weights(args) -> int:
    base = _log_base(args)
    schemes = [parse_scheme(s, base) for s in args.scheme]
    index = load_index(args.index)
    terms = args.terms.split(",") if args.terms else None
    _emit(weight_table(index, schemes, terms).to_csv(), args.output)
    return EXIT_OK


def cmd_curve(args) -> int:
    scheme = parse_scheme(args.scheme, _log_base(args))
    if args.corpus_size < 1:
        raise ValueError("N must be >= 1")
    step = max(1, args.step)
    n_range = list(range(0, args.corpus_size + 1, step))
    if n_range[-1] != args.corpus_size:
        n_range.append(args.corpus_size)
    _emit(curve_csv(estimator_curve(args.corpus_size, scheme, n_range)), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = VerifyGrid(max_n=args.max_n, samples=args.samples, max_corpus=args.max_corpus,
                      retrieval_trials=args.trials, seed=args.seed)
    report = verify(grid)
    sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_FAILURE


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for scheme degeneracy here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAILURE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rsjir", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_log_base(p):
        p.add_argument("--log-base", choices=("e", "2", "10"),
                       help="logarithm base (default: $RSJ_LOG_BASE or e)")

    p = sub.add_parser("index", help="build an index from a .tsv or .jsonl corpus")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="rank documents and write a TREC run file")
    p.add_argument("index")
    p.add_argument("queries", help="one '<query_id>\\t<text>' per line")
    p.add_argument("--scheme", default="usualidf")
    p.add_argument("-k", "--k", type=int, default=10)
    p.add_argument("--run-tag", help="defaults to the scheme label")
    p.add_argument("-o", "--output", help="run file (default: stdout)")
    add_log_base(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("weights", help="CSV table of term weights under several schemes")
    p.add_argument("index")
    p.add_argument("--scheme", action="append", default=[], help="repeatable")
    p.add_argument("--terms", help="comma-separated term filter")
    p.add_argument("-o", "--output")
    add_log_base(p)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("curve", help="CSV of the relevant-occurrence estimate over df = 0..N")
    p.add_argument("corpus_size", type=int, metavar="N")
    p.add_argument("--scheme", default="usualidf")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("-o", "--output")
    add_log_base(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("verify", help="run the property-verification suite")
    defaults = VerifyGrid()
    p.add_argument("--max-n", type=int, default=defaults.max_n)
    p.add_argument("--samples", type=int, default=defaults.samples)
    p.add_argument("--max-corpus", type=int, default=defaults.max_corpus)
    p.add_argument("--trials", type=int, default=defaults.retrieval_trials)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RSJError, ValueError, OSError) as exc:
        print(f"rsjir {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
