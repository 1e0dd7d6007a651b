"""Command-line front end.

Exit codes: 0 ok, 1 parse or configuration error, 2 unresolved verdict,
3 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .coloring import frontier, parse_coloring
from .corpus import Bounds, analysis_report, load_corpus, run_corpus, square_free_keys
from .dsl import parse_word
from .errors import CrossCheckError, PrefalError
from .prefactor import DEFAULT_SCAN_BOUND, DEFAULT_VERIFY_LEN, Status, derived_chain
from .report import to_json, to_text

EXIT_OK, EXIT_CONFIG, EXIT_UNRESOLVED, EXIT_CROSSCHECK = 0, 1, 2, 3


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scan-bound", type=_positive, default=DEFAULT_SCAN_BOUND,
                        help="longest unbordered prefix searched (default %(default)s)")
    common.add_argument("--verify-len", type=_positive, default=DEFAULT_VERIFY_LEN,
                        help="prefix length used to verify code tables (default %(default)s)")
    common.add_argument("--depth", type=_positive, default=None,
                        help="number of derived levels (default 4 for derive, 6 for classify)")
    common.add_argument("--frontier-len", type=_positive, default=64,
                        help="prefix length for coloring frontiers (default %(default)s)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--jobs", type=_positive, default=1, help="parallel corpus workers")

    parser = _Parser(prog="prefal", description="Prefixal factorizations of infinite words.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    gen = sub.add_parser("generate", parents=[common], help="print a prefix of a word")
    gen.add_argument("spec")
    gen.add_argument("n", type=int)
    der = sub.add_parser("derive", parents=[common], help="derived-word chain report")
    der.add_argument("spec")
    cls = sub.add_parser("classify", parents=[common], help="place a word in the hierarchy")
    cls.add_argument("spec")
    col = sub.add_parser("color", parents=[common], help="monochromatic-factorization frontier")
    col.add_argument("spec")
    col.add_argument("coloring")
    col.add_argument("--window", type=_positive, default=None,
                     help="piece-length window for frontier death (default n/4)")
    sub.add_parser("corpus-run", parents=[common], help="check the built-in corpus")
    return parser


def _emit(body: dict, fmt: str) -> None:
    print(to_json(body) if fmt == "json" else to_text(body))


def _keys() -> frozenset:
    return square_free_keys(load_corpus())


def cmd_generate(args) -> int:
    if args.n < 0:
        raise PrefalError("prefix length must be non-negative")
    print(parse_word(args.spec).text(args.n))
    return EXIT_OK


def cmd_derive(args) -> int:
    word = parse_word(args.spec)
    chain = derived_chain(word, args.depth or 4, args.scan_bound, args.verify_len, _keys())
    body = {"spec": args.spec, "bounds": {"scan_bound": args.scan_bound,
                                          "verify_len": args.verify_len, "depth": args.depth or 4}}
    body.update(chain.to_json())
    _emit(body, args.format)
    return EXIT_OK


def cmd_classify(args) -> int:
    bounds = Bounds(args.scan_bound, args.verify_len, args.depth or 6)
    body, verdict = analysis_report(args.spec, bounds, _keys())
    _emit(body, args.format)
    if verdict.status is Status.UNRESOLVED and "sturmian" not in body:
        return EXIT_UNRESOLVED
    return EXIT_OK


def cmd_color(args) -> int:
    word = parse_word(args.spec)
    coloring = parse_coloring(args.coloring, word.glyphs)
    report = frontier(word, coloring, args.frontier_len, args.window)
    body = {"spec": args.spec, "coloring": coloring.render(word.glyphs)}
    body.update(report.to_json())
    _emit(body, args.format)
    return EXIT_OK


def cmd_corpus_run(args) -> int:
    bounds = Bounds(args.scan_bound, args.verify_len, args.depth or 6)
    results = run_corpus(load_corpus(), bounds, args.jobs)
    passed = sum(r["status"] == "pass" for r in results)
    body = {"bounds": bounds.to_json(), "passed": passed, "total": len(results), "entries": results}
    if args.format == "json":
        _emit(body, "json")
    else:
        for r in results:
            print(f"{r['status']:>20}  {r['name']}" + (f"  ({r['error']})" if r["error"] else ""))
        print(f"{passed}/{len(results)} passed")
    return EXIT_OK if passed == len(results) else EXIT_CROSSCHECK


COMMANDS = {"generate": cmd_generate, "derive": cmd_derive, "classify": cmd_classify,
            "color": cmd_color, "corpus-run": cmd_corpus_run}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CrossCheckError as exc:
        print(f"prefal: cross-check failure: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except PrefalError as exc:
        print(f"prefal: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
