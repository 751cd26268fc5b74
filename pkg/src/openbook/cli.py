"""openbook command line: build books, query them, compare, and plot.

Exit codes: 0 success (possibly with undefined cells), 1 usage error,
2 data error (unreadable/malformed inputs).
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import List, Optional

from . import book as book_mod
from . import plot, report, rules
from .pgn import GameFilter, MalformedGame, filter_games, parse_pgn_stream
from .suite import SuiteError, parse_epd_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class DataError(Exception):
    """Wraps input problems so main() can map them to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_atomic(path: str, text: str) -> None:
    """Write via a temp file and rename, so partial output never lands."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".openbook-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _load_book(path: str) -> book_mod.Book:
    try:
        return book_mod.load_book(path)
    except OSError as exc:
        raise DataError(f"cannot read book {path}: {exc}")
    except book_mod.BookFormatError as exc:
        raise DataError(f"bad book file {path}: {exc}")


def _parse_position(args) -> rules.Position:
    try:
        if args.fen is not None:
            return rules.parse_fen(args.fen)
        entries = parse_epd_suite([args.epd])
        return entries[0].position
    except (rules.FenError, SuiteError) as exc:
        raise DataError(str(exc))


def cmd_build(args) -> int:
    game_filter = GameFilter(min_rating=args.min_rating,
                             require_result=args.require_result)
    reports: List[MalformedGame] = []
    built = None
    for path in args.pgn:
        if not os.path.exists(path):
            raise DataError(f"cannot read PGN {path}: no such file")
        games = []
        for item in parse_pgn_stream(path):
            if isinstance(item, MalformedGame):
                reports.append(item)
            else:
                games.append(item)
        partial = book_mod.build_book(filter_games(games, game_filter),
                                      max_depth=args.depth,
                                      source=args.source or os.path.basename(path))
        built = partial if built is None else book_mod.merge_books(built, partial)
    if built is None:
        raise DataError("no PGN inputs")
    if args.source:
        built.source = args.source
    _write_atomic(args.out, book_mod._serialize(built))
    for item in reports:
        print(f"skipped game {item.game_index}: {item.reason}", file=sys.stderr)
    print(f"book written to {args.out}")
    print(f"games={built.games} positions={built.position_count} depth={built.depth}")
    return EXIT_OK


def cmd_query(args) -> int:
    built = _load_book(args.book)
    position = _parse_position(args)
    ranked = [entry for entry in book_mod.query(built, position)
              if entry.games >= args.min_games]
    print("rank\tsan\tgames\tscore%")
    for entry in ranked:
        print(f"{entry.rank}\t{entry.san}\t{entry.games}\t{entry.score_percent:.3f}")
    return EXIT_OK


def cmd_compare(args) -> int:
    book1 = _load_book(args.book1)
    book2 = _load_book(args.book2)
    try:
        suite = parse_epd_suite(args.suite)
    except OSError as exc:
        raise DataError(f"cannot read suite {args.suite}: {exc}")
    except SuiteError as exc:
        raise DataError(f"bad suite {args.suite}: {exc}")
    exclude = [x for x in (args.exclude or "").split(",") if x]
    doc = report.build_report(book1, book2, suite, min_games=args.min_games,
                              resamples=args.bootstrap, seed=args.seed,
                              exclude=exclude)
    os.makedirs(args.out, exist_ok=True)
    precision = args.precision
    _write_atomic(os.path.join(args.out, "comparison.tsv"),
                  report.render_comparison_tsv(doc, precision))
    _write_atomic(os.path.join(args.out, "expected_score.tsv"),
                  report.render_expected_tsv(doc, precision))
    _write_atomic(os.path.join(args.out, "report.md"),
                  report.render_markdown(doc, precision))
    print(f"report written to {args.out}")
    if doc.metadata["undefined_cells"] != "0":
        print(f"undefined cells: {doc.metadata['undefined_cells']}")
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as handle:
            rows, _ = report.parse_comparison_tsv(handle.read())
    except OSError as exc:
        raise DataError(f"cannot read report {args.report}: {exc}")
    except ValueError as exc:
        raise DataError(str(exc))
    marked = [x for x in (args.mark or "").split(",") if x]
    points = [(row.position_id, row.m_measure, row.jsd) for row in rows]
    try:
        svg = plot.scatter_svg(points, marked)
    except plot.PlotError as exc:
        raise DataError(str(exc))
    _write_atomic(args.out, svg)
    print(f"plot written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="openbook",
                     description="Build and compare chess opening books.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a book from PGN files")
    p_build.add_argument("--pgn", nargs="+", required=True)
    p_build.add_argument("--depth", type=int, default=40,
                         help="maximum plies recorded per game")
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--min-rating", type=int, default=None)
    p_build.add_argument("--require-result", action=argparse.BooleanOptionalAction,
                         default=True,
                         help="drop games with unknown result (default)")
    p_build.add_argument("--source", default=None,
                         help="source description stored in book metadata")
    p_build.set_defaults(func=cmd_build)

    p_query = sub.add_parser("query", help="ranked moves for one position")
    p_query.add_argument("--book", required=True)
    group = p_query.add_mutually_exclusive_group(required=True)
    group.add_argument("--fen")
    group.add_argument("--epd")
    p_query.add_argument("--min-games", type=int, default=0)
    p_query.set_defaults(func=cmd_query)

    p_compare = sub.add_parser("compare", help="compare two books over a suite")
    p_compare.add_argument("--book1", required=True)
    p_compare.add_argument("--book2", required=True)
    p_compare.add_argument("--suite", required=True)
    p_compare.add_argument("--min-games", type=int, default=10)
    p_compare.add_argument("--bootstrap", type=int, default=10000)
    p_compare.add_argument("--seed", type=int, default=0)
    p_compare.add_argument("--exclude", default="",
                           help="comma-separated position ids to exclude "
                                "from the second correlation pass")
    p_compare.add_argument("--precision", default="3",
                           help="decimal places, or 'full'")
    p_compare.add_argument("--out", required=True, help="output directory")
    p_compare.set_defaults(func=cmd_compare)

    p_plot = sub.add_parser("plot", help="scatter plot from a comparison TSV")
    p_plot.add_argument("--report", required=True)
    p_plot.add_argument("--out", required=True)
    p_plot.add_argument("--mark", default="",
                        help="comma-separated ids to mark as outliers")
    p_plot.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"openbook: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"openbook: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
