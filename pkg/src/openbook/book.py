"""Opening-book data model: build from games, persist, query ranked moves.

A book maps canonical position keys (4-field FEN with normalized en
passant) to per-move statistics, so transpositions aggregate. The file
format is line oriented, sorted, and checksummed, which makes books
diff-able and merge results bit-identical to sequential builds.
"""

from __future__ import annotations

import hashlib
import io
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional

from . import rules
from .pgn import GameRecord, MalformedGame

FORMAT_HEADER = "openbook-diff v1"

_META_RE = re.compile(r"meta source=(.*) games=(\d+) positions=(\d+) depth=(\d+)")


class BookFormatError(ValueError):
    """Raised when a book file is malformed, truncated, or corrupt."""


@dataclass(frozen=True)
class MoveStats:
    """Counts for one move at one position. games == wins + draws + losses."""

    san: str
    games: int
    white_wins: int
    draws: int
    black_wins: int

    @property
    def score_percent(self) -> float:
        """Percentage score from White's viewpoint."""
        return 100.0 * (self.white_wins + self.draws / 2.0) / self.games


@dataclass(frozen=True)
class RankedMove:
    """One row of a per-position ranked move table."""

    rank: int
    san: str
    games: int
    score_percent: float


@dataclass
class Book:
    """Per-position per-move statistics plus build metadata."""

    depth: int
    source: str = ""
    games: int = 0
    positions: dict = field(default_factory=dict)  # key -> {san -> MoveStats}

    @property
    def position_count(self) -> int:
        return len(self.positions)


def _rank_entries(stats: Iterable[MoveStats]) -> List[RankedMove]:
    ordered = sorted(stats, key=lambda s: (-s.games, s.san))
    return [RankedMove(i + 1, s.san, s.games, s.score_percent)
            for i, s in enumerate(ordered)]


def ranked_from_counts(counts) -> List[RankedMove]:
    """Build a ranked list straight from (san, games) pairs or a dict.

    Result tallies are unknown, so score_percent is 0. Useful for feeding
    externally collected count tables into the measures.
    """
    items = counts.items() if hasattr(counts, "items") else counts
    ordered = sorted(items, key=lambda kv: (-kv[1], kv[0]))
    return [RankedMove(i + 1, san, games, 0.0)
            for i, (san, games) in enumerate(ordered)]


def query(book: Book, position: rules.Position) -> List[RankedMove]:
    """Ranked moves for a position; empty if the position is not booked."""
    stats = book.positions.get(rules.position_key(position))
    if not stats:
        return []
    return _rank_entries(stats.values())


_RESULT_TALLY = {"1-0": (1, 0, 0), "1/2-1/2": (0, 1, 0), "0-1": (0, 0, 1)}


def build_book(games: Iterable[GameRecord], max_depth: int = 40, source: str = "",
               on_error: Optional[Callable[[MalformedGame], None]] = None) -> Book:
    """Accumulate move statistics over the first ``max_depth`` plies of each game.

    Games with unknown results carry no score information and are skipped.
    Unreplayable games are reported through ``on_error`` and skipped whole.
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    counts: dict = {}
    total_games = 0
    for game_index, game in enumerate(games, 1):
        if isinstance(game, MalformedGame):
            if on_error:
                on_error(game)
            continue
        tally = _RESULT_TALLY.get(game.result)
        if tally is None:
            continue
        touched = []
        try:
            for pos, move, _ in rules.replay_san(rules.initial_position(),
                                                 game.moves[:max_depth]):
                touched.append((rules.position_key(pos), rules.emit_san(pos, move)))
        except rules.IllegalMoveError as exc:
            if on_error:
                on_error(MalformedGame(game_index, str(exc),
                                       move_index=len(touched), tags=game.tags))
            continue
        for key, san in touched:
            entry = counts.setdefault(key, {}).setdefault(san, [0, 0, 0, 0])
            entry[0] += 1
            entry[1] += tally[0]
            entry[2] += tally[1]
            entry[3] += tally[2]
        total_games += 1
    positions = {
        key: {san: MoveStats(san, *entry) for san, entry in moves.items()}
        for key, moves in counts.items()
    }
    return Book(depth=max_depth, source=source, games=total_games, positions=positions)


def merge_books(a: Book, b: Book) -> Book:
    """Sum two books built at the same depth; counts add per (key, san)."""
    if a.depth != b.depth:
        raise ValueError(f"depth mismatch: {a.depth} != {b.depth}")
    positions: dict = {}
    for book in (a, b):
        for key, moves in book.positions.items():
            into = positions.setdefault(key, {})
            for san, stats in moves.items():
                old = into.get(san)
                if old is None:
                    into[san] = stats
                else:
                    into[san] = MoveStats(san, old.games + stats.games,
                                          old.white_wins + stats.white_wins,
                                          old.draws + stats.draws,
                                          old.black_wins + stats.black_wins)
    source = a.source if a.source == b.source else f"{a.source}+{b.source}"
    return Book(depth=a.depth, source=source, games=a.games + b.games,
                positions=positions)


def _serialize(book: Book) -> str:
    lines = [FORMAT_HEADER,
             f"meta source={book.source} games={book.games} "
             f"positions={book.position_count} depth={book.depth}"]
    for key in sorted(book.positions):
        lines.append(f"pos {key}")
        for entry in _rank_entries(book.positions[key].values()):
            stats = book.positions[key][entry.san]
            lines.append(f"mv {stats.san} {stats.games} {stats.white_wins} "
                         f"{stats.draws} {stats.black_wins}")
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return body + f"sha256 {digest}\n"


def save_book(book: Book, sink) -> None:
    """Write a book file. ``sink`` is a path or a text/binary file object."""
    text = _serialize(book)
    if isinstance(sink, str):
        with open(sink, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    elif isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


def load_book(source) -> Book:
    """Read and verify a book file written by save_book."""
    if isinstance(source, str):
        with open(source, "rb") as handle:
            raw = handle.read()
    elif isinstance(source, io.TextIOBase):
        raw = source.read().encode("utf-8")
    else:
        raw = source.read()
        if isinstance(raw, str):
            raw = raw.encode("utf-8")
    text = raw.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 3:
        raise BookFormatError("truncated book file")
    checksum_line = lines[-1]
    if not checksum_line.startswith("sha256 "):
        raise BookFormatError(f"line {len(lines)}: missing checksum line")
    body = "\n".join(lines[:-1]) + "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if checksum_line != f"sha256 {digest}":
        raise BookFormatError(f"line {len(lines)}: checksum mismatch")
    if lines[0] != FORMAT_HEADER:
        raise BookFormatError(f"line 1: bad header {lines[0]!r}")
    meta = _META_RE.fullmatch(lines[1])
    if not meta:
        raise BookFormatError(f"line 2: bad meta line {lines[1]!r}")
    source_text, games, position_count, depth = meta.groups()
    book = Book(depth=int(depth), source=source_text, games=int(games))
    current: Optional[dict] = None
    for number, line in enumerate(lines[2:-1], start=3):
        if line.startswith("pos "):
            key = line[4:]
            if key in book.positions:
                raise BookFormatError(f"line {number}: duplicate position {key!r}")
            current = book.positions.setdefault(key, {})
        elif line.startswith("mv "):
            if current is None:
                raise BookFormatError(f"line {number}: mv line before any pos line")
            parts = line.split()
            if len(parts) != 6:
                raise BookFormatError(f"line {number}: bad mv line {line!r}")
            san = parts[1]
            try:
                games_n, wins, draws, losses = (int(x) for x in parts[2:])
            except ValueError:
                raise BookFormatError(f"line {number}: non-integer counts in {line!r}")
            if games_n != wins + draws + losses:
                raise BookFormatError(f"line {number}: counts do not add up in {line!r}")
            if san in current:
                raise BookFormatError(f"line {number}: duplicate move {san!r}")
            current[san] = MoveStats(san, games_n, wins, draws, losses)
        else:
            raise BookFormatError(f"line {number}: unexpected line {line!r}")
    if book.position_count != int(position_count):
        raise BookFormatError(
            f"meta positions={position_count} but file has {book.position_count}")
    return book
