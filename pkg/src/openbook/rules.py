"""Chess domain model: positions, FEN/EPD parsing, legal moves, SAN.

The board is a 0x88 mailbox: square index = 16 * rank + file, so off-board
squares are detected with ``index & 0x88``. White pieces are uppercase
letters, black lowercase. Positions are immutable values; every operation
returns a new Position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

WHITE = "w"
BLACK = "b"

START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"

FILES = "abcdefgh"

KNIGHT_OFFSETS = (33, 31, 18, 14, -14, -18, -31, -33)
KING_OFFSETS = (17, 16, 15, 1, -1, -15, -16, -17)
BISHOP_DIRS = (17, 15, -15, -17)
ROOK_DIRS = (16, 1, -1, -16)

# on-board 0x88 indices, a1 first
SQUARES = tuple(16 * r + f for r in range(8) for f in range(8))

A1, B1, C1, D1, E1, F1, G1, H1 = range(8)
A8, B8, C8, D8, E8, F8, G8, H8 = range(112, 120)


class FenError(ValueError):
    """Raised when a FEN/EPD string cannot be parsed into a valid position."""


class IllegalMoveError(ValueError):
    """Raised when a move or SAN token is not legal in the given position."""


class AmbiguousSanError(IllegalMoveError):
    """Raised when a SAN token matches more than one legal move."""


def square_name(sq: int) -> str:
    return FILES[sq & 7] + str((sq >> 4) + 1)


def parse_square(name: str) -> int:
    if len(name) != 2 or name[0] not in FILES or name[1] not in "12345678":
        raise ValueError(f"bad square name: {name!r}")
    return 16 * (int(name[1]) - 1) + FILES.index(name[0])


@dataclass(frozen=True)
class Move:
    """A move between two 0x88 squares, with the flags SAN needs."""

    from_sq: int
    to_sq: int
    promotion: Optional[str] = None  # uppercase "N"/"B"/"R"/"Q"
    capture: bool = False
    en_passant: bool = False
    castle: Optional[str] = None  # "K" or "Q"

    def uci(self) -> str:
        suffix = self.promotion.lower() if self.promotion else ""
        return square_name(self.from_sq) + square_name(self.to_sq) + suffix


@dataclass(frozen=True)
class Position:
    """Immutable chess position.

    ``board`` has 128 slots (0x88); ``castling`` is a subset of "KQkq" in
    that order; ``ep`` is the en-passant target square exactly as produced
    by the last double push (normalization to "only if capturable" happens
    in emit_fen / position_key).
    """

    board: tuple
    turn: str
    castling: str
    ep: Optional[int]
    halfmove: int
    fullmove: int


def _is_white(piece: str) -> bool:
    return piece.isupper()


def _attacked(board, sq: int, by_white: bool) -> bool:
    """Is ``sq`` attacked by any piece of the given color?"""
    pawn, knight, king = ("P", "N", "K") if by_white else ("p", "n", "k")
    rook_q = ("R", "Q") if by_white else ("r", "q")
    bishop_q = ("B", "Q") if by_white else ("b", "q")
    # pawns attack "up" for white, so the attacker sits below the target
    for d in ((-17, -15) if by_white else (15, 17)):
        s = sq + d
        if not s & 0x88 and board[s] == pawn:
            return True
    for d in KNIGHT_OFFSETS:
        s = sq + d
        if not s & 0x88 and board[s] == knight:
            return True
    for d in KING_OFFSETS:
        s = sq + d
        if not s & 0x88 and board[s] == king:
            return True
    for d in ROOK_DIRS:
        s = sq + d
        while not s & 0x88:
            pc = board[s]
            if pc is not None:
                if pc in rook_q:
                    return True
                break
            s += d
    for d in BISHOP_DIRS:
        s = sq + d
        while not s & 0x88:
            pc = board[s]
            if pc is not None:
                if pc in bishop_q:
                    return True
                break
            s += d
    return False


def _find_king(board, color: str) -> int:
    king = "K" if color == WHITE else "k"
    for s in SQUARES:
        if board[s] == king:
            return s
    raise ValueError(f"no {color} king on board")


def _pinned_squares(board, king_sq: int, white: bool) -> set:
    """Squares of own pieces absolutely pinned to the king."""
    pinned = set()
    for dirs, sliders in ((ROOK_DIRS, ("r", "q") if white else ("R", "Q")),
                          (BISHOP_DIRS, ("b", "q") if white else ("B", "Q"))):
        for d in dirs:
            s = king_sq + d
            blocker = None
            while not s & 0x88:
                pc = board[s]
                if pc is not None:
                    if blocker is None:
                        if pc.isupper() == white:
                            blocker = s
                        else:
                            break
                    else:
                        if pc in sliders:
                            pinned.add(blocker)
                        break
                s += d
    return pinned


def _pseudo_moves(p: Position):
    board = p.board
    white = p.turn == WHITE
    moves = []
    add = moves.append
    fwd = 16 if white else -16
    start_rank = 1 if white else 6
    promo_rank = 7 if white else 0
    for s in SQUARES:
        pc = board[s]
        if pc is None or pc.isupper() != white:
            continue
        kind = pc.upper()
        if kind == "P":
            t = s + fwd
            if not t & 0x88 and board[t] is None:
                if t >> 4 == promo_rank:
                    for promo in "QRBN":
                        add(Move(s, t, promotion=promo))
                else:
                    add(Move(s, t))
                    t2 = t + fwd
                    if s >> 4 == start_rank and board[t2] is None:
                        add(Move(s, t2))
            for d in (fwd - 1, fwd + 1):
                t = s + d
                if t & 0x88:
                    continue
                target = board[t]
                if target is not None and target.isupper() != white:
                    if t >> 4 == promo_rank:
                        for promo in "QRBN":
                            add(Move(s, t, promotion=promo, capture=True))
                    else:
                        add(Move(s, t, capture=True))
                elif target is None and p.ep == t:
                    add(Move(s, t, capture=True, en_passant=True))
        elif kind == "N":
            for d in KNIGHT_OFFSETS:
                t = s + d
                if t & 0x88:
                    continue
                target = board[t]
                if target is None:
                    add(Move(s, t))
                elif target.isupper() != white:
                    add(Move(s, t, capture=True))
        elif kind == "K":
            for d in KING_OFFSETS:
                t = s + d
                if t & 0x88:
                    continue
                target = board[t]
                if target is None:
                    add(Move(s, t))
                elif target.isupper() != white:
                    add(Move(s, t, capture=True))
        else:
            dirs = ROOK_DIRS if kind == "R" else BISHOP_DIRS if kind == "B" else KING_OFFSETS
            for d in dirs:
                t = s + d
                while not t & 0x88:
                    target = board[t]
                    if target is None:
                        add(Move(s, t))
                    else:
                        if target.isupper() != white:
                            add(Move(s, t, capture=True))
                        break
                    t += d
    # castling: rights imply king/rook on home squares (parse_fen enforces),
    # but re-check placement so hand-built positions stay safe
    if white:
        if ("K" in p.castling and board[E1] == "K" and board[H1] == "R"
                and board[F1] is None and board[G1] is None
                and not _attacked(board, E1, False)
                and not _attacked(board, F1, False)
                and not _attacked(board, G1, False)):
            add(Move(E1, G1, castle="K"))
        if ("Q" in p.castling and board[E1] == "K" and board[A1] == "R"
                and board[B1] is None and board[C1] is None and board[D1] is None
                and not _attacked(board, E1, False)
                and not _attacked(board, D1, False)
                and not _attacked(board, C1, False)):
            add(Move(E1, C1, castle="Q"))
    else:
        if ("k" in p.castling and board[E8] == "k" and board[H8] == "r"
                and board[F8] is None and board[G8] is None
                and not _attacked(board, E8, True)
                and not _attacked(board, F8, True)
                and not _attacked(board, G8, True)):
            add(Move(E8, G8, castle="K"))
        if ("q" in p.castling and board[E8] == "k" and board[A8] == "r"
                and board[B8] is None and board[C8] is None and board[D8] is None
                and not _attacked(board, E8, True)
                and not _attacked(board, D8, True)
                and not _attacked(board, C8, True)):
            add(Move(E8, C8, castle="Q"))
    return moves


def legal_moves(p: Position) -> list:
    """All legal moves in ``p`` under FIDE rules."""
    board = list(p.board)
    white = p.turn == WHITE
    king_sq = _find_king(board, p.turn)
    in_check = _attacked(board, king_sq, not white)
    pinned = _pinned_squares(board, king_sq, white)
    out = []
    for m in _pseudo_moves(p):
        if m.castle:
            out.append(m)  # generation already verified the king's path
            continue
        f = m.from_sq
        if not in_check and f != king_sq and f not in pinned and not m.en_passant:
            out.append(m)
            continue
        cap_sq = m.to_sq
        if m.en_passant:
            cap_sq = m.to_sq + (-16 if white else 16)
        moved = board[f]
        captured = board[cap_sq]
        board[cap_sq] = None
        board[f] = None
        board[m.to_sq] = moved
        checked_sq = m.to_sq if f == king_sq else king_sq
        ok = not _attacked(board, checked_sq, not white)
        board[m.to_sq] = None
        board[f] = moved
        board[cap_sq] = captured
        if ok:
            out.append(m)
    return out


def is_check(p: Position) -> bool:
    return _attacked(p.board, _find_king(p.board, p.turn), p.turn != WHITE)


def _apply(p: Position, m: Move) -> Position:
    """Apply a known-legal move. Callers must have validated legality."""
    board = list(p.board)
    white = p.turn == WHITE
    pc = board[m.from_sq]
    board[m.from_sq] = None
    if m.en_passant:
        board[m.to_sq + (-16 if white else 16)] = None
    if m.promotion:
        board[m.to_sq] = m.promotion if white else m.promotion.lower()
    else:
        board[m.to_sq] = pc
    if m.castle == "K":
        rook_from, rook_to = (H1, F1) if white else (H8, F8)
        board[rook_to] = board[rook_from]
        board[rook_from] = None
    elif m.castle == "Q":
        rook_from, rook_to = (A1, D1) if white else (A8, D8)
        board[rook_to] = board[rook_from]
        board[rook_from] = None

    rights = p.castling
    if pc == "K":
        rights = rights.replace("K", "").replace("Q", "")
    elif pc == "k":
        rights = rights.replace("k", "").replace("q", "")
    for sq, flag in ((H1, "K"), (A1, "Q"), (H8, "k"), (A8, "q")):
        if m.from_sq == sq or m.to_sq == sq:
            rights = rights.replace(flag, "")

    ep = None
    if pc in ("P", "p") and abs(m.to_sq - m.from_sq) == 32:
        ep = (m.from_sq + m.to_sq) // 2
    halfmove = 0 if (pc in ("P", "p") or m.capture) else p.halfmove + 1
    fullmove = p.fullmove + (0 if white else 1)
    return Position(tuple(board), BLACK if white else WHITE, rights, ep, halfmove, fullmove)


def apply_move(p: Position, m: Move) -> Position:
    """Apply ``m`` to ``p``, raising IllegalMoveError if it is not legal."""
    if m not in legal_moves(p):
        raise IllegalMoveError(f"illegal move {m.uci()} in {emit_fen(p)}")
    return _apply(p, m)


def _ep_capture_legal(p: Position) -> bool:
    """True when the recorded en-passant target can actually be captured."""
    if p.ep is None:
        return False
    board = list(p.board)
    white = p.turn == WHITE
    pawn = "P" if white else "p"
    cap_sq = p.ep + (-16 if white else 16)
    king_sq = _find_king(board, p.turn)
    for d in ((-17, -15) if white else (15, 17)):
        f = p.ep + d
        if f & 0x88 or board[f] != pawn:
            continue
        board[f] = None
        board[cap_sq] = None
        board[p.ep] = pawn
        ok = not _attacked(board, king_sq, not white)
        board[p.ep] = None
        board[cap_sq] = pawn.swapcase()
        board[f] = pawn
        if ok:
            return True
    return False


def _canonical_ep(p: Position) -> Optional[int]:
    return p.ep if _ep_capture_legal(p) else None


def normalize(p: Position) -> Position:
    """Drop a meaningless en-passant target (no legal capture onto it)."""
    if p.ep is not None and not _ep_capture_legal(p):
        return Position(p.board, p.turn, p.castling, None, p.halfmove, p.fullmove)
    return p


def initial_position() -> Position:
    return parse_fen(START_FEN)


def parse_fen(text: str) -> Position:
    """Parse a 6-field FEN or 4-field EPD body into a valid Position."""
    fields = text.split()
    if len(fields) == 4:
        fields = fields + ["0", "1"]
    if len(fields) != 6:
        raise FenError(f"expected 4 or 6 fields, got {len(fields)}: {text!r}")
    placement, turn, castling, ep_field, half_field, full_field = fields

    board = [None] * 128
    ranks = placement.split("/")
    if len(ranks) != 8:
        raise FenError(f"placement needs 8 ranks: {placement!r}")
    kings = {"K": 0, "k": 0}
    for i, rank_text in enumerate(ranks):
        rank = 7 - i
        file = 0
        for ch in rank_text:
            if ch.isdigit():
                file += int(ch)
            elif ch in "PNBRQKpnbrqk":
                if file > 7:
                    raise FenError(f"rank overflow in placement: {rank_text!r}")
                if ch in ("P", "p") and rank in (0, 7):
                    raise FenError(f"pawn on back rank: {placement!r}")
                if ch in kings:
                    kings[ch] += 1
                board[16 * rank + file] = ch
                file += 1
            else:
                raise FenError(f"bad placement character {ch!r}")
        if file != 8:
            raise FenError(f"rank has {file} files, expected 8: {rank_text!r}")
    if kings["K"] != 1 or kings["k"] != 1:
        raise FenError(f"need exactly one king per side, got K={kings['K']} k={kings['k']}")

    if turn not in (WHITE, BLACK):
        raise FenError(f"bad side-to-move field: {turn!r}")

    if castling == "-":
        rights = ""
    else:
        if not re.fullmatch(r"K?Q?k?q?", "".join(sorted(set(castling), key="KQkq".index))
                            if set(castling) <= set("KQkq") else "x"):
            raise FenError(f"bad castling field: {castling!r}")
        rights = "".join(flag for flag in "KQkq" if flag in castling)
    # drop rights inconsistent with king/rook placement
    kept = ""
    for flag, king_sq, rook_sq, king_pc, rook_pc in (
            ("K", E1, H1, "K", "R"), ("Q", E1, A1, "K", "R"),
            ("k", E8, H8, "k", "r"), ("q", E8, A8, "k", "r")):
        if flag in rights and board[king_sq] == king_pc and board[rook_sq] == rook_pc:
            kept += flag
    rights = kept

    if ep_field == "-":
        ep = None
    else:
        try:
            ep = parse_square(ep_field)
        except ValueError as exc:
            raise FenError(f"bad en-passant field: {ep_field!r}") from exc
        expected_rank = 5 if turn == WHITE else 2
        if ep >> 4 != expected_rank:
            raise FenError(f"en-passant square {ep_field!r} on wrong rank for side {turn}")

    try:
        halfmove = int(half_field)
        fullmove = int(full_field)
    except ValueError as exc:
        raise FenError(f"bad clock fields: {half_field!r} {full_field!r}") from exc
    if halfmove < 0 or fullmove < 1:
        raise FenError(f"bad clock values: {halfmove} {fullmove}")

    p = Position(tuple(board), turn, rights, ep, halfmove, fullmove)
    # the side that just moved may not be left in check
    opponent = BLACK if turn == WHITE else WHITE
    if _attacked(p.board, _find_king(p.board, opponent), turn == WHITE):
        raise FenError(f"side not to move is in check: {text!r}")
    return p


def emit_fen(p: Position) -> str:
    """Canonical 6-field FEN; en passant emitted only when capturable."""
    rows = []
    for rank in range(7, -1, -1):
        row = ""
        empty = 0
        for file in range(8):
            pc = p.board[16 * rank + file]
            if pc is None:
                empty += 1
            else:
                if empty:
                    row += str(empty)
                    empty = 0
                row += pc
        if empty:
            row += str(empty)
        rows.append(row)
    ep = _canonical_ep(p)
    return " ".join([
        "/".join(rows),
        p.turn,
        p.castling or "-",
        square_name(ep) if ep is not None else "-",
        str(p.halfmove),
        str(p.fullmove),
    ])


def position_key(p: Position) -> str:
    """Canonical transposition key: 4-field FEN with normalized en passant."""
    return " ".join(emit_fen(p).split()[:4])


_SAN_BODY = re.compile(
    r"^(?P<piece>[NBRQK])?(?P<ff>[a-h])?(?P<fr>[1-8])?(?P<cap>x)?"
    r"(?P<to>[a-h][1-8])(?:=?(?P<promo>[NBRQ]))?$"
)


def _clean_san(text: str) -> str:
    token = text.strip()
    token = token.replace("e.p.", "").replace("(ep)", "")
    token = token.rstrip("+#!?")
    return token


def parse_san(p: Position, text: str) -> Move:
    """Resolve a SAN token to the unique matching legal move."""
    token = _clean_san(text)
    if not token:
        raise IllegalMoveError(f"empty SAN token {text!r} in {emit_fen(p)}")
    moves = legal_moves(p)
    if token in ("O-O", "0-0"):
        for m in moves:
            if m.castle == "K":
                return m
        raise IllegalMoveError(f"illegal SAN {text!r} in {emit_fen(p)}")
    if token in ("O-O-O", "0-0-0"):
        for m in moves:
            if m.castle == "Q":
                return m
        raise IllegalMoveError(f"illegal SAN {text!r} in {emit_fen(p)}")
    match = _SAN_BODY.fullmatch(token)
    if not match:
        raise IllegalMoveError(f"unparsable SAN {text!r} in {emit_fen(p)}")
    piece = match.group("piece") or "P"
    to_sq = parse_square(match.group("to"))
    from_file = match.group("ff")
    from_rank = match.group("fr")
    promo = match.group("promo")
    candidates = []
    for m in moves:
        if m.castle or m.to_sq != to_sq:
            continue
        if p.board[m.from_sq].upper() != piece:
            continue
        if (m.promotion or None) != (promo or None):
            continue
        if from_file and FILES[m.from_sq & 7] != from_file:
            continue
        if from_rank and str((m.from_sq >> 4) + 1) != from_rank:
            continue
        if piece == "P" and not from_file and m.capture:
            continue  # pawn captures always carry the source file in SAN
        candidates.append(m)
    if not candidates:
        raise IllegalMoveError(f"illegal SAN {text!r} in {emit_fen(p)}")
    if len(candidates) > 1:
        raise AmbiguousSanError(f"ambiguous SAN {text!r} in {emit_fen(p)}")
    return candidates[0]


def emit_san(p: Position, m: Move) -> str:
    """Minimal-disambiguation SAN for a legal move, with check suffix."""
    moves = legal_moves(p)
    if m not in moves:
        raise IllegalMoveError(f"illegal move {m.uci()} in {emit_fen(p)}")
    if m.castle == "K":
        body = "O-O"
    elif m.castle == "Q":
        body = "O-O-O"
    else:
        piece = p.board[m.from_sq].upper()
        to_name = square_name(m.to_sq)
        if piece == "P":
            body = ""
            if m.capture:
                body = FILES[m.from_sq & 7] + "x"
            body += to_name
            if m.promotion:
                body += "=" + m.promotion
        else:
            rivals = [o for o in moves
                      if o.to_sq == m.to_sq and o.from_sq != m.from_sq
                      and not o.castle and p.board[o.from_sq].upper() == piece]
            disambig = ""
            if rivals:
                same_file = any((o.from_sq & 7) == (m.from_sq & 7) for o in rivals)
                same_rank = any((o.from_sq >> 4) == (m.from_sq >> 4) for o in rivals)
                if not same_file:
                    disambig = FILES[m.from_sq & 7]
                elif not same_rank:
                    disambig = str((m.from_sq >> 4) + 1)
                else:
                    disambig = square_name(m.from_sq)
            body = piece + disambig + ("x" if m.capture else "") + to_name
    successor = _apply(p, m)
    if is_check(successor):
        body += "#" if not legal_moves(successor) else "+"
    return body


def perft(p: Position, depth: int) -> int:
    """Count leaf nodes of the legal move tree to the given depth."""
    if depth <= 0:
        return 1
    moves = legal_moves(p)
    if depth == 1:
        return len(moves)
    return sum(perft(_apply(p, m), depth - 1) for m in moves)


def replay_san(p: Position, tokens: Iterable[str]):
    """Yield (position_before, move, san_token) while replaying SAN tokens."""
    for token in tokens:
        m = parse_san(p, token)
        yield p, m, token
        p = _apply(p, m)
