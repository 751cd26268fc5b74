"""Move-generator correctness via frozen perft node counts.

The counts are the standard published values for these positions; they
were cross-checked against an independent generator before being frozen.
"""

import pytest

from openbook import rules

INITIAL_COUNTS = {1: 20, 2: 400, 3: 8902, 4: 197281}

# positions exercising castling, pins, en passant, promotions, checks
TRICKY = [
    ("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
     {1: 48, 2: 2039, 3: 97862}),
    ("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
     {1: 14, 2: 191, 3: 2812, 4: 43238}),
    ("r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
     {1: 6, 2: 264, 3: 9467}),
    ("rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
     {1: 44, 2: 1486, 3: 62379}),
]


@pytest.mark.parametrize("depth,expected", sorted(INITIAL_COUNTS.items()))
def test_initial_position_counts(depth, expected):
    assert rules.perft(rules.initial_position(), depth) == expected


@pytest.mark.parametrize("fen,counts", TRICKY, ids=lambda v: v.split()[0][:12] if isinstance(v, str) else None)
def test_tricky_position_counts(fen, counts):
    position = rules.parse_fen(fen)
    for depth, expected in sorted(counts.items()):
        assert rules.perft(position, depth) == expected
