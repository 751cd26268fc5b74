"""Similarity measures between two ranked move lists.

Three per-position measures: set overlap, the reciprocal-rank weighted
footrule similarity (with its disjoint-lists normalizer), and the
Jensen-Shannon-divergence similarity over move-count distributions.
Plus the expected percentage score of a booked position.

Reciprocal ranks are exact rationals; a move missing from a list of
length k gets rank k + 1 before taking the reciprocal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .book import RankedMove

RankedList = Sequence[RankedMove]
MoveDistribution = Dict[str, float]


class UndefinedMeasureError(ValueError):
    """Raised when a measure has no defined value for the given inputs."""


def overlap(a: RankedList, b: RankedList) -> float:
    """|moves(a) ∩ moves(b)| / |moves(a) ∪ moves(b)|."""
    sans_a = {e.san for e in a}
    sans_b = {e.san for e in b}
    union = sans_a | sans_b
    if not union:
        raise UndefinedMeasureError("overlap of two empty lists")
    return len(sans_a & sans_b) / len(union)


def assign_reciprocal_ranks(a: RankedList, b: RankedList) -> Dict[str, Tuple[Fraction, Fraction]]:
    """Reciprocal ranks over the union of moves, as exact rationals."""
    ranks_a = {e.san: e.rank for e in a}
    ranks_b = {e.san: e.rank for e in b}
    missing_a = len(a) + 1
    missing_b = len(b) + 1
    out = {}
    for san in ranks_a.keys() | ranks_b.keys():
        out[san] = (Fraction(1, ranks_a.get(san, missing_a)),
                    Fraction(1, ranks_b.get(san, missing_b)))
    return out


def _max_m_fraction(k1: int, k2: int) -> Fraction:
    total = Fraction(0)
    for i in range(1, k1 + 1):
        total += abs(Fraction(1, i) - Fraction(1, k2 + 1))
    for j in range(1, k2 + 1):
        total += abs(Fraction(1, j) - Fraction(1, k1 + 1))
    return total


def max_m(k1: int, k2: int) -> float:
    """Footrule sum of two fully disjoint lists: the measure's maximum."""
    if k1 == 0 and k2 == 0:
        raise UndefinedMeasureError("max_m undefined for two empty lists")
    return float(_max_m_fraction(k1, k2))


def footrule_sum(a: RankedList, b: RankedList) -> Fraction:
    """Sum of absolute reciprocal-rank differences over the move union."""
    return sum((abs(ra - rb) for ra, rb in assign_reciprocal_ranks(a, b).values()),
               Fraction(0))


def m_measure(a: RankedList, b: RankedList) -> float:
    """1 − footrule_sum / max_m: reciprocal-rank similarity in [0, 1]."""
    if not a and not b:
        raise UndefinedMeasureError("m_measure of two empty lists")
    normalizer = _max_m_fraction(len(a), len(b))
    if normalizer == 0:
        # a single move against an empty list: the disjoint-lists bound
        # collapses to zero, so the normalized distance is undefined
        raise UndefinedMeasureError("m_measure normalizer is zero")
    return float(1 - footrule_sum(a, b) / normalizer)


def normalize_counts(a: RankedList, min_games: int = 10) -> MoveDistribution:
    """Drop moves below the game threshold and normalize counts to masses."""
    surviving = [e for e in a if e.games >= min_games]
    total = sum(e.games for e in surviving)
    if total <= 0:
        raise UndefinedMeasureError(
            f"no move with at least {min_games} games survives the filter")
    return {e.san: e.games / total for e in surviving}


def jsd_similarity(p: MoveDistribution, q: MoveDistribution) -> float:
    """1 − sqrt(JSD) with JSD in bits; 1 means identical distributions."""
    divergence = 0.0
    for san in p.keys() | q.keys():
        pi = p.get(san, 0.0)
        qi = q.get(san, 0.0)
        mid = pi + qi
        if pi > 0.0:
            divergence += 0.5 * pi * math.log2(2.0 * pi / mid)
        if qi > 0.0:
            divergence += 0.5 * qi * math.log2(2.0 * qi / mid)
    divergence = min(max(divergence, 0.0), 1.0)
    return 1.0 - math.sqrt(divergence)


def jsd_entropy_form(p: MoveDistribution, q: MoveDistribution) -> float:
    """Independent JSD route via entropies: H((p+q)/2) − H(p)/2 − H(q)/2."""
    def entropy(dist):
        return -sum(x * math.log2(x) for x in dist if x > 0.0)
    support = sorted(p.keys() | q.keys())
    pv = [p.get(s, 0.0) for s in support]
    qv = [q.get(s, 0.0) for s in support]
    mid = [(x + y) / 2.0 for x, y in zip(pv, qv)]
    return entropy(mid) - entropy(pv) / 2.0 - entropy(qv) / 2.0


def expected_score(a: RankedList, min_games: int = 10) -> Tuple[float, int]:
    """Expected percentage score (White's viewpoint) over surviving moves.

    Returns (percent, total surviving games). Moves are weighted by their
    game counts.
    """
    surviving = [e for e in a if e.games >= min_games]
    total = sum(e.games for e in surviving)
    if total <= 0:
        raise UndefinedMeasureError(
            f"no move with at least {min_games} games survives the filter")
    points = sum(e.score_percent * e.games / 100.0 for e in surviving)
    return 100.0 * points / total, total


@dataclass(frozen=True)
class ComparisonRow:
    """Per-position comparison output; None marks an undefined cell."""

    position_id: str
    m_measure: Optional[float]
    max_m: Optional[float]
    jsd: Optional[float]
    overlap: Optional[float]


@dataclass(frozen=True)
class ExpectedScoreRow:
    """Per-position expected score and surviving game count per book."""

    position_id: str
    side_to_move: str
    score1: Optional[float]
    games1: Optional[int]
    score2: Optional[float]
    games2: Optional[int]


def compare_position(position_id: str, a: RankedList, b: RankedList,
                     min_games: int = 10) -> ComparisonRow:
    """One comparison row: overlap and M on full lists, JSD on filtered ones.

    Undefined component measures become None cells instead of failing the
    whole row.
    """
    try:
        overlap_value = overlap(a, b)
    except UndefinedMeasureError:
        overlap_value = None
    try:
        m_value = m_measure(a, b)
        max_value = max_m(len(a), len(b))
    except UndefinedMeasureError:
        m_value = None
        max_value = None
    try:
        jsd_value = jsd_similarity(normalize_counts(a, min_games),
                                   normalize_counts(b, min_games))
    except UndefinedMeasureError:
        jsd_value = None
    return ComparisonRow(position_id, m_value, max_value, jsd_value, overlap_value)


def expected_score_row(position_id: str, side_to_move: str,
                       a: RankedList, b: RankedList,
                       min_games: int = 10) -> ExpectedScoreRow:
    """One expected-score row; undefined book sides become None cells."""
    values: List[Tuple[Optional[float], Optional[int]]] = []
    for ranked in (a, b):
        try:
            values.append(expected_score(ranked, min_games))
        except UndefinedMeasureError:
            values.append((None, None))
    return ExpectedScoreRow(position_id, side_to_move,
                            values[0][0], values[0][1], values[1][0], values[1][1])
