"""Cross-position statistics: correlation, bootstrap CIs, exponential fit.

Bootstrap resampling uses numpy's PCG64 generator seeded explicitly, so a
(seed, resamples) pair maps to one exact result. Standard deviations are
sample (n − 1) throughout; both conventions are recorded in report
metadata by the cli module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .measures import ComparisonRow

RNG_ALGORITHM = "numpy-PCG64"
STD_CONVENTION = "sample(n-1)"


class StatsError(ValueError):
    """Raised when a statistic is undefined for the given sample."""


@dataclass(frozen=True)
class PairedSample:
    """Paired observations (x_i, y_i) tagged with position ids."""

    ids: Tuple[str, ...]
    x: Tuple[float, ...]
    y: Tuple[float, ...]

    def __post_init__(self):
        if not (len(self.ids) == len(self.x) == len(self.y)):
            raise ValueError("ids, x, y must have equal lengths")

    def __len__(self) -> int:
        return len(self.x)

    def without(self, excluded_ids) -> "PairedSample":
        """Copy with the listed position ids removed."""
        excluded = set(excluded_ids)
        kept = [i for i, pid in enumerate(self.ids) if pid not in excluded]
        return PairedSample(tuple(self.ids[i] for i in kept),
                            tuple(self.x[i] for i in kept),
                            tuple(self.y[i] for i in kept))


@dataclass(frozen=True)
class BootstrapResult:
    """Point estimate with a percentile 95% confidence interval."""

    estimate: float
    lower: float
    upper: float
    resamples: int
    seed: int


@dataclass(frozen=True)
class FitResult:
    """Log-linear least-squares fit: ln(count) ≈ intercept + slope · rank."""

    intercept: float
    slope: float
    r_squared: float


def pearson_xy(x: np.ndarray, y: np.ndarray) -> float:
    """Product-moment correlation of two vectors; StatsError if constant."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xm = x - x.mean()
    ym = y - y.mean()
    denominator = math.sqrt(float((xm * xm).sum()) * float((ym * ym).sum()))
    if denominator == 0.0:
        raise StatsError("correlation undefined: constant column")
    return float((xm * ym).sum()) / denominator


def pearson(sample: PairedSample) -> float:
    """Pearson correlation of a paired sample (n >= 2, non-constant)."""
    if len(sample) < 2:
        raise StatsError(f"need at least 2 pairs, got {len(sample)}")
    return pearson_xy(np.array(sample.x), np.array(sample.y))


def bootstrap_ci(sample: PairedSample,
                 statistic: Callable[[np.ndarray, np.ndarray], float] = pearson_xy,
                 resamples: int = 10000, seed: int = 0) -> BootstrapResult:
    """Percentile bootstrap of a paired statistic.

    Resamples pairs with replacement; resamples where either column is
    constant are skipped. More than 50% degenerate resamples is an error.
    Deterministic for a given seed.
    """
    n = len(sample)
    if n < 3:
        raise StatsError(f"need at least 3 pairs to bootstrap, got {n}")
    if resamples < 1000:
        raise StatsError(f"need at least 1000 resamples, got {resamples}")
    x = np.array(sample.x, dtype=float)
    y = np.array(sample.y, dtype=float)
    estimate = statistic(x, y)
    rng = np.random.Generator(np.random.PCG64(seed))
    indices = rng.integers(0, n, size=(resamples, n))
    if statistic is pearson_xy:
        xs = x[indices]
        ys = y[indices]
        xm = xs - xs.mean(axis=1, keepdims=True)
        ym = ys - ys.mean(axis=1, keepdims=True)
        denominator = np.sqrt((xm * xm).sum(axis=1) * (ym * ym).sum(axis=1))
        valid_mask = denominator > 0.0
        values = (xm * ym).sum(axis=1)[valid_mask] / denominator[valid_mask]
    else:
        collected = []
        for row in indices:
            try:
                collected.append(statistic(x[row], y[row]))
            except StatsError:
                continue
        values = np.array(collected)
    if len(values) < resamples / 2:
        raise StatsError(
            f"{resamples - len(values)} of {resamples} resamples were degenerate")
    lower, upper = np.quantile(values, [0.025, 0.975])
    return BootstrapResult(estimate, float(lower), float(upper), resamples, seed)


def exp_fit(counts: Sequence[float]) -> FitResult:
    """OLS of ln(count) against rank 1..n, with r² of the fitted pairs."""
    if len(counts) < 3:
        raise StatsError(f"need at least 3 counts, got {len(counts)}")
    if any(c < 1 for c in counts):
        raise StatsError("counts must be positive")
    ranks = np.arange(1, len(counts) + 1, dtype=float)
    logs = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(ranks, logs, 1)
    r = pearson_xy(ranks, logs)  # StatsError on constant log-counts
    return FitResult(float(intercept), float(slope), r * r)


def mean_std(values: Sequence[float]) -> Tuple[float, float]:
    """Arithmetic mean and sample (n − 1) standard deviation."""
    if len(values) < 2:
        raise StatsError(f"need at least 2 values, got {len(values)}")
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1))


COMPARISON_COLUMNS = ("m_measure", "max_m", "jsd", "overlap")


def summarize(rows: Sequence[ComparisonRow]) -> Dict[str, Optional[Tuple[float, float]]]:
    """Per-column (mean, sample std) over defined cells of comparison rows."""
    out: Dict[str, Optional[Tuple[float, float]]] = {}
    for column in COMPARISON_COLUMNS:
        values = [getattr(row, column) for row in rows
                  if getattr(row, column) is not None]
        out[column] = mean_std(values) if len(values) >= 2 else None
    return out
