"""Rank correlation and replicate aggregation for the experiment harness."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "CorrelationReport",
    "UndefinedTauError",
    "kendall_tau",
    "aggregate_runs",
]


class UndefinedTauError(ValueError):
    """Tau is undefined when one side contributes no untied pairs."""


@dataclass(frozen=True)
class CorrelationReport:
    """Tie-corrected Kendall correlation with its underlying pair counts.

    ``ties_x`` counts pairs tied in x only, ``ties_y`` pairs tied in y only;
    pairs tied in both vectors enter neither count.
    """

    tau: float
    pairs_concordant: int
    pairs_discordant: int
    ties_x: int
    ties_y: int


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> CorrelationReport:
    """Tau-b over paired score vectors.

    On tie-free inputs this equals the classic
    (concordant - discordant) / (k*(k-1)/2). A vector with all entries
    equal leaves a zero tie-correction denominator and raises
    :class:`UndefinedTauError`.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    k = len(x)
    if k < 2:
        raise ValueError("need at least two paired observations")
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    concordant = discordant = ties_x = ties_y = 0
    for i in range(k):
        for j in range(i + 1, k):
            dx = (x[i] > x[j]) - (x[i] < x[j])
            dy = (y[i] > y[j]) - (y[i] < y[j])
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif dx == dy:
                concordant += 1
            else:
                discordant += 1
    untied = concordant + discordant
    denom = math.sqrt((untied + ties_x) * (untied + ties_y))
    if denom == 0:
        raise UndefinedTauError("tau undefined: a vector is fully tied")
    tau = (concordant - discordant) / denom
    return CorrelationReport(tau, concordant, discordant, ties_x, ties_y)


def aggregate_runs(values: Sequence[float], stat: str = "mean"):
    """Summarize replicate values; quantiles are reported at 10/50/90."""
    if len(values) == 0:
        raise ValueError("cannot aggregate an empty list")
    vals = [float(v) for v in values]
    if stat == "mean":
        return statistics.fmean(vals)
    if stat == "median":
        return statistics.median(vals)
    if stat == "quantiles":
        ordered = sorted(vals)
        return {f"p{q}": _quantile(ordered, q / 100) for q in (10, 50, 90)}
    raise ValueError(f"unknown statistic {stat!r}")


def _quantile(ordered: list[float], q: float) -> float:
    if len(ordered) == 1:
        return ordered[0]
    pos = q * (len(ordered) - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, len(ordered) - 1)
    frac = pos - lo
    return ordered[lo] * (1 - frac) + ordered[hi] * frac
