"""Normalized issue-scoring functions and the agreement ranking they induce.

All scores live in [0, 1]. Borda and Copeland apply to complete profiles;
the win rate applies to pairwise-comparison data (and coincides with Borda
when every comparison is present).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .core import Issue, Profile

if TYPE_CHECKING:
    from .control import PairwiseProfile

__all__ = [
    "ScoringRule",
    "ScoredRanking",
    "UndefinedScoreError",
    "borda",
    "copeland",
    "win_rate",
    "borda_scores",
    "copeland_scores",
    "win_rate_scores",
    "agreement_ranking",
]


class UndefinedScoreError(ValueError):
    """Scoring an issue over an empty profile is undefined."""


class ScoringRule(enum.Enum):
    BORDA = "borda"
    COPELAND = "copeland"
    WIN_RATE = "winrate"

    @classmethod
    def from_name(cls, name: str) -> "ScoringRule":
        key = name.strip().lower().replace("-", "").replace("_", "")
        for rule in cls:
            if rule.value == key:
                return rule
        raise ValueError(f"unknown scoring rule {name!r}")


@dataclass(frozen=True)
class ScoredRanking:
    """Issues ordered by score (descending), ties broken by ascending id."""

    items: tuple[tuple[Issue, float], ...]

    @classmethod
    def from_scores(cls, issues: Sequence[Issue], scores: Sequence[float]) -> "ScoredRanking":
        if len(issues) != len(scores):
            raise ValueError("one score per issue required")
        pairs = sorted(zip(issues, scores), key=lambda it: (-it[1], it[0].id))
        return cls(tuple((a, float(s)) for a, s in pairs))

    @property
    def issue_ids(self) -> tuple[int, ...]:
        return tuple(a.id for a, _ in self.items)

    @property
    def top(self) -> Issue:
        return self.items[0][0]

    def score_of(self, issue: Issue | int) -> float:
        a = issue.id if isinstance(issue, Issue) else issue
        for iss, s in self.items:
            if iss.id == a:
                return s
        raise ValueError(f"unknown issue id {a}")

    def position_of(self, issue: Issue | int) -> int:
        """1-based position of an issue in the tie-broken order."""
        a = issue.id if isinstance(issue, Issue) else issue
        for pos, (iss, _) in enumerate(self.items, start=1):
            if iss.id == a:
                return pos
        raise ValueError(f"unknown issue id {a}")


def _issue_id(issue: Issue | int) -> int:
    return issue.id if isinstance(issue, Issue) else int(issue)


def _check_scorable(p: Profile, a: int) -> None:
    if p.is_empty():
        raise UndefinedScoreError("score over an empty profile is undefined")
    if not 0 <= a < p.m:
        raise ValueError(f"unknown issue id {a}")


def borda_scores(p: Profile) -> np.ndarray:
    """Normalized Borda score of every issue: mean of (m - rank)/(m - 1)."""
    if p.is_empty():
        raise UndefinedScoreError("score over an empty profile is undefined")
    if p.m < 2:
        raise ValueError("Borda needs at least two issues")
    ranks = p.rank_matrix
    return (p.m - ranks).mean(axis=0) / (p.m - 1)


def borda(a: Issue | int, p: Profile) -> float:
    """Fraction of pairwise contests issue ``a`` wins, averaged over agents."""
    ai = _issue_id(a)
    _check_scorable(p, ai)
    return float(borda_scores(p)[ai])


def copeland_scores(p: Profile) -> np.ndarray:
    """Normalized Copeland scores; only strict majority contests count."""
    if p.is_empty():
        raise UndefinedScoreError("score over an empty profile is undefined")
    if p.m < 2:
        raise ValueError("Copeland needs at least two issues")
    ranks = p.rank_matrix
    n = ranks.shape[0]
    pref_counts = (ranks[:, :, None] < ranks[:, None, :]).sum(axis=0)
    wins = pref_counts > (n - pref_counts)
    np.fill_diagonal(wins, False)
    return wins.sum(axis=1) / (p.m - 1)


def copeland(a: Issue | int, p: Profile) -> float:
    """Fraction of the other issues that ``a`` beats by strict majority."""
    ai = _issue_id(a)
    _check_scorable(p, ai)
    return float(copeland_scores(p)[ai])


def win_rate_scores(q: "PairwiseProfile") -> np.ndarray:
    """Win rate of every issue over the held pairwise comparisons.

    Each pair (a, b) contributes the fraction of comparers preferring a;
    a pair nobody compared contributes 0 while the denominator stays m - 1.
    """
    if q.n == 0:
        raise UndefinedScoreError("score over an empty profile is undefined")
    holds = q.holds
    m = q.m
    if m < 2:
        raise ValueError("win rate needs at least two issues")
    wins = holds.sum(axis=0).astype(float)
    compared = wins + wins.T
    with np.errstate(invalid="ignore", divide="ignore"):
        share = np.where(compared > 0, wins / np.where(compared > 0, compared, 1), 0.0)
    np.fill_diagonal(share, 0.0)
    return share.sum(axis=1) / (m - 1)


def win_rate(a: Issue | int, q: "PairwiseProfile") -> float:
    """Per-pair share of comparers preferring ``a``, averaged over m - 1 pairs."""
    ai = _issue_id(a)
    if not 0 <= ai < q.m:
        raise ValueError(f"unknown issue id {ai}")
    return float(win_rate_scores(q)[ai])


_SCORE_VECTORS = {
    ScoringRule.BORDA: borda_scores,
    ScoringRule.COPELAND: copeland_scores,
}


def profile_scores(p: Profile, rule: ScoringRule) -> np.ndarray:
    """All issues scored under ``rule``; WIN_RATE reduces to Borda here."""
    if rule is ScoringRule.WIN_RATE:
        return borda_scores(p)
    return _SCORE_VECTORS[rule](p)


def agreement_ranking(p: Profile, rule: ScoringRule) -> ScoredRanking:
    """The collective ranking of issues induced by ``rule`` on ``p``."""
    return ScoredRanking.from_scores(p.issues, profile_scores(p, rule))
