"""Divisiveness measures, rank-variance, and the maximally divided split.

The pairwise measure is the absolute score gap of an issue between a
sub-population and its complement; the aggregate measure averages that gap
over the m - 1 canonical sub-populations N_{a>b}, each weighted by a
size-sensitive alpha-factor. With the default normalizer ell = 4 the
alpha-factor peaks at 1 on an even split and the aggregate stays in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Issue, Profile, SubPopulation
from .scoring import ScoredRanking, ScoringRule, profile_scores

__all__ = [
    "DivisivenessParams",
    "SplitResult",
    "alpha_factor",
    "div_pair",
    "divisiveness",
    "divisiveness_scores",
    "divisiveness_ranking",
    "rank_variance",
    "rank_variances",
    "max_divided_subpopulation",
]

_PROFILE_RULES = (ScoringRule.BORDA, ScoringRule.COPELAND)


@dataclass(frozen=True)
class DivisivenessParams:
    """Parameters of the aggregate measure.

    alpha = 0 ignores sub-population sizes entirely; alpha = 1 weighs each
    disagreement by how evenly the pair splits the population.
    """

    alpha: float = 0.0
    ell: float = 4.0
    rule: ScoringRule = ScoringRule.BORDA

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.ell <= 0:
            raise ValueError(f"ell must be positive, got {self.ell}")
        if self.rule not in _PROFILE_RULES:
            raise ValueError("divisiveness over complete profiles uses Borda or Copeland")


@dataclass(frozen=True)
class SplitResult:
    """A sub-population together with the score gap it induces on an issue."""

    subpopulation: SubPopulation
    value: float
    issue: Issue


def _issue_id(issue: Issue | int) -> int:
    return issue.id if isinstance(issue, Issue) else int(issue)


def div_pair(
    a: Issue | int,
    x: SubPopulation,
    p: Profile,
    rule: ScoringRule = ScoringRule.BORDA,
) -> float:
    """Absolute score gap of ``a`` between ``x`` and its complement.

    Zero when ``x`` is empty or the whole population: a lone camp has
    nothing to disagree with.
    """
    ai = _issue_id(a)
    if x.universe != p.n:
        raise ValueError(f"sub-population universe {x.universe} != profile size {p.n}")
    if rule not in _PROFILE_RULES:
        raise ValueError("div_pair uses Borda or Copeland")
    if x.is_empty() or x.is_full():
        return 0.0
    inside = profile_scores(p.restrict(x), rule)[ai]
    outside = profile_scores(p.restrict(x.complement()), rule)[ai]
    return float(abs(inside - outside))


def alpha_factor(
    a: Issue | int,
    b: Issue | int,
    p: Profile,
    ell: float = 4.0,
    alpha: float = 1.0,
) -> float:
    """Size weight of the (a, b) summand: (ell * #N_{a>b} * #N_{b>a} / n^2)^alpha."""
    ai, bi = _issue_id(a), _issue_id(b)
    if ai == bi:
        raise ValueError("alpha_factor requires two distinct issues")
    k = p.supporters(ai, bi).size
    n = p.n
    return float((ell * k * (n - k) / (n * n)) ** alpha)


def divisiveness(
    a: Issue | int,
    p: Profile,
    params: DivisivenessParams | None = None,
) -> float:
    """Aggregate divisiveness of ``a``: weighted mean gap over the m - 1
    canonical sub-populations N_{a>b}.

    A pair whose canonical sub-population is empty or the whole population
    contributes 0 for every alpha (the gap boundary and the vanishing
    alpha-factor agree there).
    """
    params = params or DivisivenessParams()
    ai = _issue_id(a)
    if p.m < 2:
        raise ValueError("divisiveness needs at least two issues")
    if p.is_empty():
        raise ValueError("divisiveness over an empty profile is undefined")
    total = 0.0
    n = p.n
    for b in range(p.m):
        if b == ai:
            continue
        x = p.supporters(ai, b)
        if x.is_empty() or x.is_full():
            continue
        factor = (params.ell * x.size * (n - x.size) / (n * n)) ** params.alpha
        total += factor * div_pair(ai, x, p, params.rule)
    return total / (p.m - 1)


def divisiveness_scores(p: Profile, params: DivisivenessParams | None = None) -> np.ndarray:
    """Divisiveness of every issue at once (vectorized).

    Agrees with per-issue :func:`divisiveness` to float round-off; used by
    rankings, injection, and the experiment runners.
    """
    params = params or DivisivenessParams()
    if p.m < 2:
        raise ValueError("divisiveness needs at least two issues")
    if p.is_empty():
        raise ValueError("divisiveness over an empty profile is undefined")
    ranks = p.rank_matrix
    return _divisiveness_from_ranks(ranks, params.alpha, params.ell, params.rule)


def _divisiveness_from_ranks(
    ranks: np.ndarray, alpha: float, ell: float, rule: ScoringRule
) -> np.ndarray:
    n, m = ranks.shape
    pref = ranks[:, :, None] < ranks[:, None, :]  # pref[i, a, b]: agent i ranks a above b
    pref_int = pref.astype(np.int64)
    cnt = pref_int.sum(axis=0)  # cnt[a, b] = #N_{a>b}
    valid = (cnt > 0) & (cnt < n)
    np.fill_diagonal(valid, False)

    if rule is ScoringRule.BORDA:
        # Integer point sums keep rank-unanimous issues at exactly zero.
        points = m - ranks  # (n, m) ints in 0..m-1
        inside_sum = np.einsum("ia,iab->ab", points, pref_int)
        totals = points.sum(axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            inside = inside_sum / cnt
            outside = (totals[:, None] - inside_sum) / (n - cnt)
        gap = np.where(valid, np.abs(inside - outside) / (m - 1), 0.0)
    else:
        # wins_in[a, b, c] = #{i in N_{a>b} : i ranks a above c}
        wins_in = np.einsum("iab,iac->abc", pref_int, pref_int)
        size_in = cnt[:, :, None]
        beats_in = wins_in > (size_in - wins_in)
        cop_in = beats_in.sum(axis=2) / (m - 1)
        wins_out = cnt[:, None, :] - wins_in
        size_out = (n - cnt)[:, :, None]
        beats_out = wins_out > (size_out - wins_out)
        cop_out = beats_out.sum(axis=2) / (m - 1)
        gap = np.where(valid, np.abs(cop_in - cop_out), 0.0)

    factors = np.ones_like(gap)
    if alpha != 0.0:
        with np.errstate(invalid="ignore"):
            factors = np.where(valid, (ell * cnt * (n - cnt) / (n * n)) ** alpha, 0.0)
    return (factors * gap).sum(axis=1) / (m - 1)


def divisiveness_ranking(p: Profile, params: DivisivenessParams | None = None) -> ScoredRanking:
    """All issues ordered by divisiveness, ties broken by ascending id."""
    return ScoredRanking.from_scores(p.issues, divisiveness_scores(p, params))


def rank_variances(p: Profile) -> np.ndarray:
    """Population variance (divide by n) of every issue's rank position."""
    if p.is_empty():
        raise ValueError("rank variance over an empty profile is undefined")
    ranks = p.rank_matrix.astype(float)
    return ranks.var(axis=0)


def rank_variance(a: Issue | int, p: Profile) -> float:
    """Population variance of ``a``'s rank across agents."""
    return float(rank_variances(p)[_issue_id(a)])


def max_divided_subpopulation(
    a: Issue | int,
    p: Profile,
    rule: ScoringRule = ScoringRule.BORDA,
) -> SplitResult:
    """The sub-population maximising the Borda gap on ``a``.

    Sorting agents so that worse rankers of ``a`` come first, some prefix
    {1..k} attains the global maximum over all nonempty proper subsets, so
    only n - 1 candidate splits need checking. Among equal-value prefixes
    the smallest k wins. Only Borda is supported; the Copeland analogue has
    no known efficient algorithm.
    """
    ai = _issue_id(a)
    if rule is not ScoringRule.BORDA:
        raise ValueError("max_divided_subpopulation supports only the Borda rule")
    n = p.n
    if n < 2:
        raise ValueError("need at least two agents to split")
    ranks = [int(r) for r in p.rank_matrix[:, ai]]
    order = sorted(range(n), key=lambda i: (-ranks[i], i))
    # Exact rational arithmetic so split selection is immune to round-off;
    # unnormalized sums of (m - rank) suffice, the 1/(m-1) scale is common.
    prefix = 0
    total = sum(p.m - r for r in ranks)
    best_k, best_value = 1, Fraction(-1)
    for k in range(1, n):
        prefix += p.m - ranks[order[k - 1]]
        value = abs(Fraction(prefix, k) - Fraction(total - prefix, n - k))
        if value > best_value:
            best_k, best_value = k, value
    members = frozenset(order[i] + 1 for i in range(best_k))
    sub = SubPopulation(members, n)
    return SplitResult(sub, float(best_value / (p.m - 1)), p.issues[ai])
