"""Divisiveness under attack: comparison deletion and ranking injection.

Deletion turns a complete profile into per-agent sets of pairwise
comparisons sampled without replacement across the whole profile; the
divisiveness of the result is measured with the win rate (or Copeland over
available comparisons). Injection repeatedly adds target-first / target-last
variants of the agreement ranking until the target tops the divisiveness
ranking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Issue, Profile, Ranking, SubPopulation
from .divisiveness import DivisivenessParams, _divisiveness_from_ranks
from .scoring import ScoredRanking, ScoringRule, agreement_ranking

__all__ = [
    "PairwiseProfile",
    "InjectOutcome",
    "remove_comparisons",
    "incomplete_divisiveness",
    "incomplete_divisiveness_scores",
    "build_inject_rankings",
    "inject",
]


@dataclass(frozen=True, eq=False)
class PairwiseProfile:
    """Per-agent sets of ordered comparisons derived from strict rankings.

    ``holds[i, a, b]`` is True when agent i+1 kept the comparison a > b.
    No agent holds both orientations of a pair, and each agent's pairs come
    from a strict order, so they are acyclic by construction.
    """

    issues: tuple[Issue, ...]
    holds: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "issues", tuple(self.issues))
        holds = np.asarray(self.holds, dtype=bool)
        m = len(self.issues)
        if holds.ndim != 3 or holds.shape[1:] != (m, m):
            raise ValueError(f"holds must have shape (n, {m}, {m})")
        if np.any(holds & holds.transpose(0, 2, 1)):
            raise ValueError("an agent holds both orientations of a pair")
        holds = holds.copy()
        holds.setflags(write=False)
        object.__setattr__(self, "holds", holds)

    @property
    def m(self) -> int:
        return len(self.issues)

    @property
    def n(self) -> int:
        return int(self.holds.shape[0])

    @property
    def comparison_count(self) -> int:
        return int(self.holds.sum())

    def comparers(self, a: Issue | int, b: Issue | int) -> SubPopulation:
        """Agents holding the comparison a > b."""
        ai = a.id if isinstance(a, Issue) else a
        bi = b.id if isinstance(b, Issue) else b
        members = frozenset(np.flatnonzero(self.holds[:, ai, bi]) + 1)
        return SubPopulation(members, self.n)

    @classmethod
    def from_profile(cls, p: Profile) -> "PairwiseProfile":
        """All comparisons of a complete profile."""
        ranks = p.rank_matrix
        return cls(p.issues, ranks[:, :, None] < ranks[:, None, :])


def remove_comparisons(
    p: Profile,
    retain_fraction: float,
    seed: int | np.random.Generator | None = None,
) -> PairwiseProfile:
    """Keep a uniform random subset of all n*m*(m-1)/2 comparisons.

    Sampling is global across the profile, not per agent, and keeps exactly
    round(retain_fraction * total) comparisons. retain_fraction = 1 keeps
    everything; the same seed reproduces the same deletion.
    """
    if not 0.0 < retain_fraction <= 1.0:
        raise ValueError(f"retain_fraction must be in (0, 1], got {retain_fraction}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    full = PairwiseProfile.from_profile(p).holds
    n, m, _ = full.shape
    upper = np.triu_indices(m, k=1)
    total = n * len(upper[0])
    keep_count = int(round(retain_fraction * total))
    chosen = rng.choice(total, size=keep_count, replace=False)
    keep_slots = np.zeros((n, len(upper[0])), dtype=bool)
    keep_slots[chosen // len(upper[0]), chosen % len(upper[0])] = True
    mask = np.zeros_like(full)
    mask[:, upper[0], upper[1]] = keep_slots
    mask |= mask.transpose(0, 2, 1)
    return PairwiseProfile(p.issues, full & mask)


_INCOMPLETE_RULES = (ScoringRule.WIN_RATE, ScoringRule.COPELAND)


def incomplete_divisiveness_scores(
    q: PairwiseProfile, rule: ScoringRule = ScoringRule.WIN_RATE
) -> np.ndarray:
    """Size-blind divisiveness of every issue over held comparisons.

    For each pair (a, b) the two camps are the holders of a > b and of
    b > a; agents holding neither orientation belong to neither camp. Camps
    are scored by win rate (or Copeland with strict-majority wins among
    comparers); a pair with an empty camp contributes 0.
    """
    if rule not in _INCOMPLETE_RULES:
        raise ValueError("incomplete divisiveness uses the win rate or Copeland")
    if q.n == 0:
        raise ValueError("divisiveness over an empty profile is undefined")
    holds = q.holds.astype(np.float64)
    n, m, _ = holds.shape
    if m < 2:
        raise ValueError("divisiveness needs at least two issues")
    out = np.zeros(m)
    for a in range(m):
        fwd = holds[:, a, :]  # fwd[i, x]: agent i holds a > x
        rev = np.ascontiguousarray(holds[:, :, a])  # rev[i, x]: agent i holds x > a
        # camp[b] = holders of a > b (columns of fwd); opposing camp: rev
        size_fwd = fwd.sum(axis=0)
        size_rev = rev.sum(axis=0)
        valid = (size_fwd > 0) & (size_rev > 0)
        valid[a] = False
        if not valid.any():
            continue
        if rule is ScoringRule.WIN_RATE:
            compared = fwd + rev  # compared[i, c]: agent i compared (a, c) either way
            wins_f = np.einsum("ib,ic->bc", fwd, fwd)
            comp_f = np.einsum("ib,ic->bc", fwd, compared)
            wins_r = np.einsum("ib,ic->bc", rev, fwd)
            comp_r = np.einsum("ib,ic->bc", rev, compared)
            with np.errstate(invalid="ignore", divide="ignore"):
                share_f = np.where(comp_f > 0, wins_f / np.where(comp_f > 0, comp_f, 1), 0.0)
                share_r = np.where(comp_r > 0, wins_r / np.where(comp_r > 0, comp_r, 1), 0.0)
            share_f[:, a] = 0.0
            share_r[:, a] = 0.0
            score_f = share_f.sum(axis=1) / (m - 1)
            score_r = share_r.sum(axis=1) / (m - 1)
        else:
            for_f = np.einsum("ib,ic->bc", fwd, fwd)
            against_f = np.einsum("ib,ic->bc", fwd, rev)
            for_r = np.einsum("ib,ic->bc", rev, fwd)
            against_r = np.einsum("ib,ic->bc", rev, rev)
            beats_f = for_f > against_f
            beats_r = for_r > against_r
            beats_f[:, a] = False
            beats_r[:, a] = False
            score_f = beats_f.sum(axis=1) / (m - 1)
            score_r = beats_r.sum(axis=1) / (m - 1)
        gaps = np.where(valid, np.abs(score_f - score_r), 0.0)
        out[a] = gaps.sum() / (m - 1)
    return out


def incomplete_divisiveness(
    a: Issue | int,
    q: PairwiseProfile,
    rule: ScoringRule = ScoringRule.WIN_RATE,
) -> float:
    """Divisiveness of one issue over held comparisons (alpha = 0)."""
    ai = a.id if isinstance(a, Issue) else a
    if not 0 <= ai < q.m:
        raise ValueError(f"unknown issue id {ai}")
    return float(incomplete_divisiveness_scores(q, rule)[ai])


def build_inject_rankings(
    p: Profile,
    target: Issue | int,
    rule: ScoringRule = ScoringRule.BORDA,
) -> tuple[Ranking, Ranking]:
    """Target-first and target-last variants of the agreement ranking."""
    ti = target.id if isinstance(target, Issue) else target
    if not 0 <= ti < p.m:
        raise ValueError(f"unknown issue id {ti}")
    consensus = agreement_ranking(p, rule).issue_ids
    rest = tuple(i for i in consensus if i != ti)
    return Ranking((ti,) + rest), Ranking(rest + (ti,))


@dataclass(frozen=True)
class InjectOutcome:
    """Result of an injection run.

    ``trace`` holds the target's (position, divisiveness) after each added
    ranking, starting with the untouched profile, so its length is
    rounds + 1. ``history`` holds the matching full divisiveness vectors.
    """

    rounds: int
    final_profile: Profile
    succeeded: bool
    trace: tuple[tuple[int, float], ...]
    history: tuple[tuple[float, ...], ...]


def inject(
    p: Profile,
    target: Issue | int,
    rule: ScoringRule = ScoringRule.BORDA,
    params: DivisivenessParams | None = None,
    max_rounds: int = 1000,
) -> InjectOutcome:
    """Add alternating target-first / target-last rankings until the target
    is the most divisive issue.

    The agreement ranking is computed once from the original profile and
    frozen; divisiveness (alpha = 0 under ``rule``) is recomputed after
    every single addition, so the reported round count is tight. Exhausting
    ``max_rounds`` reports failure rather than raising.
    """
    params = params or DivisivenessParams(rule=rule)
    if params.alpha != 0.0:
        raise ValueError("injection is defined for alpha = 0")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    ti = target.id if isinstance(target, Issue) else target
    if not 0 <= ti < p.m:
        raise ValueError(f"unknown issue id {ti}")

    odd, even = build_inject_rankings(p, ti, rule)
    rows = list(p.rank_matrix)
    added: list[Ranking] = []
    trace: list[tuple[int, float]] = []
    history: list[tuple[float, ...]] = []

    def record() -> bool:
        scores = _divisiveness_from_ranks(
            np.array(rows, dtype=np.int64), 0.0, params.ell, rule
        )
        ranking = ScoredRanking.from_scores(p.issues, scores)
        trace.append((ranking.position_of(ti), float(scores[ti])))
        history.append(tuple(float(s) for s in scores))
        return ranking.top.id == ti

    done = record()
    while not done and len(added) < max_rounds:
        nxt = odd if len(added) % 2 == 0 else even
        added.append(nxt)
        rows.append(np.array(nxt._positions, dtype=np.int64))
        done = record()

    final = Profile(p.issues, p.entries + tuple((1, r) for r in added))
    return InjectOutcome(
        rounds=len(added),
        final_profile=final,
        succeeded=done,
        trace=tuple(trace),
        history=tuple(history),
    )
