"""Synthetic preference cultures: impartial culture and the Polya urn.

The urn starts with one copy of every possible ranking and returns
``extra`` additional copies of each drawn ranking, so later agents tend to
repeat earlier ones. It is sampled lazily (fresh-uniform draw vs. resample
of a past draw) so the m! rankings are never materialized; m above 18 is
allowed but warned about, matching where explicit enumeration would stop
being feasible anyway.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import Profile, Ranking, default_issues

__all__ = ["Culture", "generate_ic", "generate_urn"]

ISSUE_GUARD = 18


@dataclass(frozen=True)
class Culture:
    """A named profile-generation recipe for the experiment runners."""

    kind: str  # "ic" or "urn"
    m: int
    n: int
    correlation: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("ic", "urn"):
            raise ValueError(f"unknown culture kind {self.kind!r}")
        if self.kind == "ic" and self.correlation:
            raise ValueError("impartial culture takes no correlation")
        if not 0.0 <= self.correlation < 1.0:
            raise ValueError(f"correlation must be in [0, 1), got {self.correlation}")

    @property
    def label(self) -> str:
        if self.kind == "ic":
            return "IC"
        return f"UM{int(round(self.correlation * 100))}"

    def generate(self, seed: int | np.random.Generator | None = None) -> Profile:
        rng_seed = self.seed if seed is None else seed
        if self.kind == "ic":
            return generate_ic(self.m, self.n, rng_seed)
        return generate_urn(self.m, self.n, self.correlation, rng_seed)


def _as_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _profile_from_orders(m: int, orders: list[tuple[int, ...]]) -> Profile:
    return Profile(default_issues(m), tuple((1, Ranking(o)) for o in orders))


def _check_size(m: int, n: int) -> None:
    if m < 2:
        raise ValueError(f"need at least two issues, got {m}")
    if n < 1:
        raise ValueError(f"need at least one agent, got {n}")
    if m > ISSUE_GUARD:
        warnings.warn(
            f"generating rankings over {m} issues; above {ISSUE_GUARD} the ranking "
            "space is astronomically large and runs get slow",
            stacklevel=3,
        )


def generate_ic(m: int, n: int, seed: int | np.random.Generator | None = None) -> Profile:
    """n agents drawn independently and uniformly over all m! rankings."""
    _check_size(m, n)
    rng = _as_rng(seed)
    orders = [tuple(int(x) for x in rng.permutation(m)) for _ in range(n)]
    return _profile_from_orders(m, orders)


def urn_reinforcement(m: int, correlation: float) -> int:
    """Copies returned to the urn per draw: round(m! * corr / (1 - corr)).

    Correlation 0.5 returns m! copies and 0.1 returns m!/9, the two anchor
    settings; correlation 0 reduces to the impartial culture.
    """
    if not 0.0 <= correlation < 1.0:
        raise ValueError(f"correlation must be in [0, 1), got {correlation}")
    return round(math.factorial(m) * correlation / (1.0 - correlation))


def generate_urn(
    m: int,
    n: int,
    correlation: float,
    seed: int | np.random.Generator | None = None,
) -> Profile:
    """n agents drawn from a Polya urn seeded with every ranking once.

    Lazy equivalent of the explicit urn: draw t+1 is fresh-uniform with
    probability m! / (m! + t * extra), otherwise it repeats one of the t
    previous draws chosen uniformly (each carries the same extra weight).
    """
    _check_size(m, n)
    rng = _as_rng(seed)
    extra = urn_reinforcement(m, correlation)
    base = math.factorial(m)
    orders: list[tuple[int, ...]] = []
    for t in range(n):
        if extra == 0 or t == 0 or rng.random() < base / (base + t * extra):
            orders.append(tuple(int(x) for x in rng.permutation(m)))
        else:
            orders.append(orders[int(rng.integers(t))])
    return _profile_from_orders(m, orders)
