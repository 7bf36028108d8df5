"""Issues, strict rankings, weighted profiles, and SOC file ingestion.

All types are immutable after construction and safe to share across
concurrent workers. Agent indices are 1-based and refer to the expansion
of weighted entries in storage order, so sub-populations are reproducible
across runs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, TextIO

import numpy as np

__all__ = [
    "Issue",
    "Ranking",
    "Profile",
    "SubPopulation",
    "SocParseError",
    "parse_profile",
    "serialize_profile",
    "load_profile",
    "dump_profile",
]


class SocParseError(ValueError):
    """Raised on malformed SOC input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Issue:
    """An alternative being ranked. Ids are dense 0..m-1 within a profile."""

    id: int
    label: str = ""

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"issue id must be non-negative, got {self.id}")
        if not self.label:
            object.__setattr__(self, "label", str(self.id))


def default_issues(m: int) -> tuple[Issue, ...]:
    """Issues 0..m-1 labelled a, b, c, ... (falling back to i<k> past 'z')."""
    labels = [chr(ord("a") + i) if i < 26 else f"i{i}" for i in range(m)]
    return tuple(Issue(i, lab) for i, lab in enumerate(labels))


@dataclass(frozen=True)
class Ranking:
    """A strict total order over issue ids, most-preferred first."""

    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        m = len(self.order)
        if m == 0:
            raise ValueError("ranking must contain at least one issue")
        if sorted(self.order) != list(range(m)):
            raise ValueError(f"order {self.order} is not a permutation of 0..{m - 1}")

    @cached_property
    def _positions(self) -> tuple[int, ...]:
        pos = [0] * len(self.order)
        for p, a in enumerate(self.order, start=1):
            pos[a] = p
        return tuple(pos)

    def __len__(self) -> int:
        return len(self.order)

    def rank_of(self, issue: Issue | int) -> int:
        """1-based position of an issue; 1 is most preferred."""
        a = issue.id if isinstance(issue, Issue) else issue
        if not 0 <= a < len(self.order):
            raise ValueError(f"unknown issue id {a} for a {len(self.order)}-issue ranking")
        return self._positions[a]

    def prefers(self, a: Issue | int, b: Issue | int) -> bool:
        return self.rank_of(a) < self.rank_of(b)


def rank_of(ranking: Ranking, issue: Issue | int) -> int:
    """1-based position of ``issue`` in ``ranking``."""
    return ranking.rank_of(issue)


@dataclass(frozen=True)
class SubPopulation:
    """A subset of agent indices out of {1..universe}."""

    members: frozenset[int]
    universe: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if self.universe < 0:
            raise ValueError("universe must be non-negative")
        bad = [i for i in self.members if not 1 <= i <= self.universe]
        if bad:
            raise ValueError(f"agent indices {sorted(bad)} outside 1..{self.universe}")

    @property
    def size(self) -> int:
        return len(self.members)

    def complement(self) -> "SubPopulation":
        rest = frozenset(range(1, self.universe + 1)) - self.members
        return SubPopulation(rest, self.universe)

    def is_empty(self) -> bool:
        return not self.members

    def is_full(self) -> bool:
        return len(self.members) == self.universe


@dataclass(frozen=True)
class Profile:
    """A multiset of weighted strict rankings over a shared issue set.

    ``entries`` are (weight, ranking) pairs; expanding weights in storage
    order yields agents 1..n. A profile with no entries is the empty-profile
    marker produced by restricting to the empty sub-population.
    """

    issues: tuple[Issue, ...]
    entries: tuple[tuple[int, Ranking], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "issues", tuple(self.issues))
        object.__setattr__(self, "entries", tuple((int(w), r) for w, r in self.entries))
        m = len(self.issues)
        ids = sorted(a.id for a in self.issues)
        if ids != list(range(m)):
            raise ValueError("issue ids must be dense 0..m-1 and unique")
        if ids != [a.id for a in self.issues]:
            raise ValueError("issues must be listed in id order")
        for w, r in self.entries:
            if w < 1:
                raise ValueError(f"entry weight must be >= 1, got {w}")
            if len(r) != m:
                raise ValueError(f"ranking over {len(r)} issues in a {m}-issue profile")

    @property
    def m(self) -> int:
        return len(self.issues)

    @property
    def n(self) -> int:
        return sum(w for w, _ in self.entries)

    def is_empty(self) -> bool:
        return not self.entries

    def issue(self, ref: int | str) -> Issue:
        """Resolve an issue by id or label."""
        if isinstance(ref, int) or (isinstance(ref, str) and ref.isdigit()):
            i = int(ref)
            if 0 <= i < self.m:
                return self.issues[i]
        for a in self.issues:
            if a.label == ref:
                return a
        raise ValueError(f"unknown issue {ref!r}")

    def iter_rankings(self) -> Iterator[Ranking]:
        """Rankings of agents 1..n in expansion order."""
        for w, r in self.entries:
            for _ in range(w):
                yield r

    @cached_property
    def rank_matrix(self) -> np.ndarray:
        """(n, m) int array; row i-1 holds agent i's 1-based issue ranks."""
        rows = [r._positions for r in self.iter_rankings()]
        mat = np.array(rows, dtype=np.int64).reshape(len(rows), self.m)
        mat.setflags(write=False)
        return mat

    def supporters(self, a: Issue | int, b: Issue | int) -> SubPopulation:
        """Agents who strictly prefer ``a`` to ``b``."""
        ai = a.id if isinstance(a, Issue) else a
        bi = b.id if isinstance(b, Issue) else b
        if ai == bi:
            raise ValueError("supporters requires two distinct issues")
        for x in (ai, bi):
            if not 0 <= x < self.m:
                raise ValueError(f"unknown issue id {x}")
        members = {
            i for i, r in enumerate(self.iter_rankings(), start=1) if r.prefers(ai, bi)
        }
        return SubPopulation(frozenset(members), self.n)

    def restrict(self, x: SubPopulation) -> "Profile":
        """The sub-profile of the agents in ``x``, preserving agent order."""
        if x.universe != self.n:
            raise ValueError(f"sub-population universe {x.universe} != profile size {self.n}")
        keep = x.members
        entries = [
            (1, r)
            for i, r in enumerate(self.iter_rankings(), start=1)
            if i in keep
        ]
        return Profile(self.issues, tuple(entries))


def supporters(p: Profile, a: Issue | int, b: Issue | int) -> SubPopulation:
    return p.supporters(a, b)


def restrict(p: Profile, x: SubPopulation) -> Profile:
    return p.restrict(x)


# ---------------------------------------------------------------------------
# SOC format
#
# line 1:          m
# next m lines:    id,label
# one line:        n,n,distinct_count
# remaining lines: weight: id,id,...,id
#
# Declared issue ids may be arbitrary unique integers (e.g. 1-based); they
# are remapped to dense 0..m-1 in declaration order.
# ---------------------------------------------------------------------------


def parse_profile(source: str | TextIO) -> Profile:
    """Parse a strict-order-complete profile from SOC text."""
    if isinstance(source, str):
        source = io.StringIO(source)
    lines = source.read().split("\n")

    def fail(msg: str, line_no: int) -> SocParseError:
        return SocParseError(msg, line_no)

    idx = 0

    def next_line() -> tuple[str, int]:
        nonlocal idx
        while idx < len(lines):
            raw = lines[idx]
            idx += 1
            text = raw.strip()
            if text and not text.startswith("#"):
                return text, idx
        raise fail("unexpected end of input", len(lines))

    try:
        text, ln = next_line()
    except SocParseError:
        raise SocParseError("empty input", 1) from None
    try:
        m = int(text)
    except ValueError:
        raise fail(f"expected issue count, got {text!r}", ln) from None
    if m < 1:
        raise fail(f"issue count must be >= 1, got {m}", ln)

    declared: list[tuple[int, str]] = []
    for _ in range(m):
        text, ln = next_line()
        head, _, label = text.partition(",")
        try:
            file_id = int(head)
        except ValueError:
            raise fail(f"expected 'id,label' issue line, got {text!r}", ln) from None
        declared.append((file_id, label.strip()))
    if len({fid for fid, _ in declared}) != m:
        raise fail("duplicate issue ids in header", ln)
    remap = {fid: i for i, (fid, _) in enumerate(declared)}
    issues = tuple(Issue(i, label or str(fid)) for i, (fid, label) in enumerate(declared))

    text, ln = next_line()
    parts = text.split(",")
    if len(parts) != 3:
        raise fail(f"expected 'n,n,distinct_count' line, got {text!r}", ln)
    try:
        n_decl, n_sum, distinct = (int(s) for s in parts)
    except ValueError:
        raise fail(f"non-integer in count line {text!r}", ln) from None
    if n_decl != n_sum:
        raise fail(f"count line declares n={n_decl} but sum={n_sum}", ln)

    entries: list[tuple[int, Ranking]] = []
    total = 0
    for _ in range(distinct):
        text, ln = next_line()
        head, sep, body = text.partition(":")
        if not sep:
            raise fail(f"expected 'weight: id,...' ranking line, got {text!r}", ln)
        try:
            weight = int(head)
        except ValueError:
            raise fail(f"non-integer weight {head!r}", ln) from None
        if weight < 1:
            raise fail(f"weight must be >= 1, got {weight}", ln)
        try:
            file_ids = [int(s) for s in body.split(",")]
        except ValueError:
            raise fail(f"non-integer issue id in ranking {body!r}", ln) from None
        unknown = [f for f in file_ids if f not in remap]
        if unknown:
            raise fail(f"unknown issue id {unknown[0]}", ln)
        order = tuple(remap[f] for f in file_ids)
        if sorted(order) != list(range(m)):
            raise fail(f"ranking {body.strip()!r} is not a permutation of the {m} issues", ln)
        entries.append((weight, Ranking(order)))
        total += weight

    if total != n_decl:
        raise SocParseError(f"weights sum to {total}, header declares n={n_decl}")
    if total < 1:
        raise SocParseError("profile body is empty")
    return Profile(issues, tuple(entries))


def serialize_profile(p: Profile) -> str:
    """SOC text for a profile; preserves entry order (agent indexing)."""
    out = [str(p.m)]
    for a in p.issues:
        out.append(f"{a.id},{a.label}")
    out.append(f"{p.n},{p.n},{len(p.entries)}")
    for w, r in p.entries:
        out.append(f"{w}: " + ",".join(str(i) for i in r.order))
    return "\n".join(out) + "\n"


def load_profile(path) -> Profile:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh)


def dump_profile(p: Profile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_profile(p))
