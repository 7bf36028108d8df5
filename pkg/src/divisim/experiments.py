"""Declarative experiment runner: profile sweeps, replicates, aggregation.

Four experiment kinds are supported:

* ``correlation``  - Kendall tau between divisiveness (Borda), divisiveness
  (Copeland), and rank-variance, swept over issue counts.
* ``robustness``   - tau between divisiveness on the complete profile and on
  randomly depleted pairwise comparisons, swept over retention levels.
* ``inject-cost``  - how many injected rankings make a target issue the most
  divisive, per target position and culture.
* ``inject-trace`` - round-by-round divisiveness positions of every issue
  while injection runs against the least divisive issue.

Specs are plain ``key: value`` text files; every replicate derives its rng
stream from (seed, sweep point, replicate index), so reruns are
byte-identical and replicates can run in parallel.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .control import inject, incomplete_divisiveness_scores, remove_comparisons
from .divisiveness import DivisivenessParams, divisiveness_scores, rank_variances
from .generators import Culture
from .scoring import ScoredRanking, ScoringRule
from .stats import UndefinedTauError, kendall_tau

__all__ = [
    "ExperimentSpec",
    "ExperimentResult",
    "parse_experiment_spec",
    "load_experiment_spec",
    "run_experiment",
    "write_csv",
    "write_plot_json",
]

EXPERIMENT_NAMES = ("correlation", "robustness", "inject-cost", "inject-trace")

TARGET_POSITIONS = ("second", "middle", "last")


@dataclass(frozen=True)
class ExperimentSpec:
    """A declarative sweep description."""

    name: str
    cultures: tuple[tuple[str, float], ...] = (("ic", 0.0),)
    m_values: tuple[int, ...] = (8,)
    n_values: tuple[int, ...] = (100,)
    replicates: int = 100
    seed: int = 0
    rules: tuple[ScoringRule, ...] = (ScoringRule.BORDA,)
    alpha: float = 0.0
    ell: float = 4.0
    retain_values: tuple[float, ...] = tuple(x / 10 for x in range(1, 11))
    targets: tuple[str, ...] = TARGET_POSITIONS
    max_rounds: int = 2000

    def __post_init__(self):
        if self.name not in EXPERIMENT_NAMES:
            raise ValueError(f"unknown experiment {self.name!r}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        for vals, what in (
            (self.m_values, "m"),
            (self.n_values, "n"),
            (self.cultures, "culture"),
        ):
            if not vals:
                raise ValueError(f"sweep dimension {what!r} is empty")
        for t in self.targets:
            if t not in TARGET_POSITIONS:
                raise ValueError(f"unknown target position {t!r}")
        for frac in self.retain_values:
            if not 0.0 < frac <= 1.0:
                raise ValueError(f"retention {frac} outside (0, 1]")


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[dict, ...]
    summary: tuple[dict, ...]
    plot: dict


def _parse_culture(token: str) -> tuple[str, float]:
    token = token.strip().lower()
    if token == "ic":
        return ("ic", 0.0)
    if token.startswith("um"):
        return ("urn", int(token[2:]) / 100)
    if token.startswith("urn:"):
        return ("urn", float(token.split(":", 1)[1]))
    raise ValueError(f"unknown culture {token!r}")


def _culture_label(kind: str, correlation: float) -> str:
    return Culture(kind, 2, 1, correlation).label


def parse_experiment_spec(text: str) -> ExperimentSpec:
    """Parse ``key: value`` lines; '#' starts a comment, lists are commas."""
    fields: dict = {}
    for ln, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"spec line {ln}: expected 'key: value', got {raw!r}")
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        if key == "name":
            fields["name"] = value.lower()
        elif key == "culture":
            fields["cultures"] = tuple(_parse_culture(t) for t in value.split(","))
        elif key == "m":
            fields["m_values"] = tuple(int(t) for t in value.split(","))
        elif key == "n":
            fields["n_values"] = tuple(int(t) for t in value.split(","))
        elif key == "replicates":
            fields["replicates"] = int(value)
        elif key == "seed":
            fields["seed"] = int(value)
        elif key == "rule":
            fields["rules"] = tuple(ScoringRule.from_name(t) for t in value.split(","))
        elif key == "alpha":
            fields["alpha"] = float(value)
        elif key == "ell":
            fields["ell"] = float(value)
        elif key == "retain":
            vals = [float(t) for t in value.split(",")]
            fields["retain_values"] = tuple(v / 100 if v > 1 else v for v in vals)
        elif key == "targets":
            fields["targets"] = tuple(t.strip() for t in value.split(","))
        elif key == "max_rounds":
            fields["max_rounds"] = int(value)
        else:
            raise ValueError(f"spec line {ln}: unknown key {key!r}")
    if "name" not in fields:
        raise ValueError("experiment spec must set 'name'")
    return ExperimentSpec(**fields)


def load_experiment_spec(path) -> ExperimentSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_experiment_spec(fh.read())


def _replicate_rng(spec: ExperimentSpec, *point: int) -> np.random.Generator:
    return np.random.default_rng([spec.seed, *point])


def tau_between(x: Sequence[float], y: Sequence[float]) -> float:
    """Tau with the degenerate cases the sweeps can produce.

    Two fully tied vectors induce the same trivial ranking (tau 1); a single
    fully tied vector carries no order information (nan, dropped from
    means).
    """
    try:
        return kendall_tau(x, y).tau
    except UndefinedTauError:
        x_tied = len(set(x)) == 1
        y_tied = len(set(y)) == 1
        return 1.0 if x_tied and y_tied else math.nan


# --- per-replicate workers (module-level, picklable for process pools) -----


def _correlation_replicate(args: tuple) -> dict:
    spec, ci, mi, ni, rep = args
    kind, corr = spec.cultures[ci]
    m, n = spec.m_values[mi], spec.n_values[ni]
    rng = _replicate_rng(spec, ci, mi, ni, rep)
    profile = Culture(kind, m, n, corr).generate(rng)
    params = DivisivenessParams(spec.alpha, spec.ell, ScoringRule.BORDA)
    div_b = divisiveness_scores(profile, params)
    div_c = divisiveness_scores(profile, replace(params, rule=ScoringRule.COPELAND))
    var = rank_variances(profile)
    return {
        "culture": _culture_label(kind, corr),
        "m": m,
        "n": n,
        "replicate": rep,
        "tau_borda_copeland": tau_between(div_b, div_c),
        "tau_borda_variance": tau_between(div_b, var),
        "tau_copeland_variance": tau_between(div_c, var),
    }


def _robustness_replicate(args: tuple) -> dict:
    spec, ci, mi, ni, ri, rulei, rep = args
    kind, corr = spec.cultures[ci]
    m, n = spec.m_values[mi], spec.n_values[ni]
    retain = spec.retain_values[ri]
    rule = spec.rules[rulei]
    rng = _replicate_rng(spec, ci, mi, ni, ri, rulei, rep)
    profile = Culture(kind, m, n, corr).generate(rng)
    complete_rule = (
        ScoringRule.BORDA if rule is ScoringRule.WIN_RATE else ScoringRule.COPELAND
    )
    complete = divisiveness_scores(
        profile, DivisivenessParams(0.0, spec.ell, complete_rule)
    )
    depleted = remove_comparisons(profile, retain, rng)
    partial = incomplete_divisiveness_scores(depleted, rule)
    return {
        "culture": _culture_label(kind, corr),
        "m": m,
        "n": n,
        "retain_pct": round(retain * 100, 6),
        "rule": rule.value,
        "replicate": rep,
        "tau": tau_between(complete, partial),
    }


def _target_index(position: str, m: int) -> int:
    if position == "second":
        return 1
    if position == "middle":
        return (m - 1) // 2
    return m - 1


def _inject_replicate(args: tuple) -> tuple[dict, tuple]:
    spec, ci, mi, ni, ti, rulei, rep = args
    kind, corr = spec.cultures[ci]
    m, n = spec.m_values[mi], spec.n_values[ni]
    position = spec.targets[ti]
    rule = spec.rules[rulei]
    rng = _replicate_rng(spec, ci, mi, ni, ti, rulei, rep)
    profile = Culture(kind, m, n, corr).generate(rng)
    initial = ScoredRanking.from_scores(
        profile.issues,
        divisiveness_scores(profile, DivisivenessParams(0.0, spec.ell, rule)),
    )
    target = initial.items[_target_index(position, m)][0]
    outcome = inject(profile, target, rule, max_rounds=spec.max_rounds)
    row = {
        "culture": _culture_label(kind, corr),
        "m": m,
        "n": n,
        "rule": rule.value,
        "target_position": position,
        "replicate": rep,
        "target_issue": target.label,
        "rounds": outcome.rounds,
        "succeeded": outcome.succeeded,
        "added_pct": outcome.rounds / n * 100,
    }
    return row, (initial.issue_ids, outcome.history)


# --- sweep drivers ----------------------------------------------------------


def _map_tasks(worker, tasks: list[tuple], jobs: int, collector: list | None = None) -> list:
    # Results land in `collector` as they complete (in task order), so an
    # interrupted run can still flush what it finished.
    out = collector if collector is not None else []
    if jobs <= 1 or len(tasks) <= 1:
        for t in tasks:
            out.append(worker(t))
        return out
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for result in pool.map(worker, tasks, chunksize=max(1, len(tasks) // (4 * jobs))):
            out.append(result)
    return out


def _nanmean(values: Iterable[float]) -> float:
    vals = [v for v in values if not math.isnan(v)]
    return math.nan if not vals else sum(vals) / len(vals)


def _median(values: Sequence[float]) -> float:
    ordered = sorted(values)
    k = len(ordered)
    mid = k // 2
    return ordered[mid] if k % 2 else (ordered[mid - 1] + ordered[mid]) / 2


def _run_correlation(spec: ExperimentSpec, jobs: int, collector: list | None = None) -> ExperimentResult:
    tasks = [
        (spec, ci, mi, ni, rep)
        for ci in range(len(spec.cultures))
        for mi in range(len(spec.m_values))
        for ni in range(len(spec.n_values))
        for rep in range(spec.replicates)
    ]
    rows = _map_tasks(_correlation_replicate, tasks, jobs, collector)
    pairs = ("tau_borda_copeland", "tau_borda_variance", "tau_copeland_variance")
    summary = []
    for ci in range(len(spec.cultures)):
        culture = _culture_label(*spec.cultures[ci])
        for m in spec.m_values:
            for n in spec.n_values:
                bucket = [r for r in rows if (r["culture"], r["m"], r["n"]) == (culture, m, n)]
                entry = {"culture": culture, "m": m, "n": n, "replicates": len(bucket)}
                for pair in pairs:
                    entry[f"mean_{pair}"] = _nanmean(r[pair] for r in bucket)
                summary.append(entry)
    series = []
    for ci in range(len(spec.cultures)):
        culture = _culture_label(*spec.cultures[ci])
        for n in spec.n_values:
            for pair in pairs:
                ys = [
                    next(
                        s[f"mean_{pair}"]
                        for s in summary
                        if (s["culture"], s["m"], s["n"]) == (culture, m, n)
                    )
                    for m in spec.m_values
                ]
                series.append(
                    {
                        "label": f"{culture} n={n} {pair[4:].replace('_', '/')}",
                        "x": list(spec.m_values),
                        "y": ys,
                    }
                )
    plot = {"x_axis": "issues", "y_axis": "mean Kendall tau", "series": series}
    return ExperimentResult(tuple(rows), tuple(summary), plot)


def _run_robustness(spec: ExperimentSpec, jobs: int, collector: list | None = None) -> ExperimentResult:
    tasks = [
        (spec, ci, mi, ni, ri, rulei, rep)
        for ci in range(len(spec.cultures))
        for mi in range(len(spec.m_values))
        for ni in range(len(spec.n_values))
        for ri in range(len(spec.retain_values))
        for rulei in range(len(spec.rules))
        for rep in range(spec.replicates)
    ]
    rows = _map_tasks(_robustness_replicate, tasks, jobs, collector)
    summary = []
    keys = sorted(
        {(r["culture"], r["m"], r["n"], r["retain_pct"], r["rule"]) for r in rows},
        key=lambda k: (k[0], k[1], k[2], k[3], k[4]),
    )
    for culture, m, n, retain_pct, rule in keys:
        bucket = [
            r["tau"]
            for r in rows
            if (r["culture"], r["m"], r["n"], r["retain_pct"], r["rule"])
            == (culture, m, n, retain_pct, rule)
        ]
        summary.append(
            {
                "culture": culture,
                "m": m,
                "n": n,
                "retain_pct": retain_pct,
                "rule": rule,
                "replicates": len(bucket),
                "mean_tau": _nanmean(bucket),
            }
        )
    series = []
    for culture, m, n, rule in sorted({(s["culture"], s["m"], s["n"], s["rule"]) for s in summary}):
        pts = [s for s in summary if (s["culture"], s["m"], s["n"], s["rule"]) == (culture, m, n, rule)]
        pts.sort(key=lambda s: s["retain_pct"])
        series.append(
            {
                "label": f"{culture} m={m} n={n} {rule}",
                "x": [s["retain_pct"] for s in pts],
                "y": [s["mean_tau"] for s in pts],
            }
        )
    plot = {"x_axis": "retained comparisons (%)", "y_axis": "mean Kendall tau", "series": series}
    return ExperimentResult(tuple(rows), tuple(summary), plot)


def _run_inject_cost(spec: ExperimentSpec, jobs: int, collector: list | None = None) -> ExperimentResult:
    tasks = [
        (spec, ci, mi, ni, ti, rulei, rep)
        for ci in range(len(spec.cultures))
        for mi in range(len(spec.m_values))
        for ni in range(len(spec.n_values))
        for ti in range(len(spec.targets))
        for rulei in range(len(spec.rules))
        for rep in range(spec.replicates)
    ]
    outcomes = _map_tasks(_inject_replicate, tasks, jobs, collector)
    rows = [row for row, _ in outcomes]
    summary = []
    keys = sorted(
        {(r["culture"], r["m"], r["n"], r["rule"], r["target_position"]) for r in rows}
    )
    for culture, m, n, rule, position in keys:
        bucket = [
            r
            for r in rows
            if (r["culture"], r["m"], r["n"], r["rule"], r["target_position"])
            == (culture, m, n, rule, position)
        ]
        pcts = [r["added_pct"] for r in bucket]
        summary.append(
            {
                "culture": culture,
                "m": m,
                "n": n,
                "rule": rule,
                "target_position": position,
                "replicates": len(bucket),
                "success_rate": sum(r["succeeded"] for r in bucket) / len(bucket),
                "mean_added_pct": sum(pcts) / len(pcts),
                "median_added_pct": _median(pcts),
            }
        )
    series = []
    for culture, n, rule, position in sorted(
        {(s["culture"], s["n"], s["rule"], s["target_position"]) for s in summary}
    ):
        pts = [
            s
            for s in summary
            if (s["culture"], s["n"], s["rule"], s["target_position"])
            == (culture, n, rule, position)
        ]
        pts.sort(key=lambda s: s["m"])
        series.append(
            {
                "label": f"{culture} n={n} {rule} target={position}",
                "x": [s["m"] for s in pts],
                "y": [s["median_added_pct"] for s in pts],
            }
        )
    plot = {"x_axis": "issues", "y_axis": "median added agents (%)", "series": series}
    return ExperimentResult(tuple(rows), tuple(summary), plot)


def _run_inject_trace(spec: ExperimentSpec, jobs: int, collector: list | None = None) -> ExperimentResult:
    tasks = [
        (spec, ci, mi, ni, ti, rulei, rep)
        for ci in range(len(spec.cultures))
        for mi in range(len(spec.m_values))
        for ni in range(len(spec.n_values))
        for ti in range(len(spec.targets))
        for rulei in range(len(spec.rules))
        for rep in range(spec.replicates)
    ]
    outcomes = _map_tasks(_inject_replicate, tasks, jobs, collector)
    rows = []
    # Ranks per round, keyed by each issue's position in the initial
    # divisiveness ranking; finished runs hold their final state.
    buckets: dict[tuple, dict[tuple[int, int], list[float]]] = {}
    max_rounds: dict[tuple, int] = {}
    for row, (initial_ids, history) in outcomes:
        key = (row["culture"], row["m"], row["n"], row["rule"], row["target_position"])
        max_rounds[key] = max(max_rounds.get(key, 0), len(history) - 1)
    for row, (initial_ids, history) in outcomes:
        key = (row["culture"], row["m"], row["n"], row["rule"], row["target_position"])
        bucket = buckets.setdefault(key, {})
        for rnd in range(max_rounds[key] + 1):
            values = history[min(rnd, len(history) - 1)]
            order = sorted(range(len(values)), key=lambda j: (-values[j], j))
            pos_of = {issue: pos for pos, issue in enumerate(order, start=1)}
            for init_pos, issue in enumerate(initial_ids, start=1):
                bucket.setdefault((rnd, init_pos), []).append(pos_of[issue])
                if rnd < len(history):
                    rows.append(
                        {
                            **{
                                k: row[k]
                                for k in ("culture", "m", "n", "rule", "target_position", "replicate")
                            },
                            "round": rnd,
                            "initial_position": init_pos,
                            "issue_id": issue,
                            "divisiveness": values[issue],
                            "position": pos_of[issue],
                        }
                    )
    summary = []
    for key in sorted(buckets):
        culture, m, n, rule, position = key
        for (rnd, init_pos), positions in sorted(buckets[key].items()):
            summary.append(
                {
                    "culture": culture,
                    "m": m,
                    "n": n,
                    "rule": rule,
                    "target_position": position,
                    "round": rnd,
                    "initial_position": init_pos,
                    "mean_position": sum(positions) / len(positions),
                }
            )
    series = []
    for key in sorted(buckets):
        culture, m, n, rule, position = key
        for init_pos in range(1, m + 1):
            pts = [
                s
                for s in summary
                if (s["culture"], s["m"], s["n"], s["rule"], s["target_position"], s["initial_position"])
                == (culture, m, n, rule, position, init_pos)
            ]
            pts.sort(key=lambda s: s["round"])
            series.append(
                {
                    "label": f"{culture} m={m} {rule} target={position} start={init_pos}",
                    "x": [s["round"] / n * 100 for s in pts],
                    "y": [s["mean_position"] for s in pts],
                }
            )
    plot = {"x_axis": "added agents (%)", "y_axis": "mean divisiveness position", "series": series}
    return ExperimentResult(tuple(rows), tuple(summary), plot)


_RUNNERS = {
    "correlation": _run_correlation,
    "robustness": _run_robustness,
    "inject-cost": _run_inject_cost,
    "inject-trace": _run_inject_trace,
}


def run_experiment(
    spec: ExperimentSpec, jobs: int = 1, collector: list | None = None
) -> ExperimentResult:
    """Run all replicates of a sweep; aggregation order is replicate order.

    ``collector``, when given, receives per-replicate results as they
    finish, so callers can flush partial output if the run is interrupted.
    """
    return _RUNNERS[spec.name](spec, jobs, collector)


def write_csv(rows: Sequence[dict], path) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if not rows:
            return
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def write_plot_json(plot: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(plot, fh, indent=2, sort_keys=True)
        fh.write("\n")


def collected_rows(collector: list) -> list[dict]:
    """Plain result rows from a (possibly partial) collector."""
    return [entry[0] if isinstance(entry, tuple) else entry for entry in collector]
