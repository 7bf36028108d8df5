"""Command-line surface: measures, splits, attacks, cultures, experiments.

Exit codes: 0 success, 2 parse or validation error, 3 runtime error (for
example an undefined correlation).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .control import (
    incomplete_divisiveness_scores,
    inject,
    remove_comparisons,
)
from .core import Profile, SocParseError, dump_profile, load_profile
from .divisiveness import (
    DivisivenessParams,
    divisiveness_scores,
    max_divided_subpopulation,
    rank_variances,
)
from .experiments import (
    collected_rows,
    load_experiment_spec,
    run_experiment,
    write_csv,
    write_plot_json,
)
from .generators import Culture
from .scoring import (
    ScoringRule,
    UndefinedScoreError,
    borda_scores,
    profile_scores,
)
from .stats import UndefinedTauError, kendall_tau

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RUNTIME = 3

MEASURES = ("borda", "copeland", "div-borda", "div-copeland", "variance")


def _emit(rows: list[dict], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _profile_rows(p: Profile, rule: ScoringRule, params: DivisivenessParams) -> list[dict]:
    scores = profile_scores(p, rule)
    div = divisiveness_scores(p, params)
    var = rank_variances(p)
    return [
        {
            "issue": a.label,
            "score": float(scores[a.id]),
            "divisiveness": float(div[a.id]),
            "rank_variance": float(var[a.id]),
        }
        for a in p.issues
    ]


def cmd_divisiveness(args) -> int:
    p = load_profile(args.profile)
    rule = ScoringRule.from_name(args.rule)
    params = DivisivenessParams(args.alpha, args.ell, rule)
    _emit(_profile_rows(p, rule, params), args.format, args.out)
    return EXIT_OK


def cmd_variance(args) -> int:
    p = load_profile(args.profile)
    var = rank_variances(p)
    rows = [{"issue": a.label, "rank_variance": float(var[a.id])} for a in p.issues]
    _emit(rows, args.format, args.out)
    return EXIT_OK


def cmd_max_split(args) -> int:
    p = load_profile(args.profile)
    issue = p.issue(args.issue)
    result = max_divided_subpopulation(issue, p)
    inside = p.restrict(result.subpopulation)
    outside = p.restrict(result.subpopulation.complement())
    rows = [
        {
            "issue": issue.label,
            "value": result.value,
            "members": " ".join(str(i) for i in sorted(result.subpopulation.members)),
            "inside_borda": float(borda_scores(inside)[issue.id]),
            "outside_borda": float(borda_scores(outside)[issue.id]),
        }
    ]
    _emit(rows, args.format, args.out)
    return EXIT_OK


def cmd_inject(args) -> int:
    p = load_profile(args.profile)
    target = p.issue(args.target)
    rule = ScoringRule.from_name(args.rule)
    outcome = inject(p, target, rule, max_rounds=args.max_rounds)
    rows = [
        {
            "round": rnd,
            "target_position": pos,
            "target_divisiveness": value,
        }
        for rnd, (pos, value) in enumerate(outcome.trace)
    ]
    _emit(rows, args.format, args.out)
    status = "succeeded" if outcome.succeeded else "gave up"
    print(
        f"# inject {status}: target {target.label!r} after {outcome.rounds} added rankings",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_deplete(args) -> int:
    p = load_profile(args.profile)
    rule = ScoringRule.from_name(args.rule)
    if rule is ScoringRule.BORDA:
        rule = ScoringRule.WIN_RATE
    depleted = remove_comparisons(p, args.retain, args.seed)
    partial = incomplete_divisiveness_scores(depleted, rule)
    complete_rule = ScoringRule.BORDA if rule is ScoringRule.WIN_RATE else rule
    complete = divisiveness_scores(p, DivisivenessParams(0.0, args.ell, complete_rule))
    report = kendall_tau(complete, partial)
    rows = [
        {
            "issue": a.label,
            "divisiveness_complete": float(complete[a.id]),
            "divisiveness_depleted": float(partial[a.id]),
        }
        for a in p.issues
    ]
    _emit(rows, args.format, args.out)
    print(
        f"# kept {depleted.comparison_count} comparisons, tau vs complete = {report.tau:.4f}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_generate(args) -> int:
    culture = Culture(args.culture, args.issues, args.agents, args.correlation)
    profile = culture.generate(args.seed)
    dump_profile(profile, args.output)
    print(f"# wrote {args.output}: {culture.label} m={args.issues} n={args.agents}", file=sys.stderr)
    return EXIT_OK


def cmd_correlate(args) -> int:
    p = load_profile(args.profile)
    vectors = {}
    for name in (args.x, args.y):
        if name == "variance":
            vectors[name] = rank_variances(p)
        elif name in ("borda", "copeland"):
            vectors[name] = profile_scores(p, ScoringRule.from_name(name))
        elif name in ("div-borda", "div-copeland"):
            rule = ScoringRule.from_name(name.split("-", 1)[1])
            vectors[name] = divisiveness_scores(p, DivisivenessParams(args.alpha, args.ell, rule))
        else:
            raise ValueError(f"unknown measure {name!r}; choose from {MEASURES}")
    report = kendall_tau(vectors[args.x], vectors[args.y])
    rows = [
        {
            "x": args.x,
            "y": args.y,
            "tau": report.tau,
            "concordant": report.pairs_concordant,
            "discordant": report.pairs_discordant,
            "ties_x": report.ties_x,
            "ties_y": report.ties_y,
        }
    ]
    _emit(rows, args.format, args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    spec = load_experiment_spec(args.spec)
    if args.seed is not None:
        from dataclasses import replace

        spec = replace(spec, seed=args.seed)
    prefix = args.out or spec.name
    collector: list = []
    try:
        result = run_experiment(spec, jobs=args.jobs, collector=collector)
    except KeyboardInterrupt:
        partial = collected_rows(collector)
        write_csv(partial, f"{prefix}.csv")
        print(
            f"# interrupted: flushed {len(partial)} finished replicates to {prefix}.csv",
            file=sys.stderr,
        )
        return 130
    write_csv(list(result.rows), f"{prefix}.csv")
    write_csv(list(result.summary), f"{prefix}-summary.csv")
    write_plot_json(result.plot, f"{prefix}-plot.json")
    print(
        f"# {spec.name}: {len(result.rows)} rows -> {prefix}.csv, "
        f"{prefix}-summary.csv, {prefix}-plot.json",
        file=sys.stderr,
    )
    return EXIT_OK


def _common_options(suppress: bool) -> argparse.ArgumentParser:
    # The same flags are valid before and after the subcommand; the
    # subparser copies default to SUPPRESS so they never clobber values
    # given before the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    defaults = {"format": "csv", "out": None, "seed": None, "jobs": 1}
    if suppress:
        defaults = {key: argparse.SUPPRESS for key in defaults}
    common.add_argument("--format", choices=("csv", "json"), default=defaults["format"])
    common.add_argument(
        "--out", default=defaults["out"], help="write output to this file instead of stdout"
    )
    common.add_argument(
        "--seed", type=int, default=defaults["seed"], help="rng seed for stochastic commands"
    )
    common.add_argument(
        "--jobs", type=int, default=defaults["jobs"], help="parallel replicates for experiments"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divisim",
        description="Divisiveness measures over ranking profiles, with attack simulators",
        parents=[_common_options(suppress=False)],
    )
    shared = [_common_options(suppress=True)]
    sub = parser.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    sp = sub.add_parser(
        "divisiveness",
        help="per-issue score, divisiveness, and rank variance",
        parents=shared,
    )
    sp.add_argument("profile")
    sp.add_argument("--rule", default="borda", choices=("borda", "copeland"))
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--ell", type=float, default=4.0)
    sp.set_defaults(func=cmd_divisiveness)

    sp = sub.add_parser("variance", help="per-issue rank variance", parents=shared)
    sp.add_argument("profile")
    sp.set_defaults(func=cmd_variance)

    sp = sub.add_parser("max-split", help="most divided sub-population for an issue (Borda)", parents=shared)
    sp.add_argument("profile")
    sp.add_argument("issue", help="issue label or id")
    sp.set_defaults(func=cmd_max_split)

    sp = sub.add_parser("inject", help="add rankings until the target is most divisive", parents=shared)
    sp.add_argument("profile")
    sp.add_argument("target", help="issue label or id")
    sp.add_argument("--rule", default="borda", choices=("borda", "copeland"))
    sp.add_argument("--max-rounds", type=int, default=1000)
    sp.set_defaults(func=cmd_inject)

    sp = sub.add_parser("deplete", help="delete comparisons and rescore divisiveness", parents=shared)
    sp.add_argument("profile")
    sp.add_argument("--retain", type=float, required=True, help="fraction of comparisons kept")
    sp.add_argument("--rule", default="winrate", choices=("winrate", "borda", "copeland"))
    sp.add_argument("--ell", type=float, default=4.0)
    sp.set_defaults(func=cmd_deplete)

    sp = sub.add_parser("generate", help="write a synthetic profile as SOC", parents=shared)
    sp.add_argument("--culture", default="ic", choices=("ic", "urn"))
    sp.add_argument("-m", "--issues", type=int, required=True)
    sp.add_argument("-n", "--agents", type=int, required=True)
    sp.add_argument("--correlation", type=float, default=0.0)
    sp.add_argument("output", help="destination SOC file")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("correlate", help="Kendall tau between two per-issue measures", parents=shared)
    sp.add_argument("profile")
    sp.add_argument("--x", default="div-borda", choices=MEASURES)
    sp.add_argument("--y", default="variance", choices=MEASURES)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--ell", type=float, default=4.0)
    sp.set_defaults(func=cmd_correlate)

    sp = sub.add_parser("experiment", help="run a declarative experiment spec", parents=shared)
    sp.add_argument("spec")
    sp.set_defaults(func=cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SocParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UndefinedScoreError, UndefinedTauError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
