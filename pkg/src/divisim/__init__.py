"""Divisiveness measures over profiles of strict rankings.

The package scores how much an issue splits a population of rankers,
relates that to rank-variance, and stress-tests the measures under two
attacks: random deletion of pairwise comparisons and injection of
adversarial rankings. Synthetic cultures (impartial and urn) feed the
experiment runner.
"""

from .control import (
    InjectOutcome,
    PairwiseProfile,
    build_inject_rankings,
    incomplete_divisiveness,
    incomplete_divisiveness_scores,
    inject,
    remove_comparisons,
)
from .core import (
    Issue,
    Profile,
    Ranking,
    SocParseError,
    SubPopulation,
    default_issues,
    dump_profile,
    load_profile,
    parse_profile,
    rank_of,
    restrict,
    serialize_profile,
    supporters,
)
from .divisiveness import (
    DivisivenessParams,
    SplitResult,
    alpha_factor,
    div_pair,
    divisiveness,
    divisiveness_ranking,
    divisiveness_scores,
    max_divided_subpopulation,
    rank_variance,
    rank_variances,
)
from .experiments import (
    ExperimentResult,
    ExperimentSpec,
    load_experiment_spec,
    parse_experiment_spec,
    run_experiment,
)
from .generators import Culture, generate_ic, generate_urn
from .scoring import (
    ScoredRanking,
    ScoringRule,
    UndefinedScoreError,
    agreement_ranking,
    borda,
    borda_scores,
    copeland,
    copeland_scores,
    win_rate,
    win_rate_scores,
)
from .stats import CorrelationReport, UndefinedTauError, aggregate_runs, kendall_tau

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "Issue",
    "Ranking",
    "Profile",
    "SubPopulation",
    "SocParseError",
    "default_issues",
    "parse_profile",
    "serialize_profile",
    "load_profile",
    "dump_profile",
    "rank_of",
    "supporters",
    "restrict",
    # scoring
    "ScoringRule",
    "ScoredRanking",
    "UndefinedScoreError",
    "borda",
    "borda_scores",
    "copeland",
    "copeland_scores",
    "win_rate",
    "win_rate_scores",
    "agreement_ranking",
    # divisiveness
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
    # control
    "PairwiseProfile",
    "InjectOutcome",
    "remove_comparisons",
    "incomplete_divisiveness",
    "incomplete_divisiveness_scores",
    "build_inject_rankings",
    "inject",
    # generators
    "Culture",
    "generate_ic",
    "generate_urn",
    # stats
    "CorrelationReport",
    "UndefinedTauError",
    "kendall_tau",
    "aggregate_runs",
    # experiments
    "ExperimentSpec",
    "ExperimentResult",
    "parse_experiment_spec",
    "load_experiment_spec",
    "run_experiment",
]
