from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divisim import (
    DivisivenessParams,
    Profile,
    Ranking,
    ScoringRule,
    SubPopulation,
    alpha_factor,
    default_issues,
    div_pair,
    divisiveness,
    divisiveness_ranking,
    divisiveness_scores,
    generate_ic,
    generate_urn,
    max_divided_subpopulation,
    rank_variance,
    rank_variances,
)
from helpers import (
    divisiveness_exact,
    expand,
    max_split_exact,
    profile_from_strings,
    variance_exact,
)

BORDA0 = DivisivenessParams(0.0)
BORDA1 = DivisivenessParams(1.0)
COP0 = DivisivenessParams(0.0, rule=ScoringRule.COPELAND)


def test_div_pair_six_issue_table(six_issue_profile):
    p = six_issue_profile
    assert div_pair(0, p.supporters(0, 3), p) == pytest.approx(0.6, abs=1e-12)
    assert div_pair(0, p.supporters(0, 1), p) == pytest.approx(1 / 3, abs=1e-12)
    assert div_pair(0, p.supporters(0, 2), p) == pytest.approx(1 / 3, abs=1e-12)


def test_div_pair_boundaries(six_issue_profile):
    p = six_issue_profile
    assert div_pair(0, SubPopulation(frozenset(), p.n), p) == 0.0
    assert div_pair(0, SubPopulation(frozenset(range(1, p.n + 1)), p.n), p) == 0.0


def test_alpha_factor_six_issue(six_issue_profile):
    p = six_issue_profile
    assert alpha_factor(0, 1, p) == pytest.approx(0.36, abs=1e-12)
    assert alpha_factor(0, 3, p) == pytest.approx(1.0, abs=1e-12)
    assert alpha_factor(3, 5, p, alpha=0.0) == 1.0
    with pytest.raises(ValueError):
        alpha_factor(2, 2, p)


def test_divisiveness_six_issue_columns(six_issue_profile):
    p = six_issue_profile
    d0 = divisiveness_scores(p, BORDA0)
    d1 = divisiveness_scores(p, BORDA1)
    assert np.allclose(d0, [37 / 75, 1, 1, 0, 37 / 75, 0], atol=1e-9)
    assert np.allclose(d1, [51 / 125, 9 / 25, 9 / 25, 0, 51 / 125, 0], atol=1e-9)


def test_divisiveness_manipulation_profile(manipulation_profile):
    d = divisiveness_scores(manipulation_profile, BORDA0)
    # d is unanimously last, a leads; exact values recomputed from the
    # definition (see helpers.divisiveness_exact)
    orders = expand(manipulation_profile)
    want = [float(divisiveness_exact(a, orders)) for a in range(4)]
    assert np.allclose(d, want, atol=1e-12)
    assert want == pytest.approx([12 / 27, 8 / 27, 4 / 27, 0.0], abs=1e-12)


def test_divisiveness_ranking_six_issue(six_issue_profile):
    r0 = divisiveness_ranking(six_issue_profile, BORDA0)
    assert [a.label for a, _ in r0.items] == ["b", "c", "a", "e", "d", "f"]
    r1 = divisiveness_ranking(six_issue_profile, BORDA1)
    assert [a.label for a, _ in r1.items][:2] == ["a", "e"]


def test_divisiveness_unanimous_profile_is_zero():
    p = profile_from_strings([(6, "dbca")])
    for params in (BORDA0, BORDA1, COP0):
        assert divisiveness_scores(p, params).tolist() == [0, 0, 0, 0]


def test_rank_unanimous_borda_exactly_zero(rank_unanimous_profile):
    for alpha in (0.0, 0.3, 1.0):
        assert divisiveness(1, rank_unanimous_profile, DivisivenessParams(alpha)) == 0.0
        assert divisiveness_scores(rank_unanimous_profile, DivisivenessParams(alpha))[1] == 0.0


def test_rank_unanimous_copeland_counterexample(rank_unanimous_profile):
    assert divisiveness(1, rank_unanimous_profile, COP0) == pytest.approx(1 / 3, abs=1e-12)


def test_rank_variance_two_camp(two_camp_profile):
    var = rank_variances(two_camp_profile)
    orders = expand(two_camp_profile)
    want = [float(variance_exact(a, orders)) for a in range(5)]
    assert np.allclose(var, want, atol=1e-12)
    assert var[0] == pytest.approx(4.0, abs=1e-12)
    assert var[2] == pytest.approx(1 / 11, abs=1e-12)
    assert var[1] == pytest.approx(21 / 484, abs=1e-12)


def test_rank_variance_simple_cases():
    assert rank_variance(1, profile_from_strings([(3, "abc")])) == 0.0
    p = profile_from_strings([(1, "abc"), (1, "bca")])  # a at positions 1 and 3
    assert rank_variance(0, p) == pytest.approx(1.0, abs=1e-12)


def test_fully_polarised_even_borda_is_one():
    for n in (4, 6, 8):
        p = profile_from_strings([(n // 2, "abcd"), (n // 2, "dcba")])
        for alpha in (0.0, 0.5, 1.0):
            d = divisiveness_scores(p, DivisivenessParams(alpha))
            assert d[0] == pytest.approx(1.0, abs=1e-12)
            assert d[3] == pytest.approx(1.0, abs=1e-12)


def test_fully_polarised_odd_copeland_formula():
    for n in (3, 5, 7):
        p = profile_from_strings([((n + 1) // 2, "abcd"), (n // 2, "dcba")])
        for alpha in (0.0, 0.5, 1.0):
            got = divisiveness(0, p, DivisivenessParams(alpha, rule=ScoringRule.COPELAND))
            assert got == pytest.approx(((n * n - 1) / (n * n)) ** alpha, abs=1e-12)


def test_uniform_profile_equal_divisiveness():
    for m in (3, 4):
        p = Profile(
            default_issues(m),
            tuple((1, Ranking(perm)) for perm in permutations(range(m))),
        )
        for params in (BORDA0, BORDA1, COP0):
            d = divisiveness_scores(p, params)
            assert np.allclose(d, d[0], atol=1e-12)
        # direct computation: Copeland saturates, Borda sits at (m+1)/(3m-3)
        assert divisiveness_scores(p, COP0)[0] == pytest.approx(1.0, abs=1e-12)
        assert divisiveness_scores(p, BORDA0)[0] == pytest.approx(
            (m + 1) / (3 * (m - 1)), abs=1e-12
        )


def test_scalar_and_vector_paths_agree():
    rng = np.random.default_rng(11)
    for _ in range(25):
        m = int(rng.integers(2, 7))
        n = int(rng.integers(1, 15))
        p = generate_ic(m, n, rng)
        alpha = float(rng.uniform(0, 1))
        for rule in (ScoringRule.BORDA, ScoringRule.COPELAND):
            params = DivisivenessParams(alpha, 4.0, rule)
            vec = divisiveness_scores(p, params)
            sc = [divisiveness(a, p, params) for a in range(m)]
            assert np.allclose(vec, sc, atol=1e-12)


def test_matches_exact_oracle_on_random_profiles():
    rng = np.random.default_rng(3)
    for _ in range(15):
        m = int(rng.integers(2, 6))
        n = int(rng.integers(1, 10))
        p = generate_urn(m, n, 0.3, rng)
        orders = expand(p)
        for alpha in (Fraction(0), Fraction(1)):
            d = divisiveness_scores(p, DivisivenessParams(float(alpha)))
            want = [float(divisiveness_exact(a, orders, alpha)) for a in range(m)]
            assert np.allclose(d, want, atol=1e-12)


@given(st.integers(2, 6), st.integers(1, 12), st.integers(0, 10_000),
       st.sampled_from([0.0, 0.25, 0.5, 1.0]))
@settings(max_examples=60, deadline=None)
def test_bounds_hold_at_default_normalizer(m, n, seed, alpha):
    p = generate_ic(m, n, seed)
    for rule in (ScoringRule.BORDA, ScoringRule.COPELAND):
        d = divisiveness_scores(p, DivisivenessParams(alpha, 4.0, rule))
        assert np.all(d >= 0) and np.all(d <= 1 + 1e-12)


@given(st.integers(2, 5), st.integers(2, 10), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_at_most_two_issues_maximally_divided(m, n, seed):
    p = generate_ic(m, n, seed)
    d = divisiveness_scores(p, BORDA0)
    assert int(np.sum(np.isclose(d, 1.0, atol=1e-12))) <= 2


def test_divisiveness_params_validation():
    with pytest.raises(ValueError):
        DivisivenessParams(-0.1)
    with pytest.raises(ValueError):
        DivisivenessParams(1.1)
    with pytest.raises(ValueError):
        DivisivenessParams(0.0, ell=0.0)
    with pytest.raises(ValueError):
        DivisivenessParams(0.0, rule=ScoringRule.WIN_RATE)


def test_max_split_two_camp_profile(two_camp_profile):
    res = max_divided_subpopulation(0, two_camp_profile)
    assert res.value == pytest.approx(1.0, abs=1e-15)
    assert res.subpopulation.size == 11
    # the split separates the eleven agents ranking the issue last
    inside = two_camp_profile.restrict(res.subpopulation)
    assert {r.rank_of(0) for r in inside.iter_rankings()} == {5}


def test_max_split_rank_unanimous_is_zero():
    p = profile_from_strings([(2, "abc"), (2, "acb")])
    res = max_divided_subpopulation(0, p)
    assert res.value == 0.0
    assert res.subpopulation.size == 1  # smallest prefix wins ties


def test_max_split_value_is_reproducible(six_issue_profile):
    res = max_divided_subpopulation(1, six_issue_profile)
    assert res.value == pytest.approx(
        div_pair(1, res.subpopulation, six_issue_profile), abs=1e-12
    )


def test_max_split_matches_brute_force():
    rng = np.random.default_rng(9)
    for _ in range(30):
        m = int(rng.integers(2, 6))
        n = int(rng.integers(2, 9))
        p = generate_ic(m, n, rng)
        a = int(rng.integers(m))
        got = max_divided_subpopulation(a, p).value
        assert got == float(max_split_exact(a, expand(p)))


def test_max_split_guards():
    p = profile_from_strings([(1, "abc")])
    with pytest.raises(ValueError):
        max_divided_subpopulation(0, p)
    p2 = profile_from_strings([(2, "abc")])
    with pytest.raises(ValueError):
        max_divided_subpopulation(0, p2, rule=ScoringRule.COPELAND)
