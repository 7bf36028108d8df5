import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import profile_from_strings


@pytest.fixture
def six_issue_profile():
    """Ten agents over a..f: one outlier, two large near-opposed camps."""
    return profile_from_strings(
        [(1, "cadfeb"), (4, "badfec"), (5, "bedfac")], issues="abcdef"
    )


@pytest.fixture
def two_camp_profile():
    """22 agents over a..e: two big reversed camps plus two near-duplicates."""
    return profile_from_strings(
        [(10, "abcde"), (10, "ebcda"), (1, "acbde"), (1, "ebdca")], issues="abcde"
    )


@pytest.fixture
def manipulation_profile():
    """Four agents over a..d, all agreeing d is worst."""
    return profile_from_strings([(1, "bcad"), (2, "abcd"), (1, "acbd")], issues="abcd")


@pytest.fixture
def manipulated_profile():
    """Same population after the last agent swaps in an adversarial ranking."""
    return profile_from_strings([(1, "bcad"), (2, "abcd"), (1, "cadb")], issues="abcd")


@pytest.fixture
def rank_unanimous_profile():
    """Three agents who all place b second while disagreeing on the rest."""
    return profile_from_strings([(1, "abcd"), (1, "cbad"), (1, "dbac")], issues="abcd")


SIX_ISSUE_SOC = """6
0,a
1,b
2,c
3,d
4,e
5,f
10,10,3
1: 2,0,3,5,4,1
4: 1,0,3,5,4,2
5: 1,4,3,5,0,2
"""


@pytest.fixture
def six_issue_soc(tmp_path):
    path = tmp_path / "six.soc"
    path.write_text(SIX_ISSUE_SOC, encoding="utf-8")
    return path
