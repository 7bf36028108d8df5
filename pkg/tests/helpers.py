"""Independent exact-arithmetic oracles for the test suite.

Everything here recomputes measures from their definitions with Fractions
and explicit loops, deliberately sharing no code with the package paths it
checks.
"""

from fractions import Fraction
from itertools import combinations

from divisim import Issue, Profile, Ranking


def profile_from_strings(entries, issues=None):
    """Build a profile from (weight, "cadfeb")-style letter strings."""
    first = entries[0][1]
    m = len(first)
    letters = issues or "".join(sorted(first))
    ids = {ch: i for i, ch in enumerate(letters)}
    issue_objs = tuple(Issue(i, ch) for ch, i in sorted(ids.items(), key=lambda kv: kv[1]))
    built = tuple(
        (w, Ranking(tuple(ids[ch] for ch in word))) for w, word in entries
    )
    return Profile(issue_objs, built)


def expand(p):
    """Rankings of agents 1..n as tuples of issue ids."""
    return [tuple(r.order) for r in p.iter_rankings()]


def rank(order, a):
    return order.index(a) + 1


def borda_exact(a, orders):
    m = len(orders[0])
    return sum(Fraction(m - rank(o, a), m - 1) for o in orders) / len(orders)


def copeland_exact(a, orders):
    m = len(orders[0])
    wins = 0
    for b in range(m):
        if b == a:
            continue
        ab = sum(1 for o in orders if rank(o, a) < rank(o, b))
        if ab > len(orders) - ab:
            wins += 1
    return Fraction(wins, m - 1)


def div_pair_exact(a, member_set, orders, score=borda_exact):
    n = len(orders)
    if not member_set or len(member_set) == n:
        return Fraction(0)
    inside = [orders[i] for i in range(n) if i in member_set]
    outside = [orders[i] for i in range(n) if i not in member_set]
    return abs(score(a, inside) - score(a, outside))


def divisiveness_exact(a, orders, alpha=Fraction(0), ell=Fraction(4), score=borda_exact):
    m = len(orders[0])
    n = len(orders)
    total = Fraction(0)
    for b in range(m):
        if b == a:
            continue
        members = {i for i, o in enumerate(orders) if rank(o, a) < rank(o, b)}
        k = len(members)
        if k == 0 or k == n:
            continue
        factor = (ell * Fraction(k * (n - k), n * n)) ** alpha
        total += factor * div_pair_exact(a, members, orders, score)
    return total / (m - 1)


def variance_exact(a, orders):
    n = len(orders)
    mu = Fraction(sum(rank(o, a) for o in orders), n)
    return sum((rank(o, a) - mu) ** 2 for o in orders) / n


def max_split_exact(a, orders):
    """Best |Borda gap| over all nonempty proper subsets, by enumeration."""
    n = len(orders)
    m = len(orders[0])
    points = [m - rank(o, a) for o in orders]
    total = sum(points)
    best = Fraction(-1)
    for size in range(1, n):
        for combo in combinations(range(n), size):
            s = sum(points[i] for i in combo)
            v = abs(Fraction(s, size) - Fraction(total - s, n - size))
            if v > best:
                best = v
    return best / (m - 1)


def tau_naive(x, y):
    """Plain O(k^2) tau-b count, no shortcuts."""
    k = len(x)
    c = d = tx = ty = 0
    for i in range(k):
        for j in range(i + 1, k):
            dx = (x[i] > x[j]) - (x[i] < x[j])
            dy = (y[i] > y[j]) - (y[i] < y[j])
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                tx += 1
            elif dy == 0:
                ty += 1
            elif dx == dy:
                c += 1
            else:
                d += 1
    return (c - d) / ((c + d + tx) * (c + d + ty)) ** 0.5


def mean_pairwise_agreement(p):
    """Average Kendall similarity between agents, from pair counts.

    For each issue pair, two random agents agree with probability
    (C(k,2) + C(n-k,2)) / C(n,2) where k agents hold one direction; the
    average pairwise tau is the mean of (agree - disagree) over issue pairs.
    """
    orders = expand(p)
    n = len(orders)
    m = len(orders[0])
    total = Fraction(0)
    pairs = 0
    all_pairs = Fraction(n * (n - 1), 2)
    for a in range(m):
        for b in range(a + 1, m):
            k = sum(1 for o in orders if rank(o, a) < rank(o, b))
            same = Fraction(k * (k - 1) + (n - k) * (n - k - 1), 2)
            opposite = Fraction(k * (n - k))
            total += (same - opposite) / all_pairs
            pairs += 1
    return float(total / pairs)
