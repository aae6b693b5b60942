"""Small shared utilities for the test suite."""

import numpy as np


def multiset_deviation(xs, ys):
    """Greedy tolerance-aware matching of two equal-size multisets; returns the worst gap."""
    xs, ys = sorted(xs), list(ys)
    if len(xs) != len(ys):
        return np.inf
    worst = 0.0
    for x in xs:
        j = int(np.argmin([abs(x - y) for y in ys]))
        worst = max(worst, abs(x - ys.pop(j)))
    return worst


def subset_deviation(xs, pool):
    """Largest distance from any x to its nearest member of pool."""
    pool = np.asarray(pool)
    return max((float(np.min(np.abs(pool - x))) for x in xs), default=0.0)
