from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsl.equidist import convergence_scan, discrepancy, discrepancy_interval, discrepancy_j2, discrepancy_two_var


def _brute_interval(p, d, a, b):
    """Orbit-by-orbit with Fractions and no shared helpers."""
    seen, total = set(), Fraction(0)
    for x in range(d):
        if x in seen:
            continue
        cyc, y = [], x
        while y not in seen:
            seen.add(y)
            cyc.append(y)
            y = (p * y) % d
        inside = sum(1 for y in cyc if a < Fraction(y, d) < b)
        total += abs(Fraction(inside, len(cyc)) - (b - a))
    return total / d


def test_anchors():
    assert discrepancy_interval(3, 5, 0, Fraction(1, 2)).value == Fraction(1, 10)
    assert discrepancy_interval(11, 5, 0, Fraction(1, 2)).value == Fraction(1, 2)
    assert discrepancy_interval(5, 1).value == Fraction(1, 2)
    assert discrepancy_two_var(3, 2, 4).value == Fraction(5, 8)
    assert discrepancy_two_var(3, 1, 4).value == Fraction(3, 8)
    assert discrepancy_j2(3, 1).value == Fraction(1, 2)
    assert discrepancy_j2(3, 5).value == Fraction(1, 10)


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 150), st.fractions(0, 1), st.fractions(0, 1))
def test_interval_matches_brute(p, d, a, b):
    if gcd(p, d) != 1 or a == b:
        return
    a, b = min(a, b), max(a, b)
    assert discrepancy_interval(p, d, a, b).value == _brute_interval(p, d, a, b)


def test_boundary_hits():
    r = discrepancy_interval(3, 4, 0, Fraction(1, 2))
    assert r.boundary_hits == 2  # x = 0 and x = 2


def test_validation():
    with pytest.raises(ValueError):
        discrepancy_interval(3, 6)
    with pytest.raises(ValueError):
        discrepancy_interval(5, 7, Fraction(1, 2), Fraction(1, 3))
    with pytest.raises(ValueError):
        discrepancy("p99", 3, 5, {})


def test_scan_skips_and_trend():
    t = convergence_scan("p91", 7, range(5, 400), {"a": 0, "b": Fraction(1, 2)})
    assert all(r.d % 7 for r in t.rows)
    assert t.mean(300, 399) < t.mean(5, 100)
    t2 = convergence_scan("p91", 7, range(5, 400), {"a": 0, "b": Fraction(1, 2)}, workers=2)
    assert [r.value for r in t.rows] == [r.value for r in t2.rows]
