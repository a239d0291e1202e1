from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsl.families import (
    CSV_HEADER,
    FamilySpec,
    StructuralError,
    bs_report,
    bs_scan,
    carrier_size,
    contributing_orbits,
    deg_omega_value,
    dim_sha,
    genus_g_components,
    genus_g_in_carrier,
    genus_g_letter,
    normalize_kind,
)
from bsl.orbit_kit import superelliptic_index


def _orbit_sum(p, d, letter):
    seen, total = set(), 0
    for b in range(d):
        if b in seen or letter(b) is None:
            continue
        cyc, x = [], b
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = (p * x) % d
        ws = [letter(x) for x in cyc]
        total += min(ws.count("u"), ws.count("l"))
    return total


def _sextic_brute(p, d):
    def letter(b):
        if (6 * b) % d == 0:
            return None
        if 6 * b < d:
            return "l"
        if 6 * b > 5 * d:
            return "u"
        return "m"

    return _orbit_sum(p, d, letter)


@pytest.mark.parametrize("p,f", [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)])
def test_supersingular_legendre_anchor(p, f):
    d = p**f + 1
    assert dim_sha(FamilySpec("legendre", p, d)) == (p**f - 1) // 2


def test_spot_values():
    assert dim_sha(FamilySpec("legendre", 7, 5)) == 2
    assert dim_sha(FamilySpec("legendre", 3, 10)) == 4
    assert dim_sha(FamilySpec("sextic", 5, 7)) == 1
    assert bs_report(FamilySpec("sextic", 7, 8)).ratio == Fraction(1, 2)


@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 400))
def test_sextic_matches_brute(p, d):
    if gcd(p, d) != 1:
        return
    try:
        got = dim_sha(FamilySpec("sextic", p, d))
    except StructuralError:
        pytest.fail("window endpoints are excluded from the carrier")
    assert got == _sextic_brute(p, d)


@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 1000))
def test_ordinary_twist_vanishes(p, d):
    if gcd(p, d) == 1:
        assert dim_sha(FamilySpec("ordinary_twist", p, d)) == 0


@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 300))
def test_supersingular_twist_equals_legendre(p, d):
    if gcd(p, d) == 1:
        assert dim_sha(FamilySpec("supersingular_twist", p, d)) == dim_sha(FamilySpec("legendre", p, d))


@given(st.sampled_from([7, 11]), st.integers(2, 300), st.integers(2, 5))
def test_superelliptic_cardinality(p, d, r):
    if gcd(p, r * d) != 1:
        return
    S = superelliptic_index(r, d, p)
    n = ((r - 1) * (d - 1) - gcd(r, d) + 1) // 2
    assert len(S.part(0)) == len(S.part(1)) == n
    if r == 2:
        assert dim_sha(FamilySpec("superelliptic", p, d, 2)) == dim_sha(FamilySpec("legendre", p, d))


@given(st.integers(1, 4), st.integers(1, 200))
def test_genus_g_letters_match_components(g, d):
    for b in range(d):
        if not genus_g_in_carrier(b, d, g):
            continue
        i, j = genus_g_components(b, d, g)
        want = "u" if (i, j) == (1, 0) else "l" if (i, j) == (0, 1) else "m"
        assert genus_g_letter(b, d, g) == want


def test_deg_omega_values():
    assert deg_omega_value("legendre", 5) == (3, True)
    assert deg_omega_value("sextic", 7) == (2, True)
    assert deg_omega_value("genus_g", 13, 1) == (2, True)
    assert deg_omega_value("genus_g", 30, 2) == (3, True)
    assert deg_omega_value("superelliptic", 6, 3) == (6, True)
    assert deg_omega_value("superelliptic", 7, 3)[1] is False


def test_validation():
    with pytest.raises(ValueError):
        FamilySpec("legendre", 4, 5)
    with pytest.raises(ValueError):
        FamilySpec("legendre", 5, 10)
    with pytest.raises(ValueError):
        FamilySpec("genus_g", 5, 7, 2)  # 5 divides (2g+2)(2g+1) = 30
    with pytest.raises(ValueError):
        FamilySpec("superelliptic", 7, 5)
    with pytest.raises(ValueError):
        normalize_kind("nonsense")
    assert normalize_kind("GenusG") == "genus_g"


def test_contributing_orbits_cover_carrier():
    F = FamilySpec("legendre", 7, 20)
    assert sum(o.size for o in contributing_orbits(F)) == carrier_size(F)


def test_scan_deterministic_and_skips():
    a = bs_scan("legendre", 7, range(3, 60))
    b = bs_scan("legendre", 7, reversed(range(3, 60)), workers=2)
    assert [r.csv_row() for r in a.rows] == [r.csv_row() for r in b.rows]
    assert [d for d, _ in a.skipped] == [7, 14, 21, 28, 35, 42, 49, 56]
    assert len(CSV_HEADER) == len(a.rows[0].csv_row())
    assert all(r.deg_omega_exact for r in a.rows)
