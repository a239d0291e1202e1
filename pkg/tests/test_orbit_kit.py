from __future__ import annotations

from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import n_order

from bsl.orbit_kit import (
    PairedOrbit,
    arithmetic_carrier,
    explicit_carrier,
    fermat_characters,
    legendre_index,
    orbits,
    orbits_json,
    pair_orbits,
    sum_d,
    superelliptic_index,
)


@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(2, 200))
def test_orbit_sizes_are_multiplicative_orders(p, d):
    if gcd(p, d) != 1:
        return
    S = arithmetic_carrier((d,), p, range(d), lambda x: 0)
    cycles = orbits(S)
    assert sorted(x for c in cycles for x in c) == list(range(d))
    for c in cycles:
        x = c[0]
        assert len(c) == n_order(p, d // gcd(x, d)) if x else len(c) == 1
        assert all(c[(k + 1) % len(c)] == (p * c[k]) % d for k in range(len(c)))


def test_word_invariants():
    o = PairedOrbit.from_word(tuple(range(6)), "uulmll")
    assert o.d_invariant == 2 and o.profile == (0, 1, 2, 1, 1, 0, -1) and o.height == 3
    assert not o.degenerate
    assert PairedOrbit.from_word((0, 1), "um").degenerate
    r = o.rotated(2)
    assert r.word == "lmlluu" and r.d_invariant == 2


def test_carrier_validation():
    with pytest.raises(ValueError):
        arithmetic_carrier((6,), 3, range(6), lambda x: 0)
    with pytest.raises(ValueError):
        explicit_carrier([0, 1], [0, 2], [1, 0], 3)
    with pytest.raises(ValueError):
        explicit_carrier([0, 1], [0, 1], [0, 0], 3)


def _legendre_dim_brute(p, d):
    """Anti-diagonal pairs (i, -i): u when i < d/2 < d - i fails ... computed from scratch."""
    elems = [i for i in range(1, d) if 2 * i != d]
    seen, total = set(), 0
    for i in elems:
        if i in seen:
            continue
        cyc, x = [], i
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = (p * x) % d
        lo = sum(1 for x in cyc if 2 * x < d)
        hi = len(cyc) - lo
        total += min(lo, hi)
    return total


@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(2, 300))
def test_legendre_pairing_matches_brute(p, d):
    if gcd(p, d) != 1:
        return
    I = legendre_index(d, p)
    assert sum_d(pair_orbits(I, I, "anti-diagonal")) == _legendre_dim_brute(p, d)


def test_fermat_and_superelliptic_labels():
    F = fermat_characters(5, 2)
    assert len(F) == 12 and len(F.part(0)) == len(F.part(1)) == 6
    S = superelliptic_index(2, 7, 3)
    L = legendre_index(7, 3)
    assert len(S.part(0)) == len(L.part(0))


def test_orbits_json_shape():
    I = legendre_index(5, 7)
    out = orbits_json(pair_orbits(I, I, "anti-diagonal"), 5, 7)
    assert out["d"] == 5 and out["p"] == 7
    assert {"cycle", "word", "d", "ht"} <= set(out["orbits"][0])
