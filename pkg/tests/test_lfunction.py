from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from bsl.families import FamilySpec, deg_omega_value, dim_sha
from bsl.finite_field import finite_field
from bsl.lfunction import (
    CurveContext,
    dim_sha_from_slopes,
    LPolynomial,
    WeierstrassCurve,
    check_l_polynomial,
    conductor_degree,
    deg_omega_from_model,
    family_curve,
    frobenius_pullback_check,
    l_polynomial,
    newton_slopes,
    places,
    slope_report,
)

# ------------------------------------------------------------ point-count oracle
#
# log L(T) = sum_k c_k T^k / k with c_k = sum over t in P^1(F_{q^k}) of
# q^k + 1 - #E_t(F_{q^k}) = -sum_x chi(f_t(x)), counted on minimal fibres.
# The models below are minimal at every finite t for the listed d, and the
# fibre at infinity is written out by hand in s = 1/t.


def _cubic_values(F, a2, a4, a6, x):
    x2 = F.mul(x, x)
    val = F.mul(x2, x)
    for coef, mon in ((a2, x2), (a4, x), (a6, None)):
        term = np.full_like(x, coef) if mon is None else F.mul(np.full_like(x, coef), mon)
        val = F.add(val, term)
    return val


def _fibre_sum(F, a2, a4, a6) -> int:
    x = F.elements()
    return int(F.chi(_cubic_values(F, a2, a4, a6, x)).sum())


def _oracle_c(kind, p, d, a, k):
    F = finite_field(p, a * k)
    total = 0
    for t in range(F.Q):
        td = int(F.power(np.array(t), d))
        if kind == "legendre":  # y^2 = x^3 + (1 + t^d) x^2 + t^d x
            total += _fibre_sum(F, F.sadd(1, td), td, 0)
        else:  # y^2 = x^3 - 4 t^d x + t^d
            total += _fibre_sum(F, 0, F.smul(F.const(-4), td) if td else 0, td)
    # fibre at infinity, s = 0
    if kind == "legendre" and d % 2 == 0:
        total += _fibre_sum(F, 1, 0, 0)  # X^2 (X + 1)
    else:
        total += _fibre_sum(F, 0, 0, 0)  # X^3
    return -total


def _oracle_L(kind, p, d, a, D):
    c = [0] + [_oracle_c(kind, p, d, a, k) for k in range(1, D + 1)]
    L = [1]
    for i in range(1, D + 1):
        s = sum(c[k] * L[i - k] for k in range(1, i + 1))
        assert s % i == 0
        L.append(s // i)
    return tuple(L)


BRIDGE = [("legendre", 5, 1), ("legendre", 5, 2), ("legendre", 5, 3), ("legendre", 7, 2), ("legendre", 7, 4),
          ("genus_g", 5, 1), ("genus_g", 5, 2)]


@pytest.mark.parametrize("kind,p,d", BRIDGE + [("legendre", 7, 3), ("legendre", 5, 4)])
def test_l_polynomial_matches_point_counts(kind, p, d):
    res = l_polynomial(family_curve(kind, p, d))
    D = res.L.degree
    assert res.L.coeffs == _oracle_L(kind, p, d, 1, D)
    if D >= 1:  # one more coefficient from the counts must vanish
        assert _oracle_L(kind, p, d, 1, D + 1)[D + 1] == 0


def test_l_polynomial_over_extension_matches_counts():
    res = l_polynomial(family_curve("legendre", 5, 3), q=25)
    assert res.L.coeffs == (1, -50, 625)
    assert res.L.coeffs == _oracle_L("legendre", 5, 3, 2, res.L.degree)


@pytest.mark.parametrize("kind,p,d", BRIDGE)
def test_bridge_orbits_equal_slopes(kind, p, d):
    rep = slope_report(kind, p, d)
    extra = 1 if kind == "genus_g" else None
    assert rep.dim_sha_slopes == dim_sha(FamilySpec(kind, p, d, extra))
    assert rep.checks.ok
    assert deg_omega_from_model(family_curve(kind, p, d)) == deg_omega_value(kind, d, extra)[0]


def test_known_values():
    assert l_polynomial(family_curve("legendre", 7, 4)).L.coeffs == (1, 0, -49)
    assert l_polynomial(family_curve("legendre", 7, 3)).L.coeffs == (1, -2, 49)
    assert l_polynomial(family_curve("genus_g", 5, 2)).L.coeffs == (1, -10, 25)


def test_newton_slopes_and_dim():
    assert newton_slopes(LPolynomial((1, 0, -25), 5)) == [1, 1]
    assert newton_slopes(LPolynomial((1, 6, 25), 5)) == [0, 2]
    assert newton_slopes(LPolynomial((1, 0, 0, 0, -2401), 7)) == [1] * 4
    assert newton_slopes(LPolynomial((1, 0, 5, 0, 25), 5)) == [Fraction(1, 2)] * 4

    assert dim_sha_from_slopes(LPolynomial((1, 0, -25), 5), CurveContext(2)) == 1
    assert dim_sha_from_slopes(LPolynomial((1, 6, 25), 5), CurveContext(2)) == 0


def test_checks_reject_bad_polynomials():
    assert not check_l_polynomial(LPolynomial((1, 0, -24), 5)).ok
    assert check_l_polynomial(LPolynomial((1, -2, 49), 7)).ok


def test_places_count():
    # number of places of degree <= 2 over F_5: 1 + 5 + (25 - 5) / 2
    assert len(places(5, 2)) == 1 + 5 + 10


def test_conductor_and_validation():
    assert conductor_degree(family_curve("legendre", 7, 5)) == 8
    with pytest.raises(ValueError):
        WeierstrassCurve(3, a4=(0, 1), a6=(1,))
    with pytest.raises(ValueError):
        WeierstrassCurve(7, a4=(1,), a6=(1,))  # constant curve
    with pytest.raises(ValueError):
        l_polynomial(family_curve("legendre", 5, 3), q=49)


def test_frobenius_pullback_offsets():
    rows = frobenius_pullback_check("sextic", 7, 1)
    assert len({r.offset for r in rows}) == 1 and rows[0].offset == -1
    ratios = [r.ratio for r in rows]
    assert ratios == sorted(ratios) and ratios[-1] < 1
    assert ratios == [0, Fraction(1, 2), Fraction(8, 9), Fraction(57, 58)]
