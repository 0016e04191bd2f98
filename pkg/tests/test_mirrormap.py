from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqmirror.cohomring import CohomRelation
from eqmirror.ifunc import ToricSpec
from eqmirror.mirrormap import (
    GWPotential,
    closed_form,
    compare,
    parse_prefactor,
    restricted_potential,
    run_pipeline,
    to_potential,
)
from eqmirror.scalars import params
from eqmirror.series import QSeries

mu, nu = params("mu nu")
P2 = CohomRelation.parse("p^2")


def product_formula(c, k, sign=None):
    sign = (-1) ** (k - 1) if sign is None else sign
    return Fraction(sign * prod(c * k + j for j in range(1, k)), k * k * factorial(k - 1))


def xs(coeffs, order=None):
    return QSeries([0] + list(coeffs), order, var="x")


def test_xi1_closed_form_values():
    assert closed_form("xi1", 6).series == xs(
        [1, Fraction(-7, 4), Fraction(55, 9), Fraction(-455, 16), Fraction(3876, 25), Fraction(-33649, 36)]
    )


def test_xi2_closed_form_values():
    assert closed_form("xi2", 2).series == xs([2, Fraction(-11, 2)])


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_wk_against_direct_product(k):
    c = k * (2 + k)
    want = [product_formula(c, j, (-1) ** ((j - 1) * k)) for j in range(1, 7)]
    assert closed_form("wk", 6, k=k).series == xs(want)


def test_wk_zero_is_dilogarithm_like():
    assert closed_form("wk", 5, k=0).series == xs([Fraction(1, j * j) for j in range(1, 6)])


def test_cross_identities():
    assert compare(closed_form("wk", 6, k=1), closed_form("xi1", 6)).equal
    assert compare(closed_form("wnu", 6, nu1=1, nu2=1), closed_form("xi1", 6)).equal
    rep = compare(closed_form("wnu", 6, nu1=1, nu2=2), closed_form("xi2", 6), "up_to_scalar")
    assert rep.equal and rep.scalar == Fraction(1, 2)


@pytest.mark.parametrize(
    "pot, lead",
    [
        (closed_form("xi1", 3), 1),
        (closed_form("xi2", 3), 2),
        (closed_form("wk", 3, k=2), 1),
        (closed_form("wnu", 3, nu1=mu, nu2=nu), 1),
    ],
)
def test_degree_one_is_empty_product(pot, lead):
    assert pot[1] == lead


def test_symbolic_wnu():
    pot = closed_form("wnu", 2, nu1=mu, nu2=nu)
    c = mu * nu + mu + nu
    assert pot[2] == -(2 * c + 1) / 4


def test_closed_form_errors():
    with pytest.raises(ValueError):
        closed_form("xi1", 0)
    with pytest.raises(ValueError):
        closed_form("wk", 3)
    with pytest.raises(ValueError):
        closed_form("nope", 3)


def test_potential_has_zero_constant_term():
    with pytest.raises(ValueError):
        GWPotential(QSeries([1, 1], 2, var="x"))


def test_render():
    assert closed_form("xi1", 3).render() == "x - 7/4 x^2 + 55/9 x^3"


def test_xi1_pipeline_low_order():
    W = to_potential(run_pipeline(ToricSpec([1, 1, 1, -3], [0, 0, 1, -1], P2, order=4)).J)
    assert compare(W, closed_form("xi1", 4)).equal
    assert W.factorizes
    assert W.prefactor == parse_prefactor("-1 - 4*p", P2)


def test_explicit_prefactor_and_leading():
    J = run_pipeline(ToricSpec([1, 1, 1, -3], [0, 0, 1, -1], P2, order=3)).J
    a = to_potential(J, prefactor="1 + 4*p")
    assert compare(a, closed_form("xi1", 3), "up_to_scalar").scalar == -1
    b = to_potential(J, leading=3)
    assert b[1] == 3 and compare(b, closed_form("xi1", 3), "up_to_scalar").scalar == 3


def test_restricted_potential():
    J = run_pipeline(ToricSpec([1, 1, 1, -3], [0, 0, 1, -1], P2, order=3)).J
    W, scale = restricted_potential(J, 0)
    assert compare(W, closed_form("xi1", 3)).equal
    assert scale == -1


def test_untwisted_k0_vector_gives_wk0():
    W = to_potential(run_pipeline(ToricSpec([1, 1, -2], [0, 0, -mu], P2, order=5)).J)
    assert compare(W, closed_form("wk", 5, k=0)).equal


def test_round_trip():
    W = to_potential(run_pipeline(ToricSpec([1, 1, 1, -3], [0, 0, 1, -1], P2, order=3)).J)
    back = GWPotential.from_dict(W.to_dict())
    assert back.series == W.series and back.prefactor == W.prefactor and back.factorizes
    sym = closed_form("wnu", 3, nu1=mu, nu2=nu)
    assert GWPotential.from_dict(sym.to_dict()).series == sym.series


def test_compare_reports_first_mismatch():
    rep = compare(closed_form("xi1", 4), closed_form("wk", 4, k=2))
    assert not rep.equal and rep.first_mismatch == 2
    with pytest.raises(ValueError):
        compare(closed_form("xi1", 1), closed_form("xi1", 1), "up_to_scalar")


coef = st.fractions(min_value=-9, max_value=9, max_denominator=6)


@given(st.lists(coef, min_size=4, max_size=4).filter(lambda cs: cs[0] != 0), coef.filter(bool))
def test_up_to_scalar_recovers_constant(cs, c):
    b = xs(cs)
    rep = compare(b * c, b, "up_to_scalar")
    assert rep.equal and rep.scalar == c
    assert compare(b, b).equal
