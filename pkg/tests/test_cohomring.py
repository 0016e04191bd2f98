from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqmirror.cohomring import CohomRelation, d_dp, reduce, restrict
from eqmirror.errors import NotARoot, SpecError
from eqmirror.scalars import params
from eqmirror.series import QSeries

mu, nu = params("mu nu")
P2 = CohomRelation.parse("p^2")
PMU = CohomRelation.parse("p*(p+mu)")
CUBE = CohomRelation.parse("(p+nu)^3")


def test_reduce_examples():
    p = P2.p()
    assert reduce(P2, [0, 0, 1]) == P2.element([0, 0])
    assert (3 * p + nu) * (p + nu) == P2.element([nu * nu, 4 * nu])
    assert (3 * p + nu) ** 2 == P2.element([nu * nu, 6 * nu])


def test_cubic_relation():
    p = CUBE.p()
    assert CUBE.degree == 3
    assert p**3 == CUBE.element([-(nu**3), -3 * nu * nu, -3 * nu])


def test_restrict_and_derivative():
    a, b = nu, mu + 1
    e = PMU.element([a, b])
    assert e.restrict(0) == a
    assert e.restrict(-mu) == a - mu * b
    assert e.d_dp() == PMU.element([b, 0])
    assert PMU.element([a, 0]).d_dp() == PMU.element([0, 0])


def test_restrict_non_root():
    with pytest.raises(NotARoot):
        PMU.element([1, 1]).restrict(1)


def test_series_helpers():
    s = QSeries([PMU.one(), PMU.p() * 3], 1)
    assert restrict(s, -mu) == QSeries([Fraction(1), -3 * mu], 1)
    assert d_dp(s) == QSeries([PMU.element([0, 0]), PMU.one() * 3], 1)


@pytest.mark.parametrize(
    "text, message",
    [("p^2+1", "not linear"), ("q^2", "does not involve p"), ("(p+mu", "cannot parse")],
)
def test_bad_relations_name_the_field(text, message):
    with pytest.raises(SpecError) as info:
        CohomRelation.parse(text)
    assert info.value.field == "relation"
    assert message in str(info.value)


coef = st.fractions(min_value=-8, max_value=8, max_denominator=5)


@st.composite
def elements(draw, relation=PMU):
    return relation.element([draw(coef) + draw(coef) * mu for _ in range(relation.degree)])


@given(elements(), elements(), elements())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a * PMU.one() == a


@given(elements())
def test_lagrange_reconstruction(e):
    p = PMU.p()
    at0, atmu = e.restrict(0), e.restrict(-mu)
    assert (p + mu) * (at0 / mu) - p * (atmu / mu) == e


@given(elements(CUBE))
def test_inverse_when_unit(e):
    if e.restrict(-nu):
        assert e * e.inverse() == CUBE.one()
