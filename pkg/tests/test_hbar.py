from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqmirror.errors import WindowExhausted
from eqmirror.hbar import INNER, OUTER, HLaurent, HRational

h = HRational.hbar()


def inv(a, b, tag):
    return HRational.inverse_linear(Fraction(a), Fraction(b), tag)


def test_inner_pole_expands_at_infinity():
    # 1/(2 + h) = sum (-2)^k h^(-k-1)
    assert inv(2, 1, INNER).expand_at_infinity(-4) == {-1: 1, -2: -2, -3: 4, -4: -8}


def test_outer_pole_expands_at_zero():
    assert inv(2, 1, OUTER).expand_at_zero(3) == {0: Fraction(1, 2), 1: Fraction(-1, 4), 2: Fraction(1, 8), 3: Fraction(-1, 16)}


def test_split_and_laurent():
    # h^2/(2+h) = h - 2 + 4/(2+h), plus an outer 1/(3+h)
    f = inv(2, 1, INNER) * h * h + inv(3, 1, OUTER)
    inner, outer = f.split()
    assert inner == inv(2, 1, INNER) * 4
    assert inner + outer == f
    lau = f.laurent(-3, 2)
    assert lau[-1] == 4 and lau[-3] == 16
    assert lau[0] == Fraction(-5, 3) and lau[1] == Fraction(8, 9)


def test_conflicting_tags_rejected():
    with pytest.raises(ValueError):
        inv(2, 1, INNER) + inv(2, 1, OUTER)


def test_polynomial_detection():
    assert (inv(2, 1, INNER) * HRational.linear(Fraction(2), Fraction(1))).is_polynomial()
    assert not inv(2, 1, INNER).is_polynomial()


def test_hlaurent_parts():
    # (1 + h)^2 / h + 1/(2 + h) expanded at 0
    lau = HLaurent.from_hrational((h + 1) * (h + 1) * inv(0, 1, INNER) + inv(2, 1, OUTER), 2)
    assert lau.negative_part().coeffs == {-1: 1}
    assert lau.positive_part().coeffs == {0: Fraction(5, 2), 1: Fraction(3, 4), 2: Fraction(1, 8)}


def test_hlaurent_rejects_infinite_tail():
    with pytest.raises(WindowExhausted):
        HLaurent.from_hrational(inv(2, 1, INNER), 3)


nonzero = st.integers(-5, 5).filter(bool)


@st.composite
def hrationals(draw):
    f = HRational.poly([Fraction(draw(st.integers(-4, 4))) for _ in range(3)])
    for _ in range(draw(st.integers(0, 3))):
        a, b = draw(st.integers(-6, 6)), draw(nonzero)
        # inner poles at positive alpha ratios, outer at negative, so tags never clash
        tag = INNER if -a * b >= 0 else OUTER
        f = f * inv(a, b, tag)
    return f


@given(hrationals(), hrationals(), st.integers(7, 40))
def test_evaluation_is_a_ring_map(f, g, point):
    x = Fraction(point, 7) + Fraction(1, 997)
    try:
        fx, gx = f.evaluate(x), g.evaluate(x)
    except ZeroDivisionError:
        return
    assert (f + g).evaluate(x) == fx + gx
    assert (f * g).evaluate(x) == fx * gx


@given(hrationals())
def test_split_reconstructs(f):
    inner, outer = f.split()
    assert inner + outer == f
    assert all(e < 0 for e in inner.laurent(-6, 6))
    assert all(e >= 0 for e in outer.laurent(-6, 6))
