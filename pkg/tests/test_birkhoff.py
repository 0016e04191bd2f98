from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqmirror.birkhoff import (
    BirkhoffPair,
    FundamentalSolution,
    birkhoff_factorize,
    birkhoff_truncated,
    fundamental_solution,
    interpolated_j,
    j_function,
    reconstruct,
)
from eqmirror.cohomring import CohomRelation
from eqmirror.errors import DegenerateBasis, NotInterpolable, WindowExhausted
from eqmirror.hbar import HRational
from eqmirror.ifunc import ToricSpec, build_I, parse_spec
from eqmirror.mirrormap import run_pipeline
from eqmirror.scalars import params, substitute
from eqmirror.series import QSeries

mu, nu = params("mu nu")
P2 = CohomRelation.parse("p^2")
PMU = CohomRelation.parse("p*(p+mu)")
ONE, ZERO = HRational.const(Fraction(1)), HRational()


def xi1(nu_value=1, order=3):
    return ToricSpec([1, 1, 1, -3], [0, 0, nu_value, -nu_value], P2, order=order)


def xi2(order=3):
    return ToricSpec([1, 1, 1, -3], [0, mu, 1, -2], PMU, order=order)


def at_w(series, value):
    return series.map(lambda c: substitute(c, {"w": value}))


def kp2_mirror_tail(order):
    """3 sum (-1)^k (3k-1)!/(k!)^3 q^k, the local P^2 mirror map."""
    return QSeries(
        [0] + [Fraction(3 * (-1) ** k * factorial(3 * k - 1), factorial(k) ** 3) for k in range(1, order + 1)],
        order,
    )


def test_s0_is_identity():
    S = fundamental_solution(build_I(xi1()))
    assert S.mats[0] == [[ONE, ZERO], [ZERO, ONE]]


def test_two_of_three_basis_for_two_curves():
    I = build_I(xi2())
    a = birkhoff_factorize(fundamental_solution(I, ["p=0", "p=-mu"]))
    b = birkhoff_factorize(fundamental_solution(I, ["p=0", "d/dp p=0"]))
    assert j_function(a).t.tail == j_function(b).t.tail


@pytest.mark.parametrize(
    "spec, basis",
    [
        (xi1(), ["p=0", "p=0"]),
        (xi1(), ["d/dp d/dp p=0", "p=0"]),
        (xi2(), ["p=1", "p=0"]),
        (xi2(), ["p=0"]),
    ],
)
def test_degenerate_basis(spec, basis):
    with pytest.raises(DegenerateBasis):
        fundamental_solution(build_I(spec), basis)


def test_no_positive_powers_gives_identity_q():
    pair = run_pipeline(xi1(1, 3)).pair
    again = birkhoff_factorize(FundamentalSolution(pair.R, [], P2))
    n = len(pair.R[0])
    ident = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    zero = [[ZERO] * n for _ in range(n)]
    assert again.Q == [ident] + [zero] * (len(pair.R) - 1)
    assert again.R == pair.R


@pytest.mark.parametrize("spec", [xi1(nu, 3), xi2(3), ToricSpec([1, 1, 1, -1, -1, -1], [0, 0, mu, -mu, -mu, -mu], P2, order=3)])
def test_reconstruction(spec):
    res = run_pipeline(spec)
    assert reconstruct(res.pair) == res.S.mats


@settings(max_examples=10)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool))
def test_reconstruction_random_weight(value):
    res = run_pipeline(xi1(value, 3))
    assert reconstruct(res.pair) == res.S.mats
    for Qk in res.pair.Q[1:]:
        for row in Qk:
            for x in row:
                assert all(e >= 0 for e in x.laurent(-6, 6))
    for Rk in res.pair.R[1:]:
        for row in Rk:
            for x in row:
                assert all(e < 0 for e in x.laurent(-6, 6))


def test_windowed_factorization_agrees_with_exact():
    res = run_pipeline(xi1(1, 3))
    Q, R = birkhoff_truncated(res.S, 8)
    for k in range(4):
        for i in range(2):
            for j in range(2):
                exact_r = {e: c for e, c in res.pair.R[k][i][j].laurent(-8, 0).items() if c}
                assert exact_r == R[k][i][j].coeffs
                hi = Q[k][i][j].hi
                exact_q = {e: c for e, c in res.pair.Q[k][i][j].laurent(0, hi).items() if c}
                assert exact_q == Q[k][i][j].coeffs


def test_window_exhausted():
    with pytest.raises(WindowExhausted):
        birkhoff_truncated(run_pipeline(xi1(1, 3)).S, 1)


def test_trivial_mirror_map_for_conifold():
    J = run_pipeline(parse_spec("1 1 -1 -1\n0 0 0 0\np^2", 4)).J
    assert J.t.log_coefficient == 1
    assert not any(J.t.tail.coeffs)


def test_xi1_mirror_map_first_coefficient():
    J = run_pipeline(xi1(1, 2)).J
    # q-linear 1/hbar part of I: -(1 + 2h)/h^2 -> -2/h, giving t0 = -2q
    assert J.t0.coeffs[1] == -2


@pytest.mark.parametrize("mode", ["inverse", "literal"])
def test_interpolation_endpoints(mode):
    res = run_pipeline(xi1(1, 4))
    J = interpolated_j(res.pair, "w", mode=mode)
    assert at_w(J.t0, 0) == res.J.t0
    assert at_w(J.t.tail, 0) == res.J.t.tail
    # w = 1 uses the unfactorized S, i.e. the local P^2 mirror map
    assert at_w(J.t.tail, 1) == kp2_mirror_tail(4)
    assert at_w(J.t0, 1) == kp2_mirror_tail(4) * Fraction(1, 3)


def test_interpolation_modes_differ_inside():
    res = run_pipeline(xi1(1, 3))
    a = interpolated_j(res.pair, "w", mode="inverse")
    b = interpolated_j(res.pair, "w", mode="literal")
    assert at_w(a.t.tail, Fraction(1, 2)) != at_w(b.t.tail, Fraction(1, 2))


def test_not_interpolable():
    h = HRational.hbar()
    ident = [[ONE, ZERO], [ZERO, ONE]]
    pair = BirkhoffPair([ident, [[h, ZERO], [ZERO, ZERO]]], [ident, [[ZERO, ZERO], [ZERO, ZERO]]], P2)
    with pytest.raises(NotInterpolable):
        interpolated_j(pair)
