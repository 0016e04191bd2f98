from fractions import Fraction

import pytest

from eqmirror.cohomring import CohomRelation
from eqmirror.errors import SingularFactor, SpecError, ZeroWeightExpansion
from eqmirror.hbar import HRational
from eqmirror.ifunc import PFOperator, ToricSpec, apply_pf, build_I, euler_equiv, parse_spec
from eqmirror.scalars import params
from eqmirror.series import QSeries

mu, nu, nu1, nu2 = params("mu nu nu1 nu2")
P2 = CohomRelation.parse("p^2")
PMU = CohomRelation.parse("p*(p+mu)")


class Dual:
    """a + b*eps with eps^2 = 0; the p-coordinate mod p^2 is the eps part."""

    def __init__(self, a, b=0):
        self.a, self.b = Fraction(a), Fraction(b)

    def __mul__(self, o):
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    def inv(self):
        return Dual(1 / self.a, -self.b / self.a**2)


def oracle(charges, weights, d, h, p=0, eps=True):
    """I_d at numeric hbar and weights, at p + eps, straight from the product formula."""
    acc = Dual(1)
    for l, w in zip(charges, weights):
        if l * d >= 0:
            for m in range(1, l * d + 1):
                acc = acc * Dual(l * p + w + m * h, l if eps else 0).inv()
        else:
            for m in range(l * d + 1, 1):
                acc = acc * Dual(l * p + w + m * h, l if eps else 0)
    return acc


@pytest.mark.parametrize("nu_value", [1, 2, Fraction(3, 2)])
@pytest.mark.parametrize("h", [5, Fraction(7, 3)])
def test_xi1_coefficients_match_product_formula(nu_value, h):
    spec = ToricSpec([1, 1, 1, -3], [0, 0, nu_value, -nu_value], P2, order=3)
    I = build_I(spec)
    for d in range(4):
        want = oracle(spec.charges, spec.weights, d, Fraction(h))
        got = I.coeffs[d].coords
        assert got[0].evaluate(Fraction(h)) == want.a
        assert got[1].evaluate(Fraction(h)) == want.b


def test_xi1_q_linear_term():
    spec = ToricSpec([1, 1, 1, -3], [0, 0, 1, -1], P2, order=1)
    h = Fraction(5)
    # (-1)(-1-h)(-1-2h) / (h^2 (1+h)) = -(1+2h)/h^2
    assert build_I(spec).coeffs[1].coords[0].evaluate(h) == -(1 + 2 * h) / h**2


# integer mu makes an inner and an outer pole coincide; these values keep them apart
@pytest.mark.parametrize("mu_value", [Fraction(7, 3), Fraction(5, 2)])
def test_xi2_restrictions_match_product_formula(mu_value):
    rel = CohomRelation([(Fraction(0), 1), (Fraction(-mu_value), 1)])
    spec = ToricSpec([1, 1, 1, -3], [0, mu_value, 1, -2], rel, order=3)
    I = build_I(spec)
    h = Fraction(11, 2)
    for root in (0, -mu_value):
        s = I.restrict(root)
        for d in range(4):
            want = oracle(spec.charges, spec.weights, d, h, p=root, eps=False)
            assert s.coeffs[d].evaluate(h) == want.a


def test_leading_term_is_one():
    I = build_I(ToricSpec([1, 1, 1, -3], [0, 0, nu, -nu], P2, order=2))
    assert I.restrict(0).coeffs[0].evaluate(Fraction(3)) == 1


def test_non_equivariant_limit():
    # zero weights, everything at infinity: denominators are (l p + m hbar) only
    spec = ToricSpec([1, 1, 1, -3], [0, 0, 0, 0], P2, regimes=["inf"] * 4, order=3)
    I = build_I(spec)
    h = Fraction(13, 3)
    for d in range(1, 4):
        want = oracle(spec.charges, spec.weights, d, h)
        assert [c.evaluate(h) for c in I.coeffs[d].coords] == [want.a, want.b]


def test_conifold_is_trivial():
    I = build_I(parse_spec("1 1 -1 -1\n0 0 0 0\np^2", 3))
    assert all(not c for c in I.coeffs[1:])


def test_solution_relation_for_pmu():
    # with a + b p coordinates, mu * b = I|_{p=0} - I|_{p=-mu}
    spec = ToricSpec([1, 1, 1, -3], [0, mu, 1, -2], PMU, order=4)
    I = build_I(spec)
    lhs = I.series().map(lambda e: e.d_dp().restrict(0) * mu)
    assert lhs == I.restrict(0) - I.restrict(-mu)


def test_pf_annihilation_small_orders():
    I1 = build_I(ToricSpec([1, 1, 1, -3], [0, 0, nu, -nu], P2, order=4))
    assert not any(apply_pf(PFOperator.D1(nu), I1).coeffs)
    I2 = build_I(ToricSpec([1, 1, 1, -3], [0, mu, nu, -2 * nu], PMU, order=3))
    assert not any(apply_pf(PFOperator.D2(mu, nu), I2).coeffs)


@pytest.mark.parametrize(
    "spec",
    [
        ToricSpec([1, 1, 1, -1, -1, -1], [0, 0, mu, -mu, -mu, -mu], P2, order=3),
        ToricSpec([1, 1, 1, -1, -1, -1], [0, 0, 1, -1, -nu1, -nu2], P2, order=3),
        ToricSpec([1, 1, 2, -4], [0, 0, mu, -mu], P2, order=3),
    ],
)
def test_generic_operator_annihilates(spec):
    assert not any(apply_pf(PFOperator.generic(spec), build_I(spec)).coeffs)


def test_d1_on_constant_is_not_zero():
    res = apply_pf(PFOperator.D1(nu), QSeries([1], 2))
    h = HRational.hbar()
    assert res.coeffs[1] == nu**3 + 3 * nu**2 * h + 2 * nu * h * h


def test_euler_examples():
    spec = lambda ch, ws: ToricSpec(ch, ws, P2)
    a = spec([1, 1, -3], [0, 0, -nu])
    assert euler_equiv(a, spec([1, 1, -2, -1], [0, 0, -nu, -nu])).equivalent
    cube = spec([1, 1, -1, -1, -1], [0, 0, -nu, -nu, -nu])
    assert not euler_equiv(a, cube, strict=True).equivalent
    rep = euler_equiv(a, cube)
    assert rep.equivalent and rep.scalar == 1 / nu**2
    assert not euler_equiv(a, spec([1, 1, -2, -2], [0, 0, -nu, -nu])).equivalent


def test_euler_equiv_is_an_equivalence():
    spec = lambda ch, ws: ToricSpec(ch, ws, P2)
    a = spec([1, 1, 2, -4], [0, 0, mu, -mu])
    b = spec([1, 1, 1, 1, -1, -1, -1, -1], [0, 0, mu, mu, -mu, -mu, -mu, -mu])
    c = spec([1, 1, 2, -2, -2], [0, 0, mu, -mu, -mu])
    assert euler_equiv(a, a).equivalent
    ab, ba = euler_equiv(a, b), euler_equiv(b, a)
    assert ab.equivalent and ba.equivalent and ab.scalar * ba.scalar == 1
    if euler_equiv(b, c).equivalent:
        assert euler_equiv(a, c).equivalent


def test_singular_factor():
    with pytest.raises(SingularFactor):
        build_I(ToricSpec([1, -1], [0, 0], CohomRelation.parse("p"), order=1))


def test_zero_weight_expansion():
    spec = ToricSpec([1, 1, 1, -3], [0, 0, 0, 0], P2, regimes=["inf", "inf", "zero", None], order=1)
    with pytest.raises(ZeroWeightExpansion):
        build_I(spec)


def test_parse_spec_keyed_and_positional():
    a = parse_spec("1 1 1 -3\n0 0 nu -nu\np^2\n", 2)
    b = parse_spec("relation: p^2\ncharges: 1 1 1 -3  # comment\nweights: nu -nu\n", 2)
    assert a.charges == b.charges and a.weights == b.weights
    assert parse_spec(a.to_text()).to_text() == a.to_text()


@pytest.mark.parametrize(
    "text, field",
    [
        ("1 1 x\n0 0 0\np^2", "charges"),
        ("1 1 -2\n0 0 (\np^2", "weights"),
        ("1 1 -2\n0 0 0\np^2+1", "relation"),
        ("1 1 -2\n0 0 0", "relation"),
        ("1 1 -2\n0 0 0\np^2\nregimes: inf inf sideways", "regimes"),
        ("1 1 -2\n0 0 0\np^2\nroles: bundle bundle bundle", "roles"),
        ("1 1 -2\n0 0 0 0 0\np^2", "weights"),
        ("1 1 -2\n0 0 0\np^2\norder: many", "order"),
    ],
)
def test_spec_errors_name_the_field(text, field):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.field == field
