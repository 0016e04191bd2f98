"""The acceptance suite behind ``eqmirror verify-all``.

Each criterion runs a set of exact checks against published values from
:mod:`eqmirror.reference` and reports every check separately, so a known
disagreement shows up as a failed check with its explanation instead of
being hidden.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .birkhoff import interpolated_j, q_pole_profile, reconstruct, times_linear_product
from .cohomring import CohomRelation
from .ifunc import PFOperator, ToricSpec, apply_pf, euler_equiv
from .localize import (
    brute_force_classes,
    check_admissibility,
    enumerate_trees,
    refined_gf,
)
from .mirrormap import closed_form, compare, restricted_potential, run_pipeline, to_potential
from .reference import (
    INTERP_T,
    INTERP_T0,
    INTERP_W,
    REFINED_TABLE,
    REFINED_X1,
    REFINED_X1_X2,
    REFINED_X3_ZERO,
    XI1_SERIES,
    XI2_MU1_SERIES,
    XI2_MU_SERIES,
)
from .scalars import OMEGA, Cyclotomic, param, params, render
from .series import LogSeries, QSeries, invert_mirror_map

__all__ = ["Check", "CriterionResult", "CRITERIA", "run_all", "run_criterion"]


@dataclass
class Check:
    label: str
    passed: bool
    detail: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, label: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(label, bool(passed), detail))
        return bool(passed)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [c.label for c in self.checks if not c.passed]
        tail = f" (failed: {'; '.join(failed)})" if failed else ""
        return f"[{status}] criterion {self.number}: {self.title}{tail}"

    def render(self) -> str:
        out = [self.line()]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            out.append(f"    {mark} {c.label}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(out)

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "checks": [{"label": c.label, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


P2 = CohomRelation.parse("p^2")


def xi1_spec(nu=1, order: int = 6) -> ToricSpec:
    return ToricSpec([1, 1, 1, -3], [0, 0, nu, -nu], P2, order=order, name="Xi1")


def xi2_spec(mu, nu=1, order: int = 4) -> ToricSpec:
    rel = CohomRelation([(Fraction(0), 1), (-mu, 1)], "p*(p+mu)")
    return ToricSpec([1, 1, 1, -3], [0, mu, nu, -2 * nu], rel, order=order, name="Xi2")


def twist_spec(k: int, mu, order: int = 6) -> ToricSpec:
    return ToricSpec([1, 1, 1, -1, -1, -1], [0, 0, mu / k, -mu / k, -mu, -mu], P2, order=order, name=f"twist{k}")


def nu_spec(nu1, nu2, order: int = 5) -> ToricSpec:
    return ToricSpec([1, 1, 1, -1, -1, -1], [0, 0, 1, -1, -nu1, -nu2], P2, order=order, name="nu-model")


def _series(coeffs, order=None, var="x") -> QSeries:
    return QSeries([Fraction(0)] + list(coeffs), order, var=var)


def _poly(coeffs, name):
    x = param(name)
    return sum((c * x**i for i, c in enumerate(coeffs)), Fraction(0))


def _log1p(c, order: int) -> QSeries:
    """``c * log(1 + q)``."""
    return QSeries([Fraction(0)] + [c * Fraction((-1) ** (j - 1), j) for j in range(1, order + 1)], order)


# -- criteria -----------------------------------------------------------------


def criterion_1() -> CriterionResult:
    r = CriterionResult(1, "Xi1 pipeline at nu=1 gives the printed W through x^6")
    W = to_potential(run_pipeline(xi1_spec()).J)
    r.add("W equals printed series", compare(W, _series(XI1_SERIES)).equal, W.render())
    r.add("W equals the Xi1 product formula", compare(W, closed_form("xi1", 6)).equal)
    r.add("W_hat factors as prefactor * W", W.factorizes, f"prefactor {W.prefactor}")
    return r


def criterion_2() -> CriterionResult:
    r = CriterionResult(2, "PF operators annihilate the I-functions through q^6")
    mu, nu = params("mu nu")
    from .ifunc import build_I

    I1 = build_I(xi1_spec(nu, 6))
    res = apply_pf(PFOperator.D1(nu), I1)
    r.add("D1 I1 = 0 (symbolic nu)", not any(res.coeffs), f"{sum(1 for c in res.coeffs if c)} nonzero terms")
    I2 = build_I(xi2_spec(mu, nu, 6))
    res = apply_pf(PFOperator.D2(mu, nu), I2)
    r.add("D2 I2 = 0 (symbolic mu, nu)", not any(res.coeffs), f"{sum(1 for c in res.coeffs if c)} nonzero terms")
    return r


def criterion_3() -> CriterionResult:
    r = CriterionResult(3, "Xi2 pipeline with symbolic mu, then mu=1")
    mu = param("mu")
    W = to_potential(run_pipeline(xi2_spec(mu)).J, prefactor="2 + (5 - 3*mu)*p")
    expected = _series([_poly(c, "mu") for c in XI2_MU_SERIES])
    r.add("symbolic W equals printed coefficients", compare(W, expected).equal, W.render())
    r.add("W_hat factors as prefactor * W", W.factorizes, f"prefactor {W.prefactor}")
    W1 = W.substitute({"mu": 1})
    r.add("mu=1 equals printed series", compare(W1, _series(XI2_MU1_SERIES)).equal, W1.render())
    rep = compare(W1, closed_form("xi2", 4), "up_to_scalar")
    r.add("mu=1 equals Xi2 product formula up to -1", rep.equal and rep.scalar == -1, rep.render())
    return r


def criterion_4() -> CriterionResult:
    r = CriterionResult(4, "interpolated J: mirror maps and W at p=0 exact in w")
    w = param("w")
    pair = run_pipeline(xi1_spec(1, 4)).pair
    J = interpolated_j(pair, "w")
    t0 = QSeries([Fraction(0)] + [a + b * w for a, b in INTERP_T0], 4)
    t = QSeries([Fraction(0)] + [a + b * w for a, b in INTERP_T], 4)
    r.add("t0 through q^4", J.t0 == t0, J.t0.render())
    r.add("t through q^4", J.t.log_coefficient == 1 and J.t.tail == t, J.t.render())
    W, scale = restricted_potential(J, 0)
    expected = _series([_poly(c, "w") for c in INTERP_W])
    r.add("W|p=0 through x^4", compare(W, expected).equal, f"{W.render()} (scale {render(scale)})")
    W0 = W.substitute({"w": 0})
    r.add("w=0 reduces to the Xi1 series", compare(W0, _series(XI1_SERIES[:4])).equal)
    return r


def criterion_5() -> CriterionResult:
    r = CriterionResult(5, "special form of Q_k for Xi1, k <= 4")
    nu = param("nu")
    pair = run_pipeline(xi1_spec(nu, 4)).pair
    profiles = q_pole_profile(pair)
    ok = all(
        p.max_degree is not None
        and p.max_degree <= 0
        and all(any(a == -nu / m for m in range(1, p.k + 1)) for a in p.poles)
        for p in profiles
    )
    r.add(
        "Q_k is a polynomial in 1/(m hbar + nu), m <= k",
        ok,
        "; ".join(p.render() for p in profiles),
    )
    for k in range(1, 5):
        poly = all(c.is_polynomial() for row in times_linear_product(pair, nu, k) for c in row)
        worst = max(profiles[k - 1].poles.values())
        r.add(
            f"Q_{k} * prod_(m<={k}) (m hbar + nu) is polynomial",
            poly,
            "" if poly else f"pole multiplicity up to {worst}, one factor per pole is not enough",
        )
    return r


def criterion_6() -> CriterionResult:
    r = CriterionResult(6, "twisted O(k)+O(-2-k) vectors: mirror map and W_k through x^6")
    mu = param("mu")
    for k in (1, 2, 3):
        J = run_pipeline(twist_spec(k, mu)).J
        tail = _log1p(Fraction(k * (2 + k)), 6)
        r.add(f"k={k}: t = log q + {k * (2 + k)} log(1+q)", J.t.log_coefficient == 1 and J.t.tail == tail)
        W = to_potential(J)
        rep = compare(W, closed_form("wk", 6, k=k))
        detail = f"prefactor {W.prefactor}"
        if not rep.equal:
            flipped = closed_form("wk", 6, k=k).series.compose(QSeries([0, -1], 6, var="x")) * -1
            same = compare(W, flipped).equal
            detail += f"; {rep.render()}; pipeline equals -W_k(-x): {same}"
        r.add(f"k={k}: W equals W_k", rep.equal and W.factorizes, detail)
    return r


def criterion_7() -> CriterionResult:
    r = CriterionResult(7, "Euler-class equivalences mod p^2")
    mu, nu = params("mu nu")
    spec = lambda ch, ws: ToricSpec(ch, ws, P2)
    for k in range(1, 5):
        a = spec([1, 1, k, -2 - k], [0, 0, mu, -mu])
        b = spec([1, 1] + [1] * k + [-1] * (2 + k), [0, 0] + [mu] * k + [-mu] * (2 + k))
        rep = euler_equiv(a, b)
        r.add(f"(kp+mu)((-2-k)p-mu) ~ (p+mu)^k(-p-mu)^(2+k), k={k}", rep.equivalent, f"scalar {render(rep.scalar)}")
    rep = euler_equiv(spec([1, 1, -3], [0, 0, -nu]), spec([1, 1, -2, -1], [0, 0, -nu, -nu]))
    r.add("(-3p-nu) ~ (-2p-nu)(-p-nu)", rep.equivalent, f"scalar {render(rep.scalar)}")
    for n in (1, 2, 3):
        opened = spec([1, 1, n, -n - 1, -1], [0, 0, mu, -mu, -mu])
        split = spec([1, 1, n, -n - 1, -1], [0, 0, mu, -mu, -mu])
        curve = spec([1, 1, n, -2 - n], [0, 0, mu, -mu])
        r.add(f"open-string vector = split curve vector, n=k={n}", euler_equiv(opened, split, strict=True).equivalent)
        rep = euler_equiv(curve, split)
        r.add(f"curve vector ~ split curve vector, k={n}", rep.equivalent, f"scalar {render(rep.scalar)}")
    return r


def criterion_8() -> CriterionResult:
    r = CriterionResult(8, "nu-model with symbolic nu1, nu2 through x^5")
    a, b = params("nu1 nu2")
    J = run_pipeline(nu_spec(a, b)).J
    c = a * b + a + b
    r.add("t = log q + (nu1 nu2 + nu1 + nu2) log(1+q)", J.t.log_coefficient == 1 and J.t.tail == _log1p(c, 5))
    r.add("t0 = nu1 nu2 log(1+q)", J.t0 == _log1p(a * b, 5))
    W = to_potential(J)
    pre = W.prefactor
    r.add(
        "prefactor p-part is (2 nu1 nu2 + nu1 + nu2) up to the global sign",
        W.factorizes and -pre.coords[1] == 2 * a * b + a + b,
        f"prefactor {pre}",
    )
    r.add(
        "prefactor scalar part is nu1 + nu2 up to the global sign",
        -pre.coords[0] == a + b,
        f"found {render(-pre.coords[0])}; nu1 + nu2 has the wrong weight degree",
    )
    r.add("closed form W_nu equals the pipeline", compare(W, closed_form("wnu", 5, nu1=a, nu2=b)).equal)
    r.add("W_nu(1,1) = Xi1", compare(closed_form("wnu", 6, nu1=1, nu2=1), closed_form("xi1", 6)).equal)
    rep = compare(closed_form("wnu", 6, nu1=1, nu2=2), closed_form("xi2", 6), "up_to_scalar")
    r.add("W_nu(1,2) = Xi2 up to 1/2", rep.equal and rep.scalar == Fraction(1, 2), rep.render())
    return r


def criterion_9() -> CriterionResult:
    r = CriterionResult(9, "localization: refined generating function through degree 6")
    F = refined_gf(6)
    missing = [k for k, v in REFINED_TABLE.items() if F.coefficient(k) != v]
    extra = [e for (_, e) in F.terms if e not in REFINED_TABLE]
    r.add("every printed coefficient of F(w)", not missing and not extra, f"{len(REFINED_TABLE)} monomials")
    G = F.specialize({"x3": 0})
    r.add(
        "x3=0 specialization",
        {e: c for (_, e), c in G.terms.items()} == REFINED_X3_ZERO,
    )
    s12 = F.specialize({"x1": 1, "x2": 1, "x3": 0}).as_series()
    r.add("x1=x2=1, x3=0 specialization", s12 == _series(REFINED_X1_X2, var="w"))
    s1 = F.specialize({"x1": 1, "x2": 0, "x3": 0}).as_series()
    r.add("x1=1, x2=x3=0 specialization", s1 == _series(REFINED_X1, var="w"))
    deriv = QSeries(s12.theta().coeffs, 6, var="x")
    rep = compare(deriv, _series(XI2_MU1_SERIES), "up_to_scalar")
    r.add("w d/dw of the two-curve series vs the mu=1 pipeline", rep.equal and rep.scalar == -1, rep.render())
    r.add("w d/dw of the two-curve series equals Xi2 through w^6", compare(deriv, closed_form("xi2", 6)).equal)
    total = F.specialize({"x1": 1, "x2": 1, "x3": 1}).as_series()
    r.add("totals 3, -45/8, 244/9", total.coeffs[1:4] == [3, Fraction(-45, 8), Fraction(244, 9)])
    w = OMEGA
    good = [(1, w, w * w), (Fraction(5, 2), Fraction(5, 2) * w, Fraction(5, 2) * w * w), (w * w, w, 1), (w, 1, w * w)]
    r.add("(1, omega, omega^2), scalings and permutations admissible", all(check_admissibility(x) for x in good))
    r.add("(1, 2, 3) not admissible", not check_admissibility((1, 2, 3)))
    return r


def criterion_10(seed: int = 0, samples: int = 20) -> CriterionResult:
    r = CriterionResult(10, "property suites (deterministic sample)")
    rng = random.Random(seed)
    mu, nu = params("mu nu")

    def scalar(kind):
        f = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if kind == 0:
            return f
        if kind == 1:
            return Cyclotomic(f, Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
        return (mu * f + rng.randint(-3, 3)) / (nu + rng.randint(1, 4))

    ok = True
    for i in range(samples):
        a, b, c = (scalar(i % 3) for _ in range(3))
        ok &= a + b == b + a and a * b == b * a
        ok &= (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
        ok &= a * (b + c) == a * b + a * c
        if a:
            ok &= a * (1 / a) == 1
    r.add("field axioms", ok)

    ok = True
    for _ in range(samples):
        f = QSeries([Fraction(rng.randint(-5, 5)) for _ in range(7)], 6)
        g = QSeries([Fraction(rng.randint(-5, 5)) for _ in range(7)], 6)
        ok &= (f * g).theta() == f.theta() * g + f * g.theta()
    r.add("theta is a derivation", ok)

    ok = True
    for _ in range(samples):
        tail = QSeries([0] + [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(6)], 6)
        q = invert_mirror_map(LogSeries(Fraction(1), tail))
        # log q(x) + tail(q(x)) = log x  <=>  q(x) exp(tail(q(x))) = x
        back = q * tail.compose(q).exp()
        ok &= back == QSeries([0, 1], 6, var="x")
    r.add("mirror-map reversion residual is O(x^(N+1))", ok)

    res = run_pipeline(xi1_spec(nu, 4))
    rec = reconstruct(res.pair)
    r.add("Q^-1 R = S", all(rec[k] == res.S.mats[k] for k in range(5)))

    F = refined_gf(6)
    r.add("refined coefficients are S3-symmetric", F.is_symmetric())
    r.add("refined coefficients are rational", all(isinstance(v, Fraction) for v in F.terms.values()))

    ok = True
    for d in range(1, 5):
        trees = enumerate_trees(d)
        count, mass = brute_force_classes(d)
        ok &= count == len(trees) and mass == sum(Fraction(1, t.automorphisms) for t in trees)
    r.add("tree counts and automorphisms match the brute-force enumerator, d <= 4", ok)
    return r


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_criterion(n: int) -> CriterionResult:
    return CRITERIA[n]()


def run_all(numbers=None) -> list[CriterionResult]:
    return [run_criterion(n) for n in (numbers or sorted(CRITERIA))]
