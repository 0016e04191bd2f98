"""Equivariant twisted I-functions from toric data.

A :class:`ToricSpec` is the familiar two-row matrix of charges and weights,
together with a split cohomology relation and, for every column, a role
(base or bundle) and an expansion regime for its hbar-dependent denominator
factors:

* ``"inf"``: the factor is expanded at ``hbar = oo``.  Its pole is *inner*.
* ``"zero"``: the factor is expanded at ``hbar = 0``, i.e. in inverse powers
  of the weight.  Its pole is *outer*.

The q^d coefficient is

    prod_{l_i > 0} 1 / prod_{m=1}^{l_i d} (l_i p + w_i + m hbar)
    prod_{l_i < 0}     prod_{m=l_i d+1}^{0} (l_i p + w_i + m hbar)

reduced modulo the relation.  Coefficients are kept exact as rational
functions of hbar with tagged poles (see :mod:`eqmirror.hbar`), so no hbar
window is needed until a truncated view is requested.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cohomring import CohomElement, CohomRelation, reduce
from .errors import SingularFactor, SpecError, ZeroWeightExpansion
from .hbar import INNER, OUTER, HRational
from .scalars import RatFunc, as_scalar, parse_scalar, render, substitute
from .series import DEFAULT_ORDER, QSeries

__all__ = [
    "EulerReport",
    "IFunction",
    "PFOperator",
    "ToricSpec",
    "apply_pf",
    "build_I",
    "euler_class",
    "euler_equiv",
    "parse_spec",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

REGIME_INF = "inf"
REGIME_ZERO = "zero"
_REGIME_ALIASES = {
    "inf": REGIME_INF,
    "oo": REGIME_INF,
    "infinity": REGIME_INF,
    "hbar=inf": REGIME_INF,
    "0": REGIME_ZERO,
    "zero": REGIME_ZERO,
    "hbar=0": REGIME_ZERO,
    "-": None,
}


@dataclass
class ToricSpec:
    charges: list[int]
    weights: list
    relation: CohomRelation
    roles: list[str] = field(default_factory=list)
    regimes: list = field(default_factory=list)
    order: int = DEFAULT_ORDER
    window: int | None = None
    name: str = ""

    def __post_init__(self):
        n = len(self.charges)
        if n == 0:
            raise SpecError("charges", "no columns")
        if any(not isinstance(c, int) for c in self.charges):
            raise SpecError("charges", "charges must be integers")
        if 0 in self.charges:
            raise SpecError("charges", "zero charge")
        self.weights = [as_scalar(w) for w in self.weights]
        if len(self.weights) != n:
            raise SpecError("weights", f"expected {n} weights, got {len(self.weights)}")
        if not self.roles:
            nb = self.relation.degree
            self.roles = ["base"] * nb + ["bundle"] * (n - nb)
        if len(self.roles) != n or any(r not in ("base", "bundle") for r in self.roles):
            raise SpecError("roles", "one of base/bundle per column")
        if "base" not in self.roles:
            raise SpecError("roles", "at least one base column is required")
        for i, (l, role) in enumerate(zip(self.charges, self.roles)):
            if role == "base" and l <= 0:
                raise SpecError("roles", f"base column {i + 1} must have positive charge")
        if not self.regimes:
            self.regimes = [None] * n
        if len(self.regimes) != n:
            raise SpecError("regimes", f"expected {n} regime flags")
        regs = []
        for l, role, reg in zip(self.charges, self.roles, self.regimes):
            if reg is not None and reg not in (REGIME_INF, REGIME_ZERO):
                raise SpecError("regimes", f"unknown regime {reg!r}")
            if l < 0:
                regs.append(None)
            elif reg is None:
                regs.append(REGIME_INF if role == "base" else REGIME_ZERO)
            else:
                regs.append(reg)
        self.regimes = regs
        if self.order < 1:
            raise SpecError("order", "order must be >= 1")
        if self.window is None:
            self.window = self.order + 2

    @property
    def params(self) -> set[str]:
        out = set(self.relation.params)
        for w in self.weights:
            if isinstance(w, RatFunc):
                out.update(w.variables())
        return out

    def base_columns(self):
        return [(l, w) for l, w, r in zip(self.charges, self.weights, self.roles) if r == "base"]

    def bundle_columns(self):
        return [(l, w) for l, w, r in zip(self.charges, self.weights, self.roles) if r == "bundle"]

    def with_order(self, order: int) -> "ToricSpec":
        return ToricSpec(
            list(self.charges), list(self.weights), self.relation, list(self.roles), list(self.regimes), order, None, self.name
        )

    def substitute(self, bindings) -> "ToricSpec":
        ws = [substitute(w, bindings) for w in self.weights]
        roots = [(substitute(r, bindings), e) for r, e in self.relation.roots]
        rel = CohomRelation(roots)
        return ToricSpec(list(self.charges), ws, rel, list(self.roles), list(self.regimes), self.order, self.window, self.name)

    def to_text(self) -> str:
        lines = [
            "charges: " + " ".join(str(c) for c in self.charges),
            "weights: " + " ".join(render(w).replace(" ", "") for w in self.weights),
            "relation: " + self.relation.text,
            "roles: " + " ".join(self.roles),
            "regimes: " + " ".join(r or "-" for r in self.regimes),
            f"order: {self.order}",
        ]
        if self.name:
            lines.insert(0, f"name: {self.name}")
        return "\n".join(lines) + "\n"

    def matrix(self) -> str:
        return (
            " ".join(str(c) for c in self.charges)
            + " / "
            + " ".join(render(w).replace(" ", "") for w in self.weights)
        )


def _split_row(text: str) -> list[str]:
    text = text.strip()
    if "," in text:
        return [t.strip() for t in text.split(",") if t.strip()]
    return text.split()


def parse_spec(text: str, order: int | None = None) -> ToricSpec:
    """Read a spec file.

    The first three significant lines may be unkeyed (charges, weights,
    relation).  Keyed lines ``name:``, ``charges:``, ``weights:``,
    ``relation:``, ``roles:``, ``regimes:``, ``order:``, ``window:`` may appear
    in any order.  ``#`` starts a comment.
    """
    keyed: dict[str, str] = {}
    positional = ["charges", "weights", "relation"]
    pos = 0
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^([A-Za-z_]+)\s*:\s*(.*)$", line)
        if m and m.group(1).lower() in ("name", "charges", "weights", "relation", "roles", "regimes", "order", "window"):
            keyed[m.group(1).lower()] = m.group(2)
            continue
        while pos < len(positional) and positional[pos] in keyed:
            pos += 1
        if pos >= len(positional):
            raise SpecError("spec", f"unexpected line {line!r}")
        keyed[positional[pos]] = line
        pos += 1
    for f in ("charges", "weights", "relation"):
        if f not in keyed:
            raise SpecError(f, "missing")
    try:
        charges = [int(t) for t in _split_row(keyed["charges"])]
    except ValueError as exc:
        raise SpecError("charges", "charges must be integers") from exc
    weights = []
    for t in _split_row(keyed["weights"]):
        try:
            weights.append(parse_scalar(t))
        except (ValueError, SyntaxError, ZeroDivisionError) as exc:
            raise SpecError("weights", f"cannot parse {t!r}") from exc
    if len(weights) < len(charges):
        # unprinted leading weights are zero, as in the usual two-row matrices
        weights = [_ZERO] * (len(charges) - len(weights)) + weights
    relation = CohomRelation.parse(keyed["relation"])
    roles = _split_row(keyed["roles"]) if "roles" in keyed else []
    regimes = []
    if "regimes" in keyed:
        for t in _split_row(keyed["regimes"]):
            if t.lower() not in _REGIME_ALIASES:
                raise SpecError("regimes", f"unknown regime {t!r}")
            regimes.append(_REGIME_ALIASES[t.lower()])
    try:
        spec_order = int(keyed.get("order", order or DEFAULT_ORDER))
        window = int(keyed["window"]) if "window" in keyed else None
    except ValueError as exc:
        raise SpecError("order", "order/window must be integers") from exc
    if order is not None:
        spec_order = order
    return ToricSpec(charges, weights, relation, roles, regimes, spec_order, window, keyed.get("name", ""))


# -- the I-function -----------------------------------------------------------


def _eps_mul(a: list, b: list, e: int) -> list:
    out = [None] * e
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), e - i)):
            y = b[j]
            if not y:
                continue
            t = x * y
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return [HRational() if v is None else v for v in out]


def _inverse_factor(a0, l, m, tag, e):
    """Local expansion of ``1 / (a0 + l*eps + m*hbar)`` to ``eps^{e-1}``."""
    if tag == OUTER and not a0:
        raise ZeroWeightExpansion("factor expanded at hbar=0 has zero weight at a root")
    inv = HRational.inverse_linear(a0, Fraction(m), tag)
    out = []
    power = HRational.const(_ONE)
    for j in range(e):
        power = power * inv
        out.append(power * Fraction((-l) ** j))
    return out


@dataclass
class IFunction:
    """Body coefficients ``I_0 .. I_N`` of ``q^{p/hbar} * sum_d I_d q^d``."""

    spec: ToricSpec
    coeffs: list  # CohomElement with HRational coordinates
    prefactor: bool = True

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def relation(self) -> CohomRelation:
        return self.spec.relation

    def series(self) -> QSeries:
        return QSeries(self.coeffs, self.order)

    def coordinate(self, i: int) -> QSeries:
        return QSeries([c.coords[i] for c in self.coeffs], self.order)

    def restrict(self, r) -> QSeries:
        from .cohomring import restrict

        return restrict(self.series(), r)

    def laurent(self, lo: int, hi: int):
        """Annulus Laurent coefficients per degree and coordinate."""
        return [[c.laurent(lo, hi) for c in el.coords] for el in self.coeffs]

    def render(self) -> str:
        lines = []
        for d, el in enumerate(self.coeffs):
            for i, c in enumerate(el.coords):
                if not c:
                    continue
                mono = "1" if i == 0 else ("p" if i == 1 else f"p^{i}")
                lines.append(f"q^{d} [{mono}]: {c}")
        return "\n".join(lines)


def build_I(spec: ToricSpec, order: int | None = None) -> IFunction:
    """Exact body coefficients of the twisted I-function up to ``q^order``."""
    n_ord = spec.order if order is None else order
    rel = spec.relation
    roots = rel.roots
    # running local product per root, as eps-polynomials of HRationals
    local = [[HRational.const(_ONE)] + [HRational()] * (e - 1) for _, e in roots]
    out = [rel.one().map(HRational.const)]
    for d in range(1, n_ord + 1):
        for ri, (r, e) in enumerate(roots):
            acc = local[ri]
            for l, w, reg in zip(spec.charges, spec.weights, spec.regimes):
                a0 = l * r + w
                if l > 0:
                    tag = INNER if reg == REGIME_INF else OUTER
                    for m in range(l * (d - 1) + 1, l * d + 1):
                        acc = _eps_mul(acc, _inverse_factor(a0, l, m, tag, e), e)
                else:
                    for m in range(l * d + 1, l * (d - 1) + 1):
                        if m == 0:
                            _check_m0(rel, l, w)
                        fac = [HRational.linear(a0, Fraction(m)), HRational.const(Fraction(l))]
                        acc = _eps_mul(acc, fac, e)
            local[ri] = acc
        out.append(CohomElement(rel, rel.from_local(local)))
    return IFunction(spec, out)


def _check_m0(rel: CohomRelation, l: int, w):
    el = reduce(rel, [w, Fraction(l)])
    if not el:
        raise SingularFactor(f"factor {l}*p + {render(w)} vanishes in the cohomology ring")


# -- Picard-Fuchs operators ---------------------------------------------------


class PFOperator:
    """``sum_s q^s P_s(theta)`` with ``P_s`` polynomial in theta over K[hbar].

    ``terms`` maps ``(s, j)`` to the HRational polynomial multiplying
    ``q^s theta^j``.
    """

    def __init__(self, terms: dict, name: str = ""):
        self.terms = {k: v for k, v in terms.items() if v}
        self.name = name

    @classmethod
    def from_products(cls, products: Sequence, name: str = "") -> "PFOperator":
        """Build from ``[(s, sign, [(a, b, c), ...]), ...]``.

        Each triple is the linear factor ``a*theta + b + c*hbar``.
        """
        terms: dict = {}
        for s, sign, factors in products:
            poly = {0: HRational.const(Fraction(sign))}
            for a, b, c in factors:
                nxt: dict = {}
                lin0 = HRational.linear(as_scalar(b), as_scalar(c))
                for j, coef in poly.items():
                    t0 = coef * lin0
                    nxt[j] = nxt[j] + t0 if j in nxt else t0
                    if a:
                        t1 = coef * as_scalar(a)
                        nxt[j + 1] = nxt[j + 1] + t1 if j + 1 in nxt else t1
                poly = nxt
            for j, coef in poly.items():
                key = (s, j)
                terms[key] = terms[key] + coef if key in terms else coef
        return cls(terms, name)

    @classmethod
    def D1(cls, nu) -> "PFOperator":
        nu = as_scalar(nu)
        return cls.from_products(
            [
                (0, 1, [(1, 0, 0), (1, 0, 0), (1, nu, 0)]),
                (1, -1, [(-3, -nu, 0), (-3, -nu, -1), (-3, -nu, -2)]),
            ],
            "D1",
        )

    @classmethod
    def D2(cls, mu, nu) -> "PFOperator":
        mu, nu = as_scalar(mu), as_scalar(nu)
        return cls.from_products(
            [
                (0, 1, [(1, 0, 0), (1, mu, 0), (1, nu, 0)]),
                (1, 1, [(3, 2 * nu, 0), (3, 2 * nu, 1), (3, 2 * nu, 2)]),
            ],
            "D2",
        )

    @classmethod
    def generic(cls, spec: ToricSpec) -> "PFOperator":
        """``prod_{l>0} prod_k (l theta + w - k hbar) - q prod_{l<0} prod_k (l theta + w - k hbar)``."""
        pos, neg = [], []
        for l, w in zip(spec.charges, spec.weights):
            target = pos if l > 0 else neg
            for k in range(abs(l)):
                target.append((l, w, -k))
        return cls.from_products([(0, 1, pos), (1, -1, neg)], "generic")

    def render(self) -> str:
        parts = []
        for (s, j), c in sorted(self.terms.items()):
            mono = []
            if s:
                mono.append("q" if s == 1 else f"q^{s}")
            if j:
                mono.append("theta" if j == 1 else f"theta^{j}")
            parts.append(f"({c})" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts) if parts else "0"

    __str__ = render


def _shift_element(rel: CohomRelation, k: int, with_p: bool) -> CohomElement:
    """``p + k*hbar`` (or ``k*hbar``) as a ring element with HRational coordinates."""
    p_coeff = HRational.const(_ONE) if with_p else HRational()
    return reduce(rel, [HRational.linear(_ZERO, Fraction(k)), p_coeff])


def apply_pf(op: PFOperator, f, prefactor: bool | None = None) -> QSeries:
    """Residual ``op(f)`` as a q-series.

    ``f`` may be an :class:`IFunction` or a QSeries of ring elements / scalars.
    With the ``q^{p/hbar}`` prefactor, theta acts on ``q^d`` as ``p + d*hbar``;
    without it, as ``d*hbar``.
    """
    if isinstance(f, IFunction):
        coeffs = f.coeffs
        rel = f.relation
        if prefactor is None:
            prefactor = f.prefactor
    else:
        coeffs = list(f.coeffs)
        rel = next((c.relation for c in coeffs if isinstance(c, CohomElement)), None)
        if prefactor is None:
            prefactor = False
        if prefactor and rel is None:
            raise ValueError("the q^{p/hbar} prefactor needs ring-valued coefficients")
    n = len(coeffs) - 1

    def lift(c):
        if isinstance(c, CohomElement):
            return c.map(lambda x: x if isinstance(x, HRational) else HRational.const(x))
        return HRational.const(as_scalar(c)) if not isinstance(c, HRational) else c

    coeffs = [lift(c) for c in coeffs]
    out = []
    for d in range(n + 1):
        acc = None
        for (s, j), coef in op.terms.items():
            k = d - s
            if k < 0:
                continue
            val = coeffs[k]
            if j:
                if rel is not None:
                    shift = _shift_element(rel, k, prefactor)
                else:
                    shift = HRational.linear(_ZERO, Fraction(k))
                for _ in range(j):
                    val = shift * val if rel is not None else val * shift
            term = val * coef
            acc = term if acc is None else acc + term
        if acc is None:
            acc = coeffs[0] * 0
        out.append(acc)
    return QSeries(out, n)


# -- Euler-class equivalence ----------------------------------------------------


def euler_class(spec: ToricSpec) -> CohomElement:
    """``prod over bundle columns of (l p + w)`` in the ring of ``spec``."""
    rel = spec.relation
    el = rel.one()
    for l, w in spec.bundle_columns():
        el = el * reduce(rel, [w, Fraction(l)])
    return el


@dataclass
class EulerReport:
    equivalent: bool
    scalar: object  # c with e(A) = c * e(B), or None
    euler_a: CohomElement
    euler_b: CohomElement

    def __bool__(self):
        return self.equivalent

    def render(self) -> str:
        head = "equivalent" if self.equivalent else "not equivalent"
        extra = f" (scalar {render(self.scalar)})" if self.scalar is not None else ""
        return f"{head}{extra}\n  e(A) = {self.euler_a}\n  e(B) = {self.euler_b}"


def euler_equiv(spec_a: ToricSpec, spec_b: ToricSpec, strict: bool = False) -> EulerReport:
    """Compare equivariant Euler classes of the bundle parts.

    By default the classes only need to agree up to a nonzero constant that
    does not involve p (the overall normalisation of the potential absorbs it);
    the constant is reported.  ``strict=True`` demands literal equality.
    """
    if spec_a.relation != spec_b.relation:
        raise ValueError("specs must share the cohomology relation")
    if spec_a.base_columns() != spec_b.base_columns():
        raise ValueError("specs must share their base columns")
    ea, eb = euler_class(spec_a), euler_class(spec_b)
    if strict:
        ok = ea == eb
        return EulerReport(ok, _ONE if ok else None, ea, eb)
    idx = next((i for i, c in enumerate(eb.coords) if c), None)
    if idx is None:
        ok = not ea
        return EulerReport(ok, None, ea, eb)
    c = ea.coords[idx] / eb.coords[idx]
    ok = bool(c) and ea == eb * c
    return EulerReport(ok, c if ok else None, ea, eb)
