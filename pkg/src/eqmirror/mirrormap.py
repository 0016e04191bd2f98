"""Gromov-Witten potentials in the flat coordinate ``x = e^t``.

:func:`to_potential` pushes the ``1/hbar^2`` part of a J-function through the
inverted mirror map.  The result is cohomology valued.  Whenever it factors as
``c * W(x)`` with ``c`` in the ring and ``W`` scalar, the ring element ``c``
(the prefactor) is reported next to ``W``.

:func:`closed_form` evaluates the product formulas for the one-parameter
families, and :func:`compare` checks two potentials exactly or up to one
nonzero constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .birkhoff import (
    BirkhoffPair,
    FundamentalSolution,
    JFunction,
    birkhoff_factorize,
    fundamental_solution,
    j_function,
)
from .cohomring import CohomElement, CohomRelation
from .ifunc import IFunction, ToricSpec, build_I
from .scalars import as_scalar, parse_scalar, render, substitute
from .series import QSeries, invert_mirror_map

__all__ = [
    "CompareReport",
    "GWPotential",
    "closed_form",
    "compare",
    "parse_prefactor",
    "restricted_potential",
    "run_pipeline",
    "to_potential",
]

PROVENANCES = ("pipeline", "closed-form", "localization-specialized")


@dataclass
class GWPotential:
    """``W(x) = sum_k c_k x^k`` with zero constant term."""

    series: QSeries
    provenance: str = "pipeline"
    label: str = ""
    prefactor: CohomElement | None = None
    components: list = field(default_factory=list)
    factorizes: bool | None = None

    def __post_init__(self):
        if self.series.coeffs[0]:
            raise ValueError("a potential has zero constant term")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def order(self) -> int:
        return self.series.order

    def __getitem__(self, k: int):
        return self.series.coeffs[k]

    def truncate(self, order: int) -> "GWPotential":
        return GWPotential(self.series.truncate(order), self.provenance, self.label)

    def substitute(self, bindings) -> "GWPotential":
        s = self.series.map(lambda c: substitute(c, bindings))
        return GWPotential(s, self.provenance, self.label)

    def render(self, big_o: bool = False) -> str:
        return self.series.render("x", big_o=big_o, style="space")

    def __str__(self):
        return self.render()

    def to_dict(self) -> dict:
        out = {
            "provenance": self.provenance,
            "label": self.label,
            "order": self.order,
            "coefficients": [render(c) for c in self.series.coeffs],
        }
        if self.prefactor is not None:
            out["prefactor"] = str(self.prefactor)
            out["relation"] = self.prefactor.relation.text
            out["factorizes"] = self.factorizes
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GWPotential":
        coeffs = [parse_scalar(c) for c in data["coefficients"]]
        pot = cls(QSeries(coeffs, data["order"], var="x"), data["provenance"], data.get("label", ""))
        if "prefactor" in data:
            rel = CohomRelation.parse(data["relation"])
            pot.prefactor = parse_prefactor(data["prefactor"], rel)
            pot.factorizes = data.get("factorizes")
        return pot


def parse_prefactor(text: str, relation: CohomRelation) -> CohomElement:
    """Read ``"2 + (5 - 3*mu)*p"`` as an element of the ring of ``relation``."""
    one = relation.one()
    value = parse_scalar(text, {"p": relation.p()})
    return value if isinstance(value, CohomElement) else one * value


def to_potential(J: JFunction, prefactor=None, leading=1, order: int | None = None,
                 label: str = "") -> GWPotential:
    """``W(x)`` from ``W_hat(q(x)) = prefactor * W(x)``.

    Without ``prefactor`` it is fixed by asking the first nonzero coefficient of
    ``W`` to equal ``leading``.  ``components`` holds the coordinates of
    ``W_hat(q(x))`` in ``1, p, ...`` and ``factorizes`` says whether the
    quotient by the prefactor is free of ``p``; if it is not, ``series`` is the
    ``1``-coordinate of the quotient.
    """
    rel = J.relation
    qx = invert_mirror_map(J.t, order)
    raw = J.W_hat()
    n = qx.order
    raw = raw.truncate(n)
    components = [raw.map(lambda e, i=i: e.coords[i]).compose(qx) for i in range(rel.degree)]
    values = [CohomElement(rel, [c.coeffs[k] for c in components]) for k in range(n + 1)]
    if prefactor is None:
        lead = next((v for v in values if v), None)
        if lead is None:
            raise ValueError("the J-function has no 1/hbar^2 part to this order")
        prefactor = lead / as_scalar(leading)
    elif isinstance(prefactor, str):
        prefactor = parse_prefactor(prefactor, rel)
    elif not isinstance(prefactor, CohomElement):
        prefactor = rel.one() * as_scalar(prefactor)
    inv = prefactor.inverse()
    quotient = [v * inv for v in values]
    factorizes = all(v.is_scalar() for v in quotient)
    series = QSeries([v.coords[0] for v in quotient], n, var="x")
    return GWPotential(series, "pipeline", label, prefactor, components, factorizes)


def restricted_potential(J: JFunction, root, leading=1, order: int | None = None) -> tuple:
    """``W_hat(q(x))`` restricted to ``p = root`` and scaled to the given leading
    coefficient; returns ``(potential, scale)`` with ``restricted = scale * W``."""
    qx = invert_mirror_map(J.t, order)
    raw = J.W_hat().truncate(qx.order).map(lambda e: e.restrict(root)).compose(qx)
    v = raw.valuation()
    if v is None:
        raise ValueError("restricted potential vanishes to this order")
    scale = raw.coeffs[v] / as_scalar(leading)
    series = raw.map(lambda c: c / scale)
    return GWPotential(series, "pipeline", f"p={render(as_scalar(root))}"), scale


def _product(lo: int, hi: int, fn):
    acc = Fraction(1)
    for j in range(lo, hi + 1):
        acc = acc * fn(j)
    return acc


def _one_parameter(c, sign, order: int, scale=1) -> QSeries:
    """``scale * sum_k sign(k)/(k^2 (k-1)!) prod_{j<k} (c k + j) x^k``."""
    coeffs = [Fraction(0)]
    fact = 1
    for k in range(1, order + 1):
        if k > 1:
            fact *= k - 1
        prod = _product(1, k - 1, lambda j: c * k + j)
        coeffs.append(prod * Fraction(sign(k) * scale, k * k * fact))
    return QSeries(coeffs, order, var="x")


def closed_form(kind: str, order: int, k: int | None = None, nu1=None, nu2=None) -> GWPotential:
    """Product formulas.

    ``kind`` is ``"xi1"``, ``"xi2"``, ``"wk"`` (needs ``k``) or ``"wnu"``
    (needs ``nu1``, ``nu2``; symbols allowed).  For ``wk`` the sign
    ``(-1)^{(j-1)k}`` is used as stated, so ``k = 0`` gives ``sum x^j/j^2``.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    kind = kind.lower()
    alt = lambda j: (-1) ** (j - 1)
    if kind == "xi1":
        s, label = _one_parameter(Fraction(3), alt, order), "Xi1"
    elif kind == "xi2":
        s, label = _one_parameter(Fraction(5), alt, order, scale=2), "Xi2"
    elif kind == "wk":
        if k is None:
            raise ValueError("wk needs k")
        s = _one_parameter(Fraction(k * (2 + k)), lambda j: (-1) ** ((j - 1) * k), order)
        label = f"Wk({k})"
    elif kind == "wnu":
        if nu1 is None or nu2 is None:
            raise ValueError("wnu needs nu1 and nu2")
        a, b = as_scalar(nu1), as_scalar(nu2)
        s = _one_parameter(a * b + a + b, alt, order)
        label = f"Wnu({render(a)},{render(b)})"
    else:
        raise ValueError(f"unknown closed form {kind!r}")
    return GWPotential(s, "closed-form", label)


@dataclass
class CompareReport:
    equal: bool
    mode: str
    order: int
    scalar: object = None
    first_mismatch: int | None = None

    def __bool__(self):
        return self.equal

    def render(self) -> str:
        head = "equal" if self.equal else "not equal"
        text = f"{head} ({self.mode}, through x^{self.order})"
        if self.scalar is not None:
            text += f"; scalar {render(self.scalar)}"
        if self.first_mismatch is not None:
            text += f"; first mismatch at x^{self.first_mismatch}"
        return text

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "mode": self.mode,
            "order": self.order,
            "scalar": None if self.scalar is None else render(self.scalar),
            "first_mismatch": self.first_mismatch,
        }


def _series(a) -> QSeries:
    return a.series if isinstance(a, GWPotential) else a


def compare(a, b, mode: str = "exact") -> CompareReport:
    """``exact``: coefficientwise equality.  ``up_to_scalar``: ``a = c * b`` for
    one nonzero constant ``c``, which is returned."""
    sa, sb = _series(a), _series(b)
    n = min(sa.order, sb.order)
    if mode == "exact":
        for i in range(n + 1):
            if sa.coeffs[i] != sb.coeffs[i]:
                return CompareReport(False, mode, n, first_mismatch=i)
        return CompareReport(True, mode, n)
    if mode != "up_to_scalar":
        raise ValueError(f"unknown comparison mode {mode!r}")
    if n < 2:
        raise ValueError("up_to_scalar needs a common order of at least 2")
    va, vb = sa.truncate(n).valuation(), sb.truncate(n).valuation()
    if va is None or vb is None or va != vb:
        return CompareReport(False, mode, n, first_mismatch=min(x for x in (va, vb, n) if x is not None))
    c = sa.coeffs[va] / sb.coeffs[vb]
    for i in range(n + 1):
        if sa.coeffs[i] != c * sb.coeffs[i]:
            return CompareReport(False, mode, n, c, i)
    return CompareReport(True, mode, n, c)


@dataclass
class PipelineResult:
    spec: ToricSpec
    I: IFunction
    S: FundamentalSolution
    pair: BirkhoffPair
    J: JFunction


def run_pipeline(spec: ToricSpec, order: int | None = None, basis=None) -> PipelineResult:
    """I-function, fundamental solution, factorization and J-function."""
    order = spec.order if order is None else order
    I = build_I(spec, order)
    S = fundamental_solution(I, basis)
    pair = birkhoff_factorize(S)
    return PipelineResult(spec, I, S, pair, j_function(pair))
