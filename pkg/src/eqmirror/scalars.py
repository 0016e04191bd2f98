"""Exact coefficient arithmetic.

Three towers are used throughout the package:

* ``Fraction`` from the standard library for plain rationals,
* :class:`Cyclotomic` for the field Q(w) with ``w**2 + w + 1 == 0``,
* :class:`RatFunc` for rational functions in named parameters over Q.

Arithmetic between the towers promotes upward (``int -> Fraction -> RatFunc``).
A :class:`RatFunc` whose value is a constant is demoted back to ``Fraction``,
so numeric pipelines never pay for the polynomial machinery.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

import flint

from .errors import DivByZero, PoleAtPoint

__all__ = [
    "Cyclotomic",
    "OMEGA",
    "RatFunc",
    "Scalar",
    "as_scalar",
    "field_arith",
    "is_zero",
    "limit_at",
    "param",
    "params",
    "parse_scalar",
    "render",
    "scalar_key",
    "substitute",
]


def _fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Cyclotomic:
    """Element ``a + b*w`` of Q(w), ``w`` a primitive cube root of unity."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _lift(x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclotomic(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(-self.a, -self.b)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        bd = self.b * o.b
        return Cyclotomic(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        # w -> w^2 = -1 - w
        return Cyclotomic(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "Cyclotomic":
        n = self.norm()
        if n == 0:
            raise DivByZero("division by zero in Q(w)")
        c = self.conjugate()
        return Cyclotomic(c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __str__(self):
        if self.b == 0:
            return _fmt_rational(self.a)
        if self.a == 0:
            return f"{_fmt_rational(self.b)}*w"
        sign = "-" if self.b < 0 else "+"
        return f"{_fmt_rational(self.a)} {sign} {_fmt_rational(abs(self.b))}*w"

    def __repr__(self):
        return f"Cyclotomic({self})"


OMEGA = Cyclotomic(0, 1)


@lru_cache(maxsize=None)
def _context(names: tuple[str, ...]):
    return flint.fmpq_mpoly_ctx.get(names, "deglex")


def _fmpq(x) -> flint.fmpq:
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    return flint.fmpq(x)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class RatFunc:
    """Reduced quotient of two polynomials in named parameters.

    The denominator is normalised to leading coefficient 1 in graded
    lexicographic order, so equal functions have identical representations.
    Instances are built through :func:`param` or arithmetic; constants never
    survive as ``RatFunc`` (they come back as ``Fraction``).
    """

    __slots__ = ("num", "den", "_key")

    def __init__(self, num, den=None, _reduced=False):
        if den is None:
            den = num.context().from_dict({(0,) * num.context().nvars(): 1})
        if den.is_zero():
            raise DivByZero("rational function with zero denominator")
        if not _reduced:
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den
        self._key = None

    @property
    def names(self) -> tuple[str, ...]:
        return self.num.context().names()

    def variables(self) -> tuple[str, ...]:
        """Names of the parameters that actually occur."""
        used = set()
        names = self.names
        for poly in (self.num, self.den):
            for i, d in enumerate(poly.degrees()):
                if d > 0:
                    used.add(names[i])
        return tuple(n for n in names if n in used)

    # -- construction helpers -------------------------------------------

    @staticmethod
    def _wrap(num, den, reduced=False):
        r = RatFunc(num, den, _reduced=reduced)
        if r.num.is_constant() and r.den.is_constant():
            return _to_fraction(r.num.leading_coefficient()) if not r.num.is_zero() else Fraction(0)
        return r

    def _project(self, names: tuple[str, ...]):
        if self.names == names:
            return self.num, self.den
        ctx = _context(names)
        return self.num.project_to_context(ctx), self.den.project_to_context(ctx)

    @staticmethod
    def _align(a: "RatFunc", b):
        """Return numerators/denominators of ``a`` and ``b`` in one context."""
        if isinstance(b, RatFunc):
            if a.names == b.names:
                return a.num, a.den, b.num, b.den
            names = tuple(sorted(set(a.names) | set(b.names)))
            an, ad = a._project(names)
            bn, bd = b._project(names)
            return an, ad, bn, bd
        if isinstance(b, (int, Fraction)):
            ctx = a.num.context()
            one = ctx.from_dict({(0,) * ctx.nvars(): 1})
            return a.num, a.den, one * _fmpq(b), one
        return None

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        al = self._align(self, other)
        if al is None:
            return NotImplemented
        an, ad, bn, bd = al
        if ad == bd:
            return self._wrap(an + bn, ad)
        return self._wrap(an * bd + bn * ad, ad * bd)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        al = self._align(self, other)
        if al is None:
            return NotImplemented
        an, ad, bn, bd = al
        if ad == bd:
            return self._wrap(an - bn, ad)
        return self._wrap(an * bd - bn * ad, ad * bd)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        al = self._align(self, other)
        if al is None:
            return NotImplemented
        an, ad, bn, bd = al
        return self._wrap(an * bn, ad * bd)

    __rmul__ = __mul__

    def __truediv__(self, other):
        al = self._align(self, other)
        if al is None:
            return NotImplemented
        an, ad, bn, bd = al
        if bn.is_zero():
            raise DivByZero("division by zero rational function")
        return self._wrap(an * bd, ad * bn)

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if self.num.is_zero():
            raise DivByZero("division by zero rational function")
        ctx = self.num.context()
        one = ctx.from_dict({(0,) * ctx.nvars(): 1})
        return self._wrap(self.den * _fmpq(other), self.num * one)

    def __pow__(self, n: int):
        if n < 0:
            return (1 / self) ** (-n)
        return self._wrap(self.num**n, self.den**n, reduced=True)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            an, ad, bn, bd = self._align(self, other)
            return an * bd == bn * ad
        if isinstance(other, (int, Fraction)):
            # constants are always demoted, so a RatFunc is never a constant
            return False
        return NotImplemented

    def key(self):
        """Hashable canonical form, independent of the ambient context."""
        if self._key is None:
            names = self.names

            def terms(poly):
                out = []
                for mono, c in zip(poly.monoms(), poly.coeffs()):
                    m = tuple((names[i], e) for i, e in enumerate(mono) if e)
                    out.append((m, _to_fraction(c)))
                return tuple(sorted(out))

            self._key = (terms(self.num), terms(self.den))
        return self._key

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        n = _render_poly(self.num)
        if self.den.is_one():
            return n
        d = _render_poly(self.den)
        if len(self.num) > 1:
            n = f"({n})"
        if len(self.den) > 1:
            d = f"({d})"
        return f"{n} / {d}"

    def __repr__(self):
        return f"RatFunc({self})"


Scalar = Union[Fraction, Cyclotomic, RatFunc]


def _render_poly(poly) -> str:
    names = poly.context().names()
    items = []
    for mono, c in zip(poly.monoms(), poly.coeffs()):
        items.append((sum(mono), tuple(mono), _to_fraction(c)))
    # graded lexicographic, highest first
    items.sort(key=lambda t: (t[0], t[1]), reverse=True)
    if not items:
        return "0"
    parts = []
    for k, (_, mono, c) in enumerate(items):
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        mag = abs(c)
        if factors:
            body = "*".join(factors)
            text = body if mag == 1 else f"{_fmt_rational(mag)}*{body}"
        else:
            text = _fmt_rational(mag)
        if k == 0:
            parts.append(("-" if c < 0 else "") + text)
        else:
            parts.append((" - " if c < 0 else " + ") + text)
    return "".join(parts)


def param(name: str) -> RatFunc:
    """The parameter ``name`` as a rational function."""
    ctx = _context((name,))
    return RatFunc(ctx.gens()[0], _reduced=True)


def params(names: str):
    """``params("mu nu")`` -> tuple of parameters."""
    return tuple(param(n) for n in names.replace(",", " ").split())


def as_scalar(x):
    if isinstance(x, (Fraction, Cyclotomic, RatFunc)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"not a scalar: {x!r}")


def is_zero(x) -> bool:
    return not x


def scalar_key(x):
    """Hashable key with equal keys for equal values across towers."""
    if isinstance(x, RatFunc):
        return ("r",) + x.key()
    if isinstance(x, Cyclotomic) and x.b == 0:
        return x.a
    return x


def render(x) -> str:
    """Canonical text form used by golden files and CLI output."""
    if isinstance(x, (int, Fraction)):
        return _fmt_rational(Fraction(x))
    return str(x)


def field_arith(a, b, op: str):
    """Exact ``a op b`` for ``op`` in add/sub/mul/div."""
    a, b = as_scalar(a), as_scalar(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivByZero("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def _eval_poly(poly, names, bindings):
    """Evaluate ``poly`` with some variables bound to scalars."""
    ctx_names = poly.context().names()
    acc = Fraction(0)
    free = [n for n in ctx_names if n not in bindings]
    free_gens = {n: param(n) for n in free}
    for mono, c in zip(poly.monoms(), poly.coeffs()):
        term = _to_fraction(c)
        for i, e in enumerate(mono):
            if e:
                n = ctx_names[i]
                v = bindings[n] if n in bindings else free_gens[n]
                term = term * v**e
        acc = acc + term
    return acc


def substitute(f, bindings: Mapping[str, object]):
    """Bind parameters of ``f`` to scalars (partial bindings allowed).

    Raises :class:`PoleAtPoint` when the denominator vanishes.
    """
    if not isinstance(f, RatFunc):
        return f
    bindings = {k: as_scalar(v) for k, v in bindings.items() if k in f.names}
    if not bindings:
        return f
    numeric = all(isinstance(v, Fraction) for v in bindings.values())
    if numeric:
        vals = {k: _fmpq(v) for k, v in bindings.items()}
        num = f.num.subs(vals)
        den = f.den.subs(vals)
        if den.is_zero():
            raise PoleAtPoint(dict(bindings), render(f))
        return RatFunc._wrap(num, den)
    num = _eval_poly(f.num, f.names, bindings)
    den = _eval_poly(f.den, f.names, bindings)
    if not den:
        raise PoleAtPoint(dict(bindings), render(f))
    return num / den


def limit_at(f, name: str, value, bindings: Mapping[str, object] | None = None):
    """Limit of ``f`` as parameter ``name`` tends to ``value``.

    Removable singularities are cancelled; genuine poles raise
    :class:`PoleAtPoint`.
    """
    if bindings:
        f = substitute(f, bindings)
    if not isinstance(f, RatFunc) or name not in f.variables():
        return f
    value = as_scalar(value)
    num, den = f.num, f.den
    ctx = num.context()
    x = ctx.gens()[ctx.names().index(name)]
    root = x - _fmpq(value) if isinstance(value, Fraction) else None
    if root is None:
        raise TypeError("limit_at needs a rational limit point")
    while True:
        nv = num.subs({name: _fmpq(value)})
        dv = den.subs({name: _fmpq(value)})
        if not dv.is_zero():
            return RatFunc._wrap(nv, dv)
        if not nv.is_zero():
            raise PoleAtPoint({name: value}, render(f))
        num = num / root
        den = den / root


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: field_arith(a, b, "div") if _is_scalar(a) and _is_scalar(b) else a / b,
}


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, Cyclotomic, RatFunc))


def parse_scalar(text: str, env: Mapping[str, object] | None = None):
    """Parse ``"-mu/2"``, ``"2*nu+1"``, ``"3/4"``, ``"w"`` ... into a scalar.

    The bare name ``w`` is an ordinary parameter here; the cube root of unity
    is spelled ``omega``.  Names found in ``env`` evaluate to the bound object
    instead, so ``env={"p": ring.p()}`` parses ring elements.
    """
    env = env or {}
    tree = ast.parse(text.strip().replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id in env:
                return env[node.id]
            if node.id == "omega":
                return OMEGA
            return param(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            e = ev(node.right)
            if not (isinstance(e, Fraction) and e.denominator == 1):
                raise ValueError(f"non-integer exponent in {text!r}")
            return ev(node.left) ** int(e)
        raise ValueError(f"cannot parse scalar expression {text!r}")

    return ev(tree)
