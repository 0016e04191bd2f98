"""The ring K[p]/(R(p)) for a split monic relation R.

Elements are stored by their coordinates in the basis ``1, p, ..., p^{n-1}``.
Coordinates may be any coefficients that form a module over the parameter
field K (scalars, rational functions of hbar, ...), so the same class serves
for plain cohomology classes and for I-function coefficients.

Because R is given as a product of linear factors ``(p - r)^e``, the ring is
also the product of the local rings ``K[eps]/(eps^e)`` at its roots.  The
maps to and from that local picture (Taylor expansion at the roots and
Hermite interpolation back) make inverses and restrictions cheap.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import NotARoot, SpecError
from .scalars import RatFunc, as_scalar, parse_scalar, render, scalar_key, substitute

__all__ = [
    "CohomElement",
    "CohomRelation",
    "d_dp",
    "reduce",
    "restrict",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _solve(matrix: list[list], rhs: list[list]) -> list[list]:
    """Solve ``matrix * X = rhs`` over the parameter field by elimination."""
    n = len(matrix)
    a = [list(row) + list(r) for row, r in zip(matrix, rhs)]
    width = len(a[0])
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:width] for row in a]


class CohomRelation:
    """Monic ``R(p) = prod (p - r_i)^{e_i}`` with explicit roots."""

    def __init__(self, roots: Sequence[tuple[object, int]], text: str | None = None):
        merged: dict = {}
        order = []
        for r, e in roots:
            r = as_scalar(r)
            if e < 1:
                raise ValueError("root multiplicities must be positive")
            k = scalar_key(r)
            if k in merged:
                merged[k] = (merged[k][0], merged[k][1] + e)
            else:
                merged[k] = (r, e)
                order.append(k)
        self.roots = [merged[k] for k in order]
        if not self.roots:
            raise ValueError("relation must have degree >= 1")
        poly = [_ONE]
        for r, e in self.roots:
            for _ in range(e):
                nxt = [_ZERO] * (len(poly) + 1)
                for i, c in enumerate(poly):
                    nxt[i + 1] = nxt[i + 1] + c
                    nxt[i] = nxt[i] - r * c
                poly = nxt
        self.coeffs = poly  # low -> high, monic
        self.degree = len(poly) - 1
        self.text = text or self._default_text()
        self._to_local = None
        self._from_local = None

    def _default_text(self):
        parts = []
        for r, e in self.roots:
            if not r:
                f = "p"
            else:
                s = render(-r)
                if s.startswith("-"):
                    f = f"(p - {s[1:]})" if not any(t in s[1:] for t in (" + ", " - ")) else f"(p + {s})"
                else:
                    f = f"(p + {s})"
            parts.append(f if e == 1 else f"{f}^{e}")
        return "*".join(parts)

    @classmethod
    def parse(cls, text: str) -> "CohomRelation":
        """Parse a factored relation such as ``p^2``, ``p*(p+mu)``, ``(3*p+nu)^3``."""
        src = text.strip()
        factors = _split_factors(src)
        roots = []
        for fac, exp in factors:
            try:
                f = parse_scalar(fac)
            except (ValueError, SyntaxError) as exc:
                raise SpecError("relation", f"cannot parse factor {fac!r}") from exc
            if not isinstance(f, RatFunc) or "p" not in f.variables():
                raise SpecError("relation", f"factor {fac!r} does not involve p")
            b = substitute(f, {"p": 0})
            a = substitute(f, {"p": 1}) - b
            if not a or f != a * _p() + b:
                raise SpecError("relation", f"factor {fac!r} is not linear in p")
            roots.append((-b / a, exp))
        return cls(roots, text=src)

    @property
    def params(self) -> set[str]:
        out = set()
        for r, _ in self.roots:
            if isinstance(r, RatFunc):
                out.update(r.variables())
        return out

    def is_root(self, r) -> bool:
        k = scalar_key(as_scalar(r))
        return any(scalar_key(x) == k for x, _ in self.roots)

    def multiplicity(self, r) -> int:
        k = scalar_key(as_scalar(r))
        for x, e in self.roots:
            if scalar_key(x) == k:
                return e
        raise NotARoot(f"{render(r)} is not a root of {self.text}")

    # -- local picture ----------------------------------------------------------

    def to_local_matrix(self):
        """Rows index (root, Taylor order); columns index basis monomials p^i."""
        if self._to_local is None:
            rows = []
            for r, e in self.roots:
                for j in range(e):
                    rows.append([comb(i, j) * r ** (i - j) if i >= j else _ZERO for i in range(self.degree)])
            self._to_local = rows
        return self._to_local

    def from_local_matrix(self):
        if self._from_local is None:
            n = self.degree
            ident = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
            self._from_local = _solve(self.to_local_matrix(), ident)
        return self._from_local

    def to_local(self, coords: Sequence) -> list[list]:
        """Taylor coefficients at each root, ``[[f(r), f'(r), f''(r)/2, ...], ...]``."""
        t = self.to_local_matrix()
        flat = [_lincomb(row, coords) for row in t]
        out, k = [], 0
        for _, e in self.roots:
            out.append(flat[k : k + e])
            k += e
        return out

    def from_local(self, local: Sequence[Sequence]) -> list:
        flat = [c for block in local for c in block]
        return [_lincomb(row, flat) for row in self.from_local_matrix()]

    def element(self, coords) -> "CohomElement":
        return CohomElement(self, coords)

    def one(self) -> "CohomElement":
        return CohomElement(self, [_ONE] + [_ZERO] * (self.degree - 1))

    def p(self) -> "CohomElement":
        return reduce(self, [_ZERO, _ONE])

    def __eq__(self, other):
        if not isinstance(other, CohomRelation):
            return NotImplemented
        return self.degree == other.degree and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(scalar_key(c) for c in self.coeffs))

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"CohomRelation({self.text!r})"


def _p():
    from .scalars import param

    return param("p")


def _split_factors(src: str) -> list[tuple[str, int]]:
    """Split ``a*(b)^2*c`` at top-level ``*`` into (factor, exponent) pairs."""
    src = src.replace("**", "^").replace(" ", "")
    if "=" in src:
        lhs, rhs = src.split("=", 1)
        if rhs not in ("0", ""):
            raise SpecError("relation", "right-hand side must be 0")
        src = lhs
    out, depth, cur = [], 0, ""
    for ch in src:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    result = []
    for f in out:
        if not f:
            raise SpecError("relation", f"empty factor in {src!r}")
        m = re.fullmatch(r"(.*?)\^(\d+)", f)
        if m and (m.group(1).endswith(")") or m.group(1) == "p"):
            base, exp = m.group(1), int(m.group(2))
        else:
            base, exp = f, 1
        if base.startswith("(") and base.endswith(")"):
            base = base[1:-1]
        result.append((base, exp))
    return result


def _lincomb(row, vec):
    acc = None
    for a, v in zip(row, vec):
        if not a or not v:
            continue
        t = v * a
        acc = t if acc is None else acc + t
    if acc is None:
        z = vec[0] * 0 if len(vec) else _ZERO
        return z
    return acc


def reduce(relation: CohomRelation, poly: Sequence) -> "CohomElement":
    """Reduce a polynomial in p (coefficients low -> high) modulo R."""
    c = list(poly)
    n = relation.degree
    rc = relation.coeffs
    for top in range(len(c) - 1, n - 1, -1):
        lead = c[top]
        if not lead:
            continue
        c[top] = lead * 0
        for i in range(n):
            if rc[i]:
                c[top - n + i] = c[top - n + i] - lead * rc[i]
    c = c[:n]
    zero = c[0] * 0 if c else _ZERO
    c = c + [zero] * (n - len(c))
    return CohomElement(relation, c)


class CohomElement:
    """Coordinates in ``1, p, ..., p^{n-1}`` modulo a relation."""

    __slots__ = ("relation", "coords")

    def __init__(self, relation: CohomRelation, coords: Sequence):
        coords = list(coords)
        if len(coords) != relation.degree:
            raise ValueError("wrong number of coordinates")
        self.relation = relation
        self.coords = coords

    def _other(self, other):
        if isinstance(other, CohomElement):
            if other.relation is not self.relation and other.relation != self.relation:
                raise ValueError("elements of different rings")
            return other
        c = [other] + [other * 0] * (self.relation.degree - 1)
        return CohomElement(self.relation, c)

    def __add__(self, other):
        o = self._other(other)
        return CohomElement(self.relation, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CohomElement(self.relation, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CohomElement):
            return CohomElement(self.relation, [a * other for a in self.coords])
        o = self._other(other)
        n = self.relation.degree
        prod = [None] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(o.coords):
                if not b:
                    continue
                t = a * b
                prod[i + j] = t if prod[i + j] is None else prod[i + j] + t
        zero = self.coords[0] * 0
        prod = [zero if x is None else x for x in prod]
        return reduce(self.relation, prod)

    def __rmul__(self, other):
        if isinstance(other, CohomElement):
            return other.__mul__(self)
        return CohomElement(self.relation, [other * a for a in self.coords])

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        zero = self.coords[0] * 0
        out = CohomElement(self.relation, [zero + 1] + [zero] * (self.relation.degree - 1))
        for _ in range(n):
            out = out * self
        return out

    def local(self) -> list[list]:
        return self.relation.to_local(self.coords)

    def inverse(self) -> "CohomElement":
        """Inverse for scalar coordinates (zero at a root raises)."""
        blocks = []
        for (r, e), taylor in zip(self.relation.roots, self.local()):
            a0 = taylor[0]
            if not a0:
                raise ZeroDivisionError(f"element vanishes at root p={render(r)}")
            inv = [1 / a0]
            for k in range(1, e):
                acc = _ZERO
                for i in range(1, k + 1):
                    if i < len(taylor) and taylor[i]:
                        acc = acc + taylor[i] * inv[k - i]
                inv.append(-acc * inv[0])
            blocks.append(inv)
        return CohomElement(self.relation, self.relation.from_local(blocks))

    def __truediv__(self, other):
        if isinstance(other, CohomElement):
            return self * other.inverse()
        return CohomElement(self.relation, [a / other for a in self.coords])

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __bool__(self):
        return any(bool(a) for a in self.coords)

    def __eq__(self, other):
        try:
            return not (self - other)
        except (TypeError, ValueError):
            return False

    __hash__ = None

    def scalar_part(self):
        return self.coords[0]

    def is_scalar(self) -> bool:
        return not any(bool(a) for a in self.coords[1:])

    def map(self, fn) -> "CohomElement":
        return CohomElement(self.relation, [fn(a) for a in self.coords])

    def restrict(self, r):
        return restrict(self, r)

    def d_dp(self):
        return d_dp(self)

    def __str__(self):
        parts = []
        for i, a in enumerate(self.coords):
            if not a:
                continue
            s = render(a)
            if i == 0:
                parts.append(s)
                continue
            mono = "p" if i == 1 else f"p^{i}"
            if any(t in s[1:] for t in (" + ", " - ", " / ")):
                parts.append(f"({s})*{mono}")
            elif s == "1":
                parts.append(mono)
            elif s == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{s}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") and not p.startswith("-(") else (" + " + p)
        return out

    def __repr__(self):
        return f"CohomElement({self}; {self.relation.text})"


def _map_series(f, fn):
    from .series import QSeries

    if isinstance(f, QSeries):
        return f.map(fn)
    return fn(f)


def restrict(f, r):
    """Substitute the root ``p = r`` (element or series of elements)."""
    r = as_scalar(r)

    def one(el: CohomElement):
        if not el.relation.is_root(r):
            raise NotARoot(f"p = {render(r)} is not a root of {el.relation.text}")
        acc = el.coords[0]
        power = _ONE
        for a in el.coords[1:]:
            power = power * r
            if a and power:
                acc = acc + a * power
        return acc

    return _map_series(f, one)


def d_dp(f):
    """Formal p-derivative of the canonical representative, reduced again."""

    def one(el: CohomElement):
        c = el.coords
        zero = c[0] * 0
        der = [c[i] * i for i in range(1, len(c))] + [zero]
        return CohomElement(el.relation, der)

    return _map_series(f, one)
