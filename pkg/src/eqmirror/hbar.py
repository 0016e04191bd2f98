"""Coefficients depending on hbar.

Two representations are provided.

:class:`HRational` is exact: a polynomial in hbar over the parameter field
divided by a product of powers of linear factors ``(hbar - a)``.  Each pole
carries a tag saying on which side of the working annulus it lies:

* ``INNER`` poles are small.  Around them the function is expanded at
  ``hbar = oo`` (a geometric series in ``a / hbar``).
* ``OUTER`` poles are large.  Around them the function is expanded at
  ``hbar = 0`` (a geometric series in ``hbar / a``).

With this bookkeeping the Laurent coefficient of ``hbar^e`` on the annulus is
well defined for every ``e``.  Negative powers come from the principal parts
at inner poles, and non-negative powers from the rest.  Birkhoff
factorization then needs no truncation at all.

:class:`HLaurent` is the classical truncated Laurent polynomial with a known
precision in positive powers.  It is only usable when every inner pole sits
at ``hbar = 0`` (so negative parts are finite) and serves as an independent
cross-check of the exact route.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import WindowExhausted
from .scalars import render, scalar_key

__all__ = ["HLaurent", "HRational", "INNER", "OUTER"]

INNER = "inner"
OUTER = "outer"

_ZERO = Fraction(0)
_ONE = Fraction(1)


# -- dense univariate polynomials over the parameter field (low -> high) ----


def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = out[i] + v
    return _trim(out)


def _psub(a, b):
    out = list(a) + [_ZERO] * max(0, len(b) - len(a))
    for i, v in enumerate(b):
        out[i] = out[i] - v
    return _trim(out)


def _pmul(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pscale(a, s):
    if not s:
        return []
    return _trim([x * s for x in a])


def _peval(a, x):
    acc = _ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _pdiv_linear(a, alpha):
    """Quotient and remainder of ``a`` by ``(h - alpha)``."""
    n = len(a)
    if n == 0:
        return [], _ZERO
    q = [_ZERO] * (n - 1)
    acc = _ZERO
    for i in range(n - 1, -1, -1):
        acc = acc * alpha + a[i]
        if i > 0:
            q[i - 1] = acc
    return _trim(q), acc


def _plinear_power(alpha, m):
    """Coefficients of ``(h - alpha)^m``."""
    out = [_ONE]
    for _ in range(m):
        out = _pmul(out, [-alpha, _ONE])
    return out


def _taylor_shift(a, alpha, n):
    """First ``n`` Taylor coefficients of ``a(alpha + s)`` in ``s``."""
    out = []
    cur = list(a)
    for _ in range(n):
        cur, r = _pdiv_linear(cur, alpha)
        out.append(r)
        if not cur:
            break
    return out + [_ZERO] * (n - len(out))


def _series_mul(a, b, n):
    out = [_ZERO] * n
    for i in range(min(n, len(a))):
        if not a[i]:
            continue
        for j in range(min(n - i, len(b))):
            if b[j]:
                out[i + j] = out[i + j] + a[i] * b[j]
    return out


def _series_inv(a, n):
    inv0 = 1 / a[0]
    out = [inv0]
    for k in range(1, n):
        acc = _ZERO
        for i in range(1, min(k, len(a) - 1) + 1):
            if a[i]:
                acc = acc + a[i] * out[k - i]
        out.append(-acc * inv0)
    return out


class HRational:
    """``num(hbar) / prod (hbar - a)^m`` with tagged poles."""

    __slots__ = ("num", "poles")

    def __init__(self, num: Iterable = (), poles: dict | None = None, _reduced: bool = False):
        self.num = _trim(list(num))
        # key -> (alpha, multiplicity, tag)
        self.poles = {} if poles is None else {k: v for k, v in poles.items() if v[1] > 0}
        if not self.num:
            self.poles = {}
        elif not _reduced:
            self._cancel()

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, c) -> "HRational":
        return cls([c] if c else [], None, True)

    @classmethod
    def poly(cls, coeffs) -> "HRational":
        return cls(coeffs, None, True)

    @classmethod
    def hbar(cls) -> "HRational":
        return cls([_ZERO, _ONE], None, True)

    @classmethod
    def linear(cls, a, b) -> "HRational":
        """``a + b*hbar``."""
        return cls([a, b], None, True)

    @classmethod
    def inverse_linear(cls, a, b, tag: str) -> "HRational":
        """``1 / (a + b*hbar)`` with ``b != 0``; the pole is tagged ``tag``."""
        alpha = -a / b
        return cls([1 / b], {scalar_key(alpha): (alpha, 1, tag)}, True)

    # -- internals ------------------------------------------------------------

    def _cancel(self):
        for key in list(self.poles):
            alpha, m, tag = self.poles[key]
            while m > 0:
                q, r = _pdiv_linear(self.num, alpha)
                if r:
                    break
                self.num = q
                m -= 1
            if m:
                self.poles[key] = (alpha, m, tag)
            else:
                del self.poles[key]

    @staticmethod
    def _merge_tags(p1, p2):
        for key in p1.keys() & p2.keys():
            if p1[key][2] != p2[key][2]:
                raise ValueError(f"pole at hbar={render(p1[key][0])} tagged both inner and outer")

    def den_poly(self) -> list:
        out = [_ONE]
        for alpha, m, _ in self.poles.values():
            out = _pmul(out, _plinear_power(alpha, m))
        return out

    def degree(self) -> int:
        """Degree at infinity: ``deg num - deg den`` (``-inf`` style ``None`` for 0)."""
        if not self.num:
            return None
        return len(self.num) - 1 - sum(m for _, m, _ in self.poles.values())

    def is_polynomial(self) -> bool:
        return not self.poles

    # -- arithmetic -----------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, HRational):
            return other
        return HRational.const(other)

    def __add__(self, other):
        other = self._lift(other)
        if not other.num:
            return self
        if not self.num:
            return other
        self._merge_tags(self.poles, other.poles)
        poles = {}
        na, nb = self.num, other.num
        for key in self.poles.keys() | other.poles.keys():
            ma = self.poles[key][1] if key in self.poles else 0
            mb = other.poles[key][1] if key in other.poles else 0
            entry = self.poles.get(key) or other.poles.get(key)
            alpha, tag = entry[0], entry[2]
            m = max(ma, mb)
            poles[key] = (alpha, m, tag)
            if m > ma:
                na = _pmul(na, _plinear_power(alpha, m - ma))
            if m > mb:
                nb = _pmul(nb, _plinear_power(alpha, m - mb))
        return HRational(_padd(na, nb), poles)

    __radd__ = __add__

    def __neg__(self):
        return HRational([-c for c in self.num], dict(self.poles), True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HRational):
            if not other:
                return HRational()
            return HRational([c * other for c in self.num], dict(self.poles), True)
        if not self.num or not other.num:
            return HRational()
        self._merge_tags(self.poles, other.poles)
        poles = dict(self.poles)
        for key, (alpha, m, tag) in other.poles.items():
            if key in poles:
                poles[key] = (alpha, poles[key][1] + m, tag)
            else:
                poles[key] = (alpha, m, tag)
        if self.poles and other.poles:
            # a zero of one numerator may cancel a pole of the other
            return HRational(_pmul(self.num, other.num), poles)
        if self.poles or other.poles:
            return HRational(_pmul(self.num, other.num), poles)
        return HRational(_pmul(self.num, other.num), poles, True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HRational):
            if other.poles or len(other.num) != 1:
                raise TypeError("HRational division only by parameter-field scalars")
            other = other.num[0]
        inv = 1 / other
        return HRational([c * inv for c in self.num], dict(self.poles), True)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = HRational.const(_ONE)
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (HRational, int, Fraction)) or hasattr(other, "key"):
            return not (self - other)
        return NotImplemented

    __hash__ = None

    # -- substitution and retagging ------------------------------------------

    def map_coeffs(self, fn) -> "HRational":
        """Apply a ring map of the parameter field (e.g. a substitution)."""
        poles = {}
        for alpha, m, tag in self.poles.values():
            a = fn(alpha)
            k = scalar_key(a)
            if k in poles:
                if poles[k][2] != tag:
                    raise ValueError("substitution merges poles of different type")
                poles[k] = (a, poles[k][1] + m, tag)
            else:
                poles[k] = (a, m, tag)
        return HRational([fn(c) for c in self.num], poles)

    def retag(self, tag: str) -> "HRational":
        return HRational(self.num, {k: (a, m, tag) for k, (a, m, _) in self.poles.items()}, True)

    def evaluate(self, h):
        den = _ONE
        for alpha, m, _ in self.poles.values():
            den = den * (h - alpha) ** m
        return _peval(self.num, h) / den

    # -- the annulus split ----------------------------------------------------

    def principal_part(self, key) -> "HRational":
        alpha, m, tag = self.poles[key]
        g = _taylor_shift(self.num, alpha, m)
        for k2, (beta, m2, _) in self.poles.items():
            if k2 == key:
                continue
            d = alpha - beta
            # (d + s)^(-m2)
            base = _series_inv([d, _ONE], m)
            fac = [_ONE] + [_ZERO] * (m - 1)
            for _ in range(m2):
                fac = _series_mul(fac, base, m)
            g = _series_mul(g, fac, m)
        # sum_j g_j (h - alpha)^j / (h - alpha)^m for j < m
        num = []
        lin = [_ONE]
        for j in range(m):
            if g[j]:
                num = _padd(num, _pscale(lin, g[j]))
            lin = _pmul(lin, [-alpha, _ONE])
        return HRational(num, {key: (alpha, m, tag)})

    def split(self) -> tuple["HRational", "HRational"]:
        """``(inner, outer)`` with ``self == inner + outer``.

        ``inner`` is the sum of principal parts at inner poles, so it vanishes
        at infinity and contributes only negative powers on the annulus.
        ``outer`` has only outer poles and contributes only non-negative powers.
        """
        inner = HRational()
        for key, (_, _, tag) in self.poles.items():
            if tag == INNER:
                inner = inner + self.principal_part(key)
        outer = self - inner
        return inner, outer

    def inner_part(self) -> "HRational":
        return self.split()[0]

    def outer_part(self) -> "HRational":
        return self.split()[1]

    # -- expansions -----------------------------------------------------------

    def expand_at_infinity(self, lowest: int) -> dict:
        """Coefficients of ``hbar^e`` for ``e >= lowest`` of the expansion at infinity."""
        if not self.num:
            return {}
        den = self.den_poly()
        a, b = len(self.num) - 1, len(den) - 1
        top = a - b
        n = top - lowest + 1
        if n <= 0:
            return {}
        # h^a N(1/h) / (h^b D(1/h)) with reversed coefficient lists
        nr = list(reversed(self.num))
        dr = list(reversed(den))
        ser = _series_mul(nr, _series_inv(dr, n), n)
        return {top - i: c for i, c in enumerate(ser) if c}

    def expand_at_zero(self, highest: int) -> dict:
        """Taylor coefficients at ``hbar = 0`` up to ``hbar^highest``.

        Only valid if no pole sits at 0.
        """
        if not self.num or highest < 0:
            return {}
        den = self.den_poly()
        if not den[0]:
            raise ValueError("pole at hbar = 0; no Taylor expansion there")
        n = highest + 1
        ser = _series_mul(self.num, _series_inv(den, n), n)
        return {i: c for i, c in enumerate(ser) if c}

    def laurent(self, lo: int, hi: int) -> dict:
        """Annulus Laurent coefficients for ``lo <= e <= hi``."""
        inner, outer = self.split()
        out = {}
        if lo < 0:
            for e, c in inner.expand_at_infinity(lo).items():
                if e < 0 and e >= lo:
                    out[e] = c
        if hi >= 0:
            for e, c in outer.expand_at_zero(hi).items():
                if e >= max(lo, 0):
                    out[e] = c
        return out

    def __str__(self):
        n = _render_hpoly(self.num)
        if not self.poles:
            return n
        facs = []
        for alpha, m, _ in sorted(self.poles.values(), key=lambda v: render(v[0])):
            lin = _render_hpoly([-alpha, _ONE])
            f = f"({lin})"
            facs.append(f if m == 1 else f"{f}^{m}")
        if len([c for c in self.num if c]) > 1:
            n = f"({n})"
        return f"{n} / {'*'.join(facs)}"

    def __repr__(self):
        return f"HRational({self})"


def _render_hpoly(c) -> str:
    parts = []
    for e in range(len(c) - 1, -1, -1):
        v = c[e]
        if not v:
            continue
        s = render(v)
        compound = any(t in s[1:] for t in (" + ", " - ", " / "))
        if e == 0:
            parts.append(s)
            continue
        mono = "h" if e == 1 else f"h^{e}"
        if compound:
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
        out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
    return out


class HLaurent:
    """Truncated Laurent polynomial in hbar.

    ``coeffs`` maps exponents to coefficients.  Every exponent ``<= hi`` is
    known exactly; exponents above ``hi`` are outside the window.
    """

    __slots__ = ("coeffs", "hi")

    def __init__(self, coeffs: dict | None = None, hi: int = 0):
        self.hi = hi
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c and e <= hi}

    @property
    def lo(self):
        return min(self.coeffs) if self.coeffs else None

    @classmethod
    def from_hrational(cls, f: HRational, hi: int) -> "HLaurent":
        for alpha, _, tag in f.poles.values():
            if tag == INNER and alpha:
                raise WindowExhausted(
                    "inner pole away from hbar=0 gives an infinite negative tail; use the exact route"
                )
        inner, outer = f.split()
        coeffs = {}
        if inner:
            low = -sum(m for _, m, _ in inner.poles.values())
            coeffs.update(inner.expand_at_infinity(low))
        coeffs.update(outer.expand_at_zero(hi))
        return cls(coeffs, hi)

    def __add__(self, other):
        if not isinstance(other, HLaurent):
            other = HLaurent({0: other}, self.hi)
        hi = min(self.hi, other.hi)
        out = {e: c for e, c in self.coeffs.items() if e <= hi}
        for e, c in other.coeffs.items():
            if e <= hi:
                out[e] = out[e] + c if e in out else c
        return HLaurent(out, hi)

    __radd__ = __add__

    def __neg__(self):
        return HLaurent({e: -c for e, c in self.coeffs.items()}, self.hi)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HLaurent):
            return HLaurent({e: c * other for e, c in self.coeffs.items()}, self.hi)
        if not self.coeffs or not other.coeffs:
            return HLaurent({}, min(self.hi + (other.lo or 0), other.hi + (self.lo or 0)))
        hi = min(self.hi + other.lo, other.hi + self.lo)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e > hi:
                    continue
                t = c1 * c2
                out[e] = out[e] + t if e in out else t
        return HLaurent(out, hi)

    __rmul__ = __mul__

    def positive_part(self) -> "HLaurent":
        return HLaurent({e: c for e, c in self.coeffs.items() if e >= 0}, self.hi)

    def negative_part(self) -> "HLaurent":
        return HLaurent({e: c for e, c in self.coeffs.items() if e < 0}, self.hi)

    def __getitem__(self, e):
        if e > self.hi:
            raise WindowExhausted(f"hbar^{e} lies outside the window (precision {self.hi})")
        return self.coeffs.get(e, _ZERO)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, HLaurent):
            hi = min(self.hi, other.hi)
            keys = {e for e in self.coeffs if e <= hi} | {e for e in other.coeffs if e <= hi}
            return all(self.coeffs.get(e, _ZERO) == other.coeffs.get(e, _ZERO) for e in keys)
        return NotImplemented

    __hash__ = None

    def __str__(self):
        if not self.coeffs:
            return f"0 + O(h^{self.hi + 1})"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            s = render(self.coeffs[e])
            mono = "" if e == 0 else ("h" if e == 1 else f"h^{e}")
            parts.append(s if not mono else f"({s})*{mono}")
        return " + ".join(parts) + f" + O(h^{self.hi + 1})"

    __repr__ = __str__
