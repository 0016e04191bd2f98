"""Truncated power series in one variable over any exact coefficient ring.

A :class:`QSeries` holds ``c_0 .. c_N`` and never reports anything beyond
``O(q^{N+1})``.  Coefficients only need ``+``, ``-``, ``*`` and, for a few
operations, multiplication by a ``Fraction``; they may be plain rationals,
rational functions, cohomology elements or rational functions of hbar.

A :class:`LogSeries` is ``c*log(q) + tail(q)`` and represents a mirror map.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .errors import NonUnitLeading, UnnormalizedMirrorMap
from .scalars import render

__all__ = [
    "DEFAULT_ORDER",
    "LogSeries",
    "QSeries",
    "invert_mirror_map",
    "series_arith",
    "theta",
]

DEFAULT_ORDER = 8


def _is_zero(c) -> bool:
    return not c


class QSeries:
    """``c_0 + c_1 q + ... + c_N q^N + O(q^{N+1})``."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Sequence, order: int | None = None, var: str = "q", zero=Fraction(0)):
        # plain ints would drift into float under true division
        coeffs = [Fraction(c) if type(c) is int else c for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        if len(coeffs) > order + 1:
            coeffs = coeffs[: order + 1]
        else:
            z = coeffs[0] * 0 if coeffs else zero
            coeffs = coeffs + [z] * (order + 1 - len(coeffs))
        self.coeffs = coeffs
        self.var = var

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int, var: str = "q", zero=Fraction(0)):
        return cls([zero] * (order + 1), order, var)

    @classmethod
    def one(cls, order: int, var: str = "q", one=Fraction(1)):
        return cls([one], order, var, zero=one * 0)

    @classmethod
    def monomial(cls, k: int, order: int, coeff=Fraction(1), var: str = "q"):
        c = [coeff * 0] * (order + 1)
        if k <= order:
            c[k] = coeff
        return cls(c, order, var)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[: order + 1], order, self.var)

    def map(self, fn: Callable) -> "QSeries":
        return QSeries([fn(c) for c in self.coeffs], self.order, self.var)

    def _common(self, other):
        n = min(self.order, other.order)
        return n, self.coeffs, other.coeffs

    def __add__(self, other):
        if isinstance(other, QSeries):
            n, a, b = self._common(other)
            return QSeries([a[i] + b[i] for i in range(n + 1)], n, self.var)
        c = list(self.coeffs)
        c[0] = c[0] + other
        return QSeries(c, self.order, self.var)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            n, a, b = self._common(other)
            out = []
            for k in range(n + 1):
                acc = None
                for i in range(k + 1):
                    if _is_zero(a[i]) or _is_zero(b[k - i]):
                        continue
                    t = a[i] * b[k - i]
                    acc = t if acc is None else acc + t
                out.append(acc if acc is not None else a[0] * 0 * b[0])
            return QSeries(out, n, self.var)
        return QSeries([c * other for c in self.coeffs], self.order, self.var)

    def __rmul__(self, other):
        if isinstance(other, QSeries):
            return other.__mul__(self)
        return QSeries([other * c for c in self.coeffs], self.order, self.var)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QSeries.one(self.order, self.var, one=self.coeffs[0] * 0 + 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return k
        return None

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        a = self.coeffs
        if _is_zero(a[0]):
            raise NonUnitLeading("constant term is zero")
        try:
            inv0 = 1 / a[0]
        except ZeroDivisionError as exc:
            raise NonUnitLeading(str(exc)) from exc
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = a[0] * 0
            for i in range(1, k + 1):
                if not _is_zero(a[i]):
                    acc = acc + a[i] * out[k - i]
            out.append(-acc * inv0)
        return QSeries(out, self.order, self.var)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.inverse()
        return QSeries([c / other for c in self.coeffs], self.order, self.var)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def compose(self, inner: "QSeries") -> "QSeries":
        """``self(inner(q))``; ``inner`` must have zero constant term."""
        if not _is_zero(inner.coeffs[0]):
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        result = QSeries.zero(n, inner.var, zero=self.coeffs[0] * 0)
        # Horner scheme, exact to order n because inner = O(q).
        inner = inner.truncate(n)
        for c in reversed(self.coeffs[: n + 1]):
            result = result * inner + c
        return result

    def derivative(self) -> "QSeries":
        """``d/dq``; the order drops by one."""
        c = [self.coeffs[k] * k for k in range(1, self.order + 1)]
        if not c:
            return QSeries([self.coeffs[0] * 0], 0, self.var)
        return QSeries(c, self.order - 1, self.var)

    def theta(self) -> "QSeries":
        """``q d/dq`` coefficientwise."""
        return QSeries([c * k for k, c in enumerate(self.coeffs)], self.order, self.var)

    def exp(self) -> "QSeries":
        """``exp`` of a series with zero constant term."""
        if not _is_zero(self.coeffs[0]):
            raise ValueError("exp needs zero constant term")
        n = self.order
        one = self.coeffs[0] * 0 + 1
        # E' = f' E, i.e. k e_k = sum_{j=1..k} j f_j e_{k-j}
        e = [one]
        for k in range(1, n + 1):
            acc = self.coeffs[0] * 0
            for j in range(1, k + 1):
                if not _is_zero(self.coeffs[j]):
                    acc = acc + self.coeffs[j] * (e[k - j] * j)
            e.append(acc * Fraction(1, k))
        return QSeries(e, n, self.var)

    def log(self) -> "QSeries":
        """``log`` of a series with constant term 1."""
        if self.coeffs[0] != 1:
            raise NonUnitLeading("log needs constant term 1")
        n = self.order
        dq = self.theta()
        quotient = dq * self.inverse()
        out = [self.coeffs[0] * 0]
        for k in range(1, n + 1):
            out.append(quotient.coeffs[k] * Fraction(1, k))
        return QSeries(out, n, self.var)

    def __eq__(self, other):
        if isinstance(other, QSeries):
            n, a, b = self._common(other)
            return all(a[i] == b[i] for i in range(n + 1))
        return NotImplemented

    __hash__ = None

    def render(self, var: str | None = None, big_o: bool = True, style: str = "star") -> str:
        """Text form.

        ``style="star"`` gives ``1 + 2*q^2``; ``style="space"`` gives
        ``1 + 2 q^2`` (used for potentials on the command line).
        """
        var = var or self.var
        parts = []
        for k, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            parts.append(_term(c, k, var, style))
        text = _join(parts) if parts else "0"
        if big_o:
            text += f" + O({var}^{self.order + 1})"
        return text

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"QSeries({self.render()})"


def _needs_parens(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return any(tok in body for tok in (" + ", " - ", " / "))


def _term(c, k: int, var: str, style: str) -> str:
    s = render(c)
    if k == 0:
        return s
    mono = var if k == 1 else f"{var}^{k}"
    sep = "*" if style == "star" else " "
    if _needs_parens(s):
        return f"({s}){sep}{mono}"
    if s == "1":
        return mono
    if s == "-1":
        return "-" + mono
    return f"{s}{sep}{mono}"


def _join(parts) -> str:
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-") and not p.startswith("-("):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


class LogSeries:
    """``log_coefficient * log(q) + tail(q)`` with ``tail(0) == 0``."""

    __slots__ = ("log_coefficient", "tail")

    def __init__(self, log_coefficient, tail: QSeries):
        if not _is_zero(tail.coeffs[0]):
            raise ValueError("tail of a LogSeries must have zero constant term")
        self.log_coefficient = log_coefficient
        self.tail = tail

    @property
    def order(self) -> int:
        return self.tail.order

    def theta(self) -> QSeries:
        d = self.tail.theta()
        c = list(d.coeffs)
        c[0] = c[0] + self.log_coefficient
        return QSeries(c, d.order, d.var)

    def __add__(self, other):
        if isinstance(other, LogSeries):
            return LogSeries(self.log_coefficient + other.log_coefficient, self.tail + other.tail)
        if isinstance(other, QSeries):
            if not _is_zero(other.coeffs[0]):
                raise ValueError("adding a series with constant term to a LogSeries")
            return LogSeries(self.log_coefficient, self.tail + other)
        return NotImplemented

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LogSeries(-self.log_coefficient, -self.tail)

    def __eq__(self, other):
        if isinstance(other, LogSeries):
            return self.log_coefficient == other.log_coefficient and self.tail == other.tail
        return NotImplemented

    __hash__ = None

    def render(self, big_o: bool = True) -> str:
        c = render(self.log_coefficient)
        head = "log(q)" if c == "1" else f"{c}*log(q)" if not _needs_parens(c) else f"({c})*log(q)"
        if _is_zero(self.log_coefficient):
            head = ""
        tail = self.tail.render(big_o=big_o)
        if not head:
            return tail
        if tail.startswith("0"):
            tail = tail[1:].lstrip()
            return head + (" " + tail if tail else "")
        if tail.startswith("-"):
            return f"{head} - {tail[1:]}"
        return f"{head} + {tail}"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LogSeries({self.render()})"


def theta(f):
    """``q d/dq`` on a :class:`QSeries` or :class:`LogSeries` (``theta(log q) = 1``)."""
    return f.theta()


def series_arith(a: QSeries, b: QSeries, op: str) -> QSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "compose":
        return a.compose(b)
    raise ValueError(f"unknown operation {op!r}")


def invert_mirror_map(t: LogSeries, order: int | None = None) -> QSeries:
    """Solve ``t(q(x)) = log x`` for ``q(x) = x + O(x^2)``.

    Uses the fixed-point iteration ``q <- x * exp(-tail(q))``; each pass fixes
    one more coefficient, so ``order`` passes are exact.
    """
    if t.log_coefficient != 1:
        raise UnnormalizedMirrorMap(f"log coefficient is {render(t.log_coefficient)}, expected 1")
    n = t.order if order is None else min(order, t.order)
    tail = t.tail.truncate(n)
    one = Fraction(1)
    x = QSeries.monomial(1, n, one, var="x")
    q = x
    for _ in range(n):
        q = x * (-tail.compose(q)).exp()
    return q
