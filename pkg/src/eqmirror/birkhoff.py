"""Fundamental solutions, Birkhoff factorization and J-functions.

The fundamental solution has one row per power of ``(p + theta)`` applied to
the I-function body and one column per coordinate in ``1, p, ..., p^{n-1}``.
At ``q^0`` it is the identity.

The exact factorization works degree by degree in q.  With ``Q_0 = Id`` and

    M_k = S_k + sum_{0<j<k} Q_j S_{k-j}

we set ``R_k`` to the part of ``M_k`` with only negative hbar powers on the
annulus and ``Q_k = -(M_k - R_k)``.  Then ``(Q S)_k = R_k`` for every k.
Entries are exact rational functions of hbar, so nothing is truncated.

A windowed variant over :class:`~eqmirror.hbar.HLaurent` is kept as an
independent check for specs whose inner poles all sit at ``hbar = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cohomring import CohomElement, CohomRelation
from .errors import DegenerateBasis, NotInterpolable, WindowExhausted
from .hbar import INNER, HLaurent, HRational
from .ifunc import IFunction, _shift_element
from .scalars import as_scalar, param, render
from .series import LogSeries, QSeries

__all__ = [
    "BirkhoffPair",
    "FundamentalSolution",
    "JFunction",
    "PoleProfile",
    "birkhoff_factorize",
    "birkhoff_truncated",
    "fundamental_solution",
    "interpolated_j",
    "j_function",
    "q_pole_profile",
    "reconstruct",
    "times_linear_product",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

Matrix = list  # list of rows of coefficients


def _zero_like(x):
    return x * 0


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b[0]), len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if not x or not y:
                    continue
                v = x * y
                acc = v if acc is None else acc + v
            row.append(acc if acc is not None else _zero_like(a[i][0]))
        out.append(row)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_neg(a: Matrix) -> Matrix:
    return [[-x for x in r] for r in a]


def mat_scale(a: Matrix, s) -> Matrix:
    return [[x * s for x in r] for r in a]


def identity(n: int, one=None) -> Matrix:
    one = HRational.const(_ONE) if one is None else one
    zero = one * 0
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def _is_identity(m: Matrix) -> bool:
    return all((m[i][j] == 1) if i == j else not m[i][j] for i in range(len(m)) for j in range(len(m)))


@dataclass
class FundamentalSolution:
    """``S = sum_k S_k q^k`` with ``S_0 = Id``."""

    mats: list  # list of n x n matrices of HRational
    basis: list = field(default_factory=list)
    relation: CohomRelation | None = None

    @property
    def order(self) -> int:
        return len(self.mats) - 1

    @property
    def size(self) -> int:
        return len(self.mats[0])

    def entry(self, i: int, j: int) -> QSeries:
        return QSeries([m[i][j] for m in self.mats], self.order)

    def render(self) -> str:
        lines = []
        for k, m in enumerate(self.mats):
            for i, row in enumerate(m):
                for j, c in enumerate(row):
                    if c:
                        lines.append(f"S[{i},{j}] q^{k}: {c}")
        return "\n".join(lines)


def _functional_matrix(rel: CohomRelation, basis) -> list[list]:
    """``B[i][c]`` = value of functional ``c`` on ``p^i``."""
    n = rel.degree
    rows = []
    for i in range(n):
        row = []
        for fn in basis:
            if fn == "coord":
                raise ValueError
            r, k = fn
            # k-th derivative of p^i at p = r
            if k > i:
                row.append(_ZERO)
            else:
                c = Fraction(1)
                for t in range(k):
                    c *= i - t
                row.append(c * as_scalar(r) ** (i - k))
        rows.append(row)
    return rows


def _rank(rows: list[list]) -> int:
    a = [list(r) for r in rows]
    rank, ncol = 0, len(a[0]) if a else 0
    for col in range(ncol):
        piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def parse_basis(items: Sequence[str]) -> list[tuple]:
    """``["p=0", "d/dp p=0", "p=-mu"]`` -> ``[(0, 0), (0, 1), (-mu, 0)]``."""
    out = []
    for s in items:
        s = s.strip().replace(" ", "")
        k = 0
        while s.startswith("d/dp"):
            k += 1
            s = s[4:]
        if s.startswith("|"):
            s = s[1:]
        if not s.startswith("p="):
            raise ValueError(f"cannot parse basis functional {s!r}")
        out.append((as_scalar(s[2:]), k))
    return out


def fundamental_solution(I: IFunction, basis: Sequence | None = None) -> FundamentalSolution:
    """Rows ``(p + theta)^j I`` for ``j < n``; columns are ring coordinates.

    ``basis`` lists the solutions used, as ``(root, derivative order)`` pairs
    or strings like ``"d/dp p=0"``.  Any ``n`` independent choices span the
    same space; after the change of basis that makes ``S_0 = Id`` the result
    is the coordinate form.  Dependent choices raise :class:`DegenerateBasis`.
    With ``basis=None`` the coordinates are used directly.
    """
    rel = I.relation
    n = rel.degree
    if basis is not None:
        basis = [b if isinstance(b, tuple) else parse_basis([b])[0] for b in basis]
        for r, _ in basis:
            if not rel.is_root(r):
                raise DegenerateBasis(f"p={render(r)} is not a root of {rel.text}")
        if len(basis) != n:
            raise DegenerateBasis(f"need {n} solutions, got {len(basis)}")
        # functionals act on canonical coordinates, so d/dp at a simple root is
        # still a combination of root evaluations; only rank matters
        if _rank(_functional_matrix(rel, basis)) < n:
            raise DegenerateBasis("chosen solutions are linearly dependent at q^0")
    mats = []
    for d, el in enumerate(I.coeffs):
        shift = _shift_element(rel, d, True)
        rows = []
        cur = el
        for j in range(n):
            rows.append(list(cur.coords))
            if j + 1 < n:
                cur = shift * cur
        mats.append(rows)
    return FundamentalSolution(mats, list(basis or []), rel)


@dataclass
class BirkhoffPair:
    Q: list  # matrices, Q[0] = Id, entries with hbar^{>=0} on the annulus
    R: list  # matrices, entries with hbar^{<0} for k >= 1
    relation: CohomRelation | None = None

    @property
    def order(self) -> int:
        return len(self.Q) - 1


def birkhoff_factorize(S: FundamentalSolution, q_order: int | None = None) -> BirkhoffPair:
    """Exact factorization ``S = Q^{-1} R``."""
    n_ord = S.order if q_order is None else min(q_order, S.order)
    if not _is_identity(S.mats[0]):
        raise ValueError("S(q=0) must be the identity")
    n = S.size
    Q = [identity(n)]
    R = [S.mats[0]]
    for k in range(1, n_ord + 1):
        M = S.mats[k]
        for j in range(1, k):
            M = mat_add(M, mat_mul(Q[j], S.mats[k - j]))
        Qk, Rk = [], []
        for row in M:
            qrow, rrow = [], []
            for x in row:
                inner, outer = x.split()
                qrow.append(-outer)
                rrow.append(inner)
            Qk.append(qrow)
            Rk.append(rrow)
        Q.append(Qk)
        R.append(Rk)
    return BirkhoffPair(Q, R, S.relation)


def reconstruct(pair: BirkhoffPair) -> list:
    """``Q^{-1} R`` degree by degree (for round-trip checks)."""
    inv = _q_inverse(pair)
    out = []
    for k in range(pair.order + 1):
        acc = None
        for j in range(k + 1):
            t = mat_mul(inv[j], pair.R[k - j])
            acc = t if acc is None else mat_add(acc, t)
        out.append(acc)
    return out


def birkhoff_truncated(S: FundamentalSolution, window: int, q_order: int | None = None):
    """Windowed factorization over :class:`HLaurent` entries.

    Returns ``(Q, R)`` as lists of matrices of HLaurent.  Raises
    :class:`WindowExhausted` when the window is too small to determine every
    negative power of ``R``.
    """
    n_ord = S.order if q_order is None else min(q_order, S.order)
    mats = [[[HLaurent.from_hrational(x, window) for x in row] for row in m] for m in S.mats[: n_ord + 1]]
    n = S.size
    one = HLaurent({0: _ONE}, window)
    zero = HLaurent({}, window)
    Q = [[[one if i == j else zero for j in range(n)] for i in range(n)]]
    R = [mats[0]]
    for k in range(1, n_ord + 1):
        M = mats[k]
        for j in range(1, k):
            M = mat_add(M, mat_mul(Q[j], mats[k - j]))
        for row in M:
            for x in row:
                if x.hi < -1:
                    raise WindowExhausted(
                        f"window {window} too small: q^{k} entries only known up to hbar^{x.hi}"
                    )
        Q.append([[-x.positive_part() for x in row] for row in M])
        R.append([[x.negative_part() for x in row] for row in M])
    return Q, R


@dataclass
class JFunction:
    """``J = q^{p/hbar} (1 + B_1/hbar + B_2/hbar^2 + ...)`` read off one row of R.

    ``body[e]`` is the q-series of ring elements multiplying ``hbar^{-e}``.
    """

    relation: CohomRelation
    body: dict  # e -> QSeries of CohomElement
    order: int

    @property
    def t0(self) -> QSeries:
        if self.relation.degree < 2:
            return QSeries.zero(self.order)
        return self.body[1].map(lambda el: el.coords[0])

    @property
    def t(self) -> LogSeries:
        if self.relation.degree < 2:
            tail = self.body[1].map(lambda el: el.coords[0])
        else:
            tail = self.body[1].map(lambda el: el.coords[1])
        return LogSeries(_ONE, tail)

    @property
    def W_raw(self) -> QSeries:
        return self.body[2]

    def W_hat(self) -> QSeries:
        """``B_2 - B_1^2 / 2``: the hbar^-2 coefficient of ``exp(-(pt+t0)/hbar) J``."""
        b1, b2 = self.body[1], self.body[2]
        return b2 - (b1 * b1) * Fraction(1, 2)

    def render(self) -> str:
        return "\n".join(
            [
                f"t0 = {self.t0}",
                f"t = {self.t}",
                f"W_raw = {_render_ring_series(self.W_raw)}",
            ]
        )


def _render_ring_series(s: QSeries) -> str:
    parts = []
    for k, el in enumerate(s.coeffs):
        if el:
            parts.append(f"({el})*q^{k}" if k else f"({el})")
    body = " + ".join(parts) if parts else "0"
    return f"{body} + O(q^{s.order + 1})"


def _body_from_row(row_series: list, rel: CohomRelation, depth: int) -> dict:
    """Expand each coordinate at infinity and collect hbar^{-e}, e = 1..depth."""
    order = len(row_series) - 1
    body = {e: [] for e in range(0, depth + 1)}
    for k in range(order + 1):
        coords = row_series[k]
        exps = [c.expand_at_infinity(-depth) if c else {} for c in coords]
        for e in range(0, depth + 1):
            body[e].append(CohomElement(rel, [x.get(-e, _ZERO) for x in exps]))
    return {e: QSeries(v, order) for e, v in body.items()}


def j_function(pair: BirkhoffPair, depth: int = 3) -> JFunction:
    """J-function from the first row of ``R``."""
    rel = pair.relation
    rows = [R[0] for R in pair.R]
    for k, row in enumerate(rows[1:], start=1):
        for c in row:
            if c and c.degree() is not None and c.degree() >= 0:
                raise ValueError(f"R_{k} has non-negative hbar powers")
    body = _body_from_row(rows, rel, depth)
    return JFunction(rel, body, pair.order)


def _q_inverse(pair: BirkhoffPair) -> list:
    """Coefficients of ``Q^{-1} = Id + sum_k P_k q^k``."""
    n = len(pair.Q[0])
    inv = [identity(n)]
    for k in range(1, pair.order + 1):
        acc = None
        for j in range(1, k + 1):
            t = mat_mul(pair.Q[j], inv[k - j])
            acc = t if acc is None else mat_add(acc, t)
        inv.append(mat_neg(acc))
    return inv


def interpolated_j(pair: BirkhoffPair, w="w", depth: int = 3, mode: str = "inverse") -> JFunction:
    """J-function of a w-deformed factorization, read at hbar = oo.

    ``mode="inverse"`` (default) uses ``S' = (Id + w (Q^{-1} - Id)) R``, the
    straight line from ``R`` (w=0) to ``S`` (w=1); its mirror maps are linear
    in w.  ``mode="literal"`` uses ``S' = (Id + w sum_{k>0} Q_k q^k)^{-1} R``.
    Both agree at w=0 and w=1.

    Every ``Q_k`` entry must stay bounded at hbar = oo so that it can be
    re-expanded in ``1/hbar``; otherwise :class:`NotInterpolable` is raised.
    ``w`` may be a parameter name or a scalar.
    """
    if mode not in ("inverse", "literal"):
        raise ValueError(f"unknown mode {mode!r}")
    wv = param(w) if isinstance(w, str) else as_scalar(w)
    n = len(pair.Q[0])
    for k, Qk in enumerate(pair.Q[1:], start=1):
        for row in Qk:
            for c in row:
                if c and c.degree() > 0:
                    raise NotInterpolable(f"Q_{k} grows at hbar = oo (degree {c.degree()})")
    if mode == "inverse":
        X = [identity(n)] + [mat_scale(P, wv) for P in _q_inverse(pair)[1:]]
    else:
        # X = (Id + w Qtilde)^{-1}: X_0 = Id, X_k = -w sum_{j=1..k} Q_j X_{k-j}
        X = [identity(n)]
        for k in range(1, pair.order + 1):
            acc = None
            for j in range(1, k + 1):
                t = mat_mul(pair.Q[j], X[k - j])
                acc = t if acc is None else mat_add(acc, t)
            X.append(mat_scale(acc, -wv))
    rows = []
    for k in range(pair.order + 1):
        acc = None
        for j in range(k + 1):
            t = mat_mul([X[j][0]], pair.R[k - j])[0]
            acc = t if acc is None else [a + b for a, b in zip(acc, t)]
        rows.append([c.retag(INNER) for c in acc])
    for k, row in enumerate(rows):
        for c in row:
            if c and c.degree() > 0:
                raise NotInterpolable(f"positive hbar powers survive at q^{k}")
    body = _body_from_row(rows, pair.relation, depth)
    lead = body[0]
    for k in range(1, lead.order + 1):
        if lead.coeffs[k]:
            raise NotInterpolable(f"hbar^0 part of the interpolated row is not 1 at q^{k}")
    return JFunction(pair.relation, body, pair.order)


@dataclass
class PoleProfile:
    """Poles of the entries of one ``Q_k``: ``hbar = alpha`` with the largest
    multiplicity seen, plus the largest degree at infinity."""

    k: int
    poles: dict  # alpha -> multiplicity
    max_degree: int | None

    def render(self) -> str:
        ps = ", ".join(f"{render(a)}^{m}" for a, m in self.poles.items()) or "none"
        return f"Q_{self.k}: poles {ps}; degree at oo {self.max_degree}"


def q_pole_profile(pair: BirkhoffPair) -> list[PoleProfile]:
    out = []
    for k, Qk in enumerate(pair.Q[1:], start=1):
        poles: dict = {}
        deg = None
        for row in Qk:
            for c in row:
                if not c:
                    continue
                d = c.degree()
                deg = d if deg is None else max(deg, d)
                for alpha, m, _ in c.poles.values():
                    key = next((a for a in poles if a == alpha), alpha)
                    poles[key] = max(poles.get(key, 0), m)
        out.append(PoleProfile(k, poles, deg))
    return out


def times_linear_product(pair: BirkhoffPair, weight, k: int) -> list:
    """Entries of ``Q_k * prod_{m=1..k} (m hbar + weight)``."""
    factor = HRational.const(_ONE)
    for m in range(1, k + 1):
        factor = factor * HRational.linear(as_scalar(weight), Fraction(m))
    return [[c * factor for c in row] for row in pair.Q[k]]
