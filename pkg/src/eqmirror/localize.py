"""Torus localization for genus-0 invariants of the local projective plane.

Fixed loci of the moduli of stable maps are labelled by colored trees: each
vertex sits at one of the three fixed points (its color), and each edge is a
degree ``d_e`` cover of the coordinate line joining the colors of its ends.
The contribution of a tree is the usual Kontsevich graph sum for ``P^2``
twisted by the Euler class of the obstruction bundle of ``O(-3)``.  With
``omega_F = (l_i - l_j)/d_e`` the tangent weight of the flag at a vertex of
color ``i``:

* edge: ``(-1)^d d^{2d} / ((d!)^2 (l_i - l_j)^{2d})
  * prod_{a=0..d} 1/((a/d) l_i + ((d-a)/d) l_j - l_k)`` with ``k`` the third
  color, times the obstruction ``prod_{a=1..3d-1} (-3 l_i + a omega_F)``;
* vertex of valence ``n``: ``prod_{j != i} (l_i - l_j)^{n-1}
  * (sum_F 1/omega_F)^{n-3} * prod_F 1/omega_F * (-3 l_i)^{n-1}``;
* overall ``1/(|Aut| * prod_e d_e)``.

The refined generating function grades each tree by its colored degree:
``d_1`` collects the degrees of edges joining colors 2 and 3, ``d_2`` those
joining 1 and 3, ``d_3`` those joining 1 and 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Sequence

from .errors import DegenerateWeights
from .scalars import OMEGA, Cyclotomic, as_scalar, render
from .series import QSeries

__all__ = [
    "ColoredTree",
    "RefinedGF",
    "amplitude",
    "brute_force_classes",
    "check_admissibility",
    "recolor",
    "colored_degree",
    "enumerate_trees",
    "refined_gf",
    "REFERENCE_WEIGHTS",
]

COLORS = (1, 2, 3)
REFERENCE_WEIGHTS = (Cyclotomic(1), OMEGA, OMEGA * OMEGA)
DEFAULT_MAX_DEGREE = 6


@dataclass(frozen=True)
class ColoredTree:
    """Vertices ``0..n-1`` with colors; edges ``(u, v, degree)``."""

    colors: tuple
    edges: tuple
    automorphisms: int = 1

    @property
    def degree(self) -> int:
        return sum(d for _, _, d in self.edges)

    def valence(self, v: int) -> int:
        return sum(1 for a, b, _ in self.edges if v in (a, b))

    def flags(self, v: int):
        """``(neighbour, degree)`` for every edge at ``v``."""
        for a, b, d in self.edges:
            if a == v:
                yield b, d
            elif b == v:
                yield a, d

    def __str__(self):
        es = ", ".join(f"{self.colors[a]}-{self.colors[b]}:{d}" for a, b, d in self.edges)
        return f"tree[{es}] |Aut|={self.automorphisms}"


def _adjacency(n: int, edges) -> list[list[tuple[int, int]]]:
    adj = [[] for _ in range(n)]
    for a, b, d in edges:
        adj[a].append((b, d))
        adj[b].append((a, d))
    return adj


def _rooted(adj, colors, v: int, parent: int):
    """Canonical rooted form and the order of its automorphism group."""
    kids = []
    aut = 1
    for u, d in adj[v]:
        if u == parent:
            continue
        form, a = _rooted(adj, colors, u, v)
        kids.append((d, form))
        aut *= a
    kids.sort()
    for _, group in itertools.groupby(kids):
        aut *= factorial(len(list(group)))
    return (colors[v], tuple(kids)), aut


def canonical_form(colors: Sequence[int], edges) -> tuple:
    """Isomorphism invariant of a colored, edge-weighted tree."""
    adj = _adjacency(len(colors), edges)
    return min(_rooted(adj, colors, v, -1)[0] for v in range(len(colors)))


def _automorphisms(colors, edges) -> int:
    adj = _adjacency(len(colors), edges)
    forms = [_rooted(adj, colors, v, -1) for v in range(len(colors))]
    best = min(f for f, _ in forms)
    orbit = sum(1 for f, _ in forms if f == best)
    return orbit * next(a for f, a in forms if f == best)


def _make(colors, edges) -> ColoredTree:
    return ColoredTree(tuple(colors), tuple(edges), _automorphisms(colors, edges))


@lru_cache(maxsize=None)
def _trees(d: int) -> tuple:
    found: dict = {}

    def add(colors, edges):
        key = canonical_form(colors, edges)
        if key not in found:
            found[key] = _make(colors, edges)

    for a, b in itertools.combinations(COLORS, 2):
        add((a, b), ((0, 1, d),))
    for b in range(1, d):
        for t in _trees(d - b):
            n = len(t.colors)
            for v in range(n):
                for c in COLORS:
                    if c != t.colors[v]:
                        add(t.colors + (c,), t.edges + ((v, n, b),))
    return tuple(found[k] for k in sorted(found))


def enumerate_trees(d: int, max_degree: int = DEFAULT_MAX_DEGREE) -> list[ColoredTree]:
    """All isomorphism classes of colored trees of total degree ``d``."""
    if not 1 <= d <= max_degree:
        raise ValueError(f"degree must lie in 1..{max_degree}")
    return list(_trees(d))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _prufer_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return edges


def _brute_key(colors, edges) -> tuple:
    """Canonical key by trying every relabelling (small trees only)."""
    n = len(colors)
    best = None
    for perm in itertools.permutations(range(n)):
        cs = tuple(colors[perm.index(i)] for i in range(n))
        es = tuple(sorted((min(perm[a], perm[b]), max(perm[a], perm[b]), d) for a, b, d in edges))
        key = (cs, es)
        if best is None or key < best:
            best = key
    return best


def brute_force_classes(d: int) -> tuple[int, Fraction]:
    """Count classes and ``sum 1/|Aut|`` from labelled trees.

    Labelled trees come from Pruefer sequences; classes are found by trying
    every relabelling.  ``sum 1/|Aut|`` equals the labelled count divided by
    ``n!`` for each vertex count ``n``.
    """
    keys = set()
    mass = Fraction(0)
    for edges_count in range(1, d + 1):
        n = edges_count + 1
        seqs = [()] if n == 2 else itertools.product(range(n), repeat=n - 2)
        labelled = 0
        for seq in seqs:
            shape = _prufer_edges(seq, n) if n > 2 else [(0, 1)]
            for colors in itertools.product(COLORS, repeat=n):
                if any(colors[a] == colors[b] for a, b in shape):
                    continue
                for degs in _compositions(d, edges_count):
                    edges = [(a, b, x) for (a, b), x in zip(shape, degs)]
                    labelled += 1
                    keys.add(_brute_key(colors, edges))
        mass += Fraction(labelled, factorial(n))
    return len(keys), mass


def colored_degree(t: ColoredTree) -> tuple[int, int, int]:
    out = [0, 0, 0]
    for a, b, d in t.edges:
        third = 6 - t.colors[a] - t.colors[b]
        out[third - 1] += d
    return tuple(out)


def _weights(weights) -> tuple:
    ws = tuple(Cyclotomic._lift(as_scalar(w)) for w in weights)
    if len(ws) != 3:
        raise ValueError("need three weights")
    if len({(w.a, w.b) for w in ws}) < 3:
        raise DegenerateWeights("torus weights must be pairwise distinct")
    return ws


def _edge_factor(li, lj, lk, d: int):
    tangent = Fraction((-1) ** d * d ** (2 * d), factorial(d) ** 2) / (li - lj) ** (2 * d)
    for a in range(d + 1):
        tangent = tangent / (li * Fraction(a, d) + lj * Fraction(d - a, d) - lk)
    om = (li - lj) / d
    obstruction = Cyclotomic(1)
    for a in range(1, 3 * d):
        obstruction = obstruction * (li * -3 + om * a)
    return tangent * obstruction


def amplitude(t: ColoredTree, weights=REFERENCE_WEIGHTS):
    """Exact contribution of one tree, automorphisms included."""
    lam = dict(zip(COLORS, _weights(weights)))
    value = Cyclotomic(Fraction(1, t.automorphisms))
    for a, b, d in t.edges:
        ci, cj = t.colors[a], t.colors[b]
        ck = 6 - ci - cj
        value = value * _edge_factor(lam[ci], lam[cj], lam[ck], d) / d
    for v, c in enumerate(t.colors):
        li = lam[c]
        n = t.valence(v)
        oms = [(li - lam[t.colors[u]]) / d for u, d in t.flags(v)]
        inv_sum = Cyclotomic(0)
        prod = Cyclotomic(1)
        for om in oms:
            inv_sum = inv_sum + 1 / om
            prod = prod / om
        tangent = Cyclotomic(1)
        for c2 in COLORS:
            if c2 != c:
                tangent = tangent * (li - lam[c2])
        value = value * tangent ** (n - 1) * inv_sum ** (n - 3) * prod * (li * -3) ** (n - 1)
    return value


VARS = ("x1", "x2", "x3")


def _signed_term(c, body: str) -> str:
    t = render(c)
    if not body:
        return t
    if t == "1":
        return body
    if t == "-1":
        return "-" + body
    return f"{t} {body}"


def _join_terms(terms: list[str]) -> str:
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


class RefinedGF:
    """``sum c * x1^a x2^b x3^c w^d`` keyed by ``(d, (a, b, c))``."""

    def __init__(self, terms: Mapping, dmax: int):
        self.terms = {k: v for k, v in terms.items() if v}
        self.dmax = dmax

    def coefficient(self, exps: Sequence[int], wdeg: int | None = None):
        exps = tuple(exps)
        wdeg = sum(exps) if wdeg is None else wdeg
        return self.terms.get((wdeg, exps), Fraction(0))

    def degree_part(self, d: int) -> dict:
        return {e: c for (wd, e), c in self.terms.items() if wd == d}

    def specialize(self, bindings: Mapping[str, object]) -> "RefinedGF":
        vals = [bindings.get(n) for n in VARS]
        unknown = set(bindings) - set(VARS)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        out: dict = {}
        for (wd, exps), c in self.terms.items():
            new = list(exps)
            for i, v in enumerate(vals):
                if v is not None:
                    c = c * as_scalar(v) ** exps[i]
                    new[i] = 0
            key = (wd, tuple(new))
            out[key] = out.get(key, Fraction(0)) + c
        return RefinedGF(out, self.dmax)

    def as_series(self) -> QSeries:
        """Series in ``w``; every x-variable must have been specialized."""
        coeffs = [Fraction(0)] * (self.dmax + 1)
        for (wd, exps), c in self.terms.items():
            if any(exps):
                raise ValueError("specialize every x-variable first")
            coeffs[wd] += c
        return QSeries(coeffs, self.dmax, var="w")

    def is_symmetric(self, d: int | None = None) -> bool:
        degrees = range(1, self.dmax + 1) if d is None else [d]
        for wd in degrees:
            part = self.degree_part(wd)
            for exps, c in part.items():
                for perm in itertools.permutations(exps):
                    if part.get(perm) != c:
                        return False
        return True

    def __eq__(self, other):
        if not isinstance(other, RefinedGF):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def render(self) -> str:
        """``(x1 + x2 + x3) w + (-7/8 x1^2 - ...) w^2``; bare coefficients
        when every x-variable has been specialized."""
        chunks = []
        for wd in range(1, self.dmax + 1):
            part = self.degree_part(wd)
            if not part:
                continue
            monos = []
            for exps in sorted(part, reverse=True):
                factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(VARS, exps) if e]
                monos.append((part[exps], " ".join(factors)))
            wpow = "w" if wd == 1 else f"w^{wd}"
            if len(monos) == 1 and not monos[0][1]:
                chunks.append(_signed_term(monos[0][0], wpow))
            else:
                inner = _join_terms([_signed_term(c, body) for c, body in monos])
                chunks.append(f"({inner}) {wpow}")
        return _join_terms(chunks) if chunks else "0"

    def __str__(self):
        return self.render()

    def to_dict(self) -> dict:
        return {
            "dmax": self.dmax,
            "terms": [[wd, list(e), render(c)] for (wd, e), c in sorted(self.terms.items())],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RefinedGF":
        terms = {(wd, tuple(e)): Fraction(c) for wd, e, c in data["terms"]}
        return cls(terms, data["dmax"])


def refined_gf(dmax: int, weights=REFERENCE_WEIGHTS) -> RefinedGF:
    """Refined generating function through total degree ``dmax``.

    Raises ``ValueError`` if a coefficient is not rational, which happens for
    weights outside the admissible family.
    """
    return RefinedGF(dict(_refined_terms(dmax, tuple(weights))), dmax)


@lru_cache(maxsize=8)
def _refined_terms(dmax: int, weights: tuple) -> tuple:
    if dmax < 1:
        raise ValueError("dmax must be at least 1")
    terms: dict = {}
    for d in range(1, dmax + 1):
        acc: dict = {}
        for t in enumerate_trees(d, max(dmax, DEFAULT_MAX_DEGREE)):
            key = colored_degree(t)
            acc[key] = acc.get(key, Cyclotomic(0)) + amplitude(t, weights)
        for key, v in acc.items():
            if not v.is_rational():
                raise ValueError(f"coefficient of x^{key} is not rational: {v}")
            terms[(d, key)] = v.a
    return tuple(terms.items())


def recolor(t: ColoredTree, perm: Mapping[int, int]) -> ColoredTree:
    return ColoredTree(tuple(perm[c] for c in t.colors), t.edges, t.automorphisms)


def check_admissibility(weights, degree: int = 3) -> bool:
    """True iff, for some relabelling of the colors, every tree amplitude up
    to ``degree`` agrees with the amplitude at ``(1, omega, omega^2)``.

    A common rescaling of the weights needs no special treatment because each
    amplitude is homogeneous of degree zero.
    """
    try:
        _weights(weights)
    except DegenerateWeights:
        return False
    trees = [t for d in range(1, degree + 1) for t in enumerate_trees(d, max(degree, DEFAULT_MAX_DEGREE))]
    for perm in itertools.permutations(COLORS):
        sigma = dict(zip(COLORS, perm))
        if all(amplitude(t, weights) == amplitude(recolor(t, sigma), REFERENCE_WEIGHTS) for t in trees):
            return True
    return False
