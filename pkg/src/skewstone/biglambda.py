"""The spaces ``Lambda_n(S)`` of proper morphisms ``S -> n+2``.

At finite scale the product topology on ``{0..n+1}^S`` restricted to these
morphisms is discrete.  The topology is therefore carried only by the
subbase catalogue ``L(s, i)`` and a certificate that every singleton is a
finite intersection of subbase sets.

Points are indexed by their ``(F, f)`` encoding in lexicographic order:
``F`` is the atom class that the morphism does not kill and ``f`` is the
tuple of values on the germs of ``F``.  When ``S`` is itself a
``lambda_n(Y)`` algebra the points are :class:`EvalPoint` objects
``(y, g)``, with ``g`` a transformation of ``{1..n+1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .algebra import (SkewBA, dual_of_hom, hom_from_dual, is_homomorphism, iter_homs,
                      primitive)
from .errors import NotProper
from .lambda_n import LambdaAlgebra
from .stone import FiniteBooleanSpace


@dataclass(frozen=True)
class EvalPoint:
    """The morphism ``f -> g(f(y))`` out of ``lambda_m(Y)`` (0 stays 0)."""

    y: int
    g: tuple

    def __call__(self, f) -> int:
        v = f[self.y]
        return self.g[v - 1] if v else 0


@dataclass(frozen=True, eq=False)
class BigLambdaSpace:
    source: object
    n: int
    points: tuple
    labels: tuple
    _index: dict = field(repr=False)

    def __len__(self):
        return len(self.points)

    @cached_property
    def space(self) -> FiniteBooleanSpace:
        return FiniteBooleanSpace(self.labels)

    def index_of(self, fn) -> int:
        """Index of the point equal to the morphism ``fn``."""
        S = self.source
        if isinstance(S, LambdaAlgebra):
            for y in range(S.width):
                if fn(S.atom(y, 1)):
                    g = tuple(fn(S.atom(y, i)) for i in range(1, S.n + 2))
                    return self._index[(y, g)]
            raise KeyError("zero map is not a point")
        return self._index[tuple(fn(s) for s in S.elements())]

    @cached_property
    def subbase(self) -> dict:
        """``(s, i) -> frozenset of point indices`` with ``phi(s) = i``,
        for ``1 <= i <= n+1`` (and ``i = 0`` for the identity check)."""
        S = self.source
        out = {}
        for s in S.elements():
            for i in range(self.n + 2):
                out[(s, i)] = frozenset(j for j, p in enumerate(self.points) if p(s) == i)
        return out

    def L(self, s, i) -> frozenset:
        return self.subbase[(s, i)]


@lru_cache(maxsize=128)
def build_biglambda(S, n: int) -> BigLambdaSpace:
    if isinstance(S, LambdaAlgebra):
        points, labels, index = [], [], {}
        for y in range(S.width):
            for g in itertools.product(range(1, n + 2), repeat=S.n + 1):
                index[(y, g)] = len(points)
                points.append(EvalPoint(y, g))
                labels.append((S.space.points[y], g))
        return BigLambdaSpace(S, n, tuple(points), tuple(labels), index)
    P = primitive(n)
    points = tuple(iter_homs(S, P))
    labels = tuple(encode_point(p) for p in points)
    index = {p.images: j for j, p in enumerate(points)}
    return BigLambdaSpace(S, n, points, labels, index)


def encode_point(phi) -> tuple:
    """``(F, f)``: the surviving atom class and the values on its germs."""
    S, P = phi.source, phi.target
    base, comps = dual_of_hom(phi, S, P)
    ((G, F),) = base.items()
    return F, tuple(comps[G][c] for c in S.stalk(F))


def decode_point(F, f, S: SkewBA, n: int):
    P = primitive(n)
    (G,) = P.atom_classes
    return hom_from_dual(S, P, {G: F}, {G: dict(zip(S.stalk(F), f))})


def encode_double_point(psi, Lam: BigLambdaSpace) -> tuple:
    """``(F, f, g)`` for a point ``psi`` of ``Lambda_n(lambda_n(Lambda_n(S)))``.

    ``Lam`` is ``Lambda_n(S)``; ``psi`` is any morphism out of
    ``lambda_n(Lam.space)`` into ``n+2``.
    """
    n = Lam.n
    T = LambdaAlgebra(Lam.space, n)
    for y in range(T.width):
        if psi(T.atom(y, 1)):
            g = tuple(psi(T.atom(y, i)) for i in range(1, n + 2))
            F, f = Lam.labels[y]
            return F, f, g
    raise NotProper("the zero map is not a point")


def decode_double_point(F, f, g, Lam: BigLambdaSpace) -> EvalPoint:
    return EvalPoint(Lam.labels.index((F, f)), tuple(g))


def _require_proper(h):
    S1, S2 = h.source, h.target
    if isinstance(S1, SkewBA):
        if not is_homomorphism(h.images, S1, S2).is_morphism:
            raise NotProper("Lambda_n is only defined on proper homomorphisms")
    elif not S2.in_top_class(h(S1.top())):
        raise NotProper("Lambda_n is only defined on proper homomorphisms")


def biglambda_on_hom(h, n: int, check: bool = True) -> tuple:
    """``Lambda_n(h): Lambda_n(S2) -> Lambda_n(S1)``, ``phi -> phi o h``.

    Returned as a tuple of point indices of ``Lambda_n(S1)``, one per point
    of ``Lambda_n(S2)``.
    """
    if check:
        _require_proper(h)
    L1 = build_biglambda(h.source, n)
    L2 = build_biglambda(h.target, n)
    return tuple(L1.index_of(lambda a, p=p: p(h(a))) for p in L2.points)


@dataclass
class SubbaseReport:
    identity_failures: list
    separation_failures: list
    discreteness: dict  # point index -> list of (s, i) whose L-sets meet in {point}

    @property
    def passed(self) -> bool:
        return (not self.identity_failures and not self.separation_failures
                and all(self.discreteness.values()))


def subbase_identity_check(S: SkewBA, n: int) -> SubbaseReport:
    """``L(s,0)`` is the union of ``L(t,i)`` over ``t`` with
    ``alpha(t) ^ alpha(s) = 0`` and ``1 <= i <= n+1``; points are separated
    by the ``L(s,i)``; singletons are finite intersections of them."""
    Lam = build_biglambda(S, n)
    zc = S.zero_class
    id_fail, sep_fail, disc = [], [], {}
    for s in S.elements():
        A = [t for t in S.elements() if S.class_of[S.meet(t, s)] == zc]
        union = frozenset().union(*(Lam.L(t, i) for t in A for i in range(1, n + 2)))
        if union != Lam.L(s, 0):
            id_fail.append(s)
    for j, k in itertools.permutations(range(len(Lam)), 2):
        if not any(j in Lam.L(s, i) and k not in Lam.L(s, i)
                   for s in S.elements() for i in range(1, n + 2)):
            sep_fail.append((j, k))
    everything = frozenset(range(len(Lam)))
    for j, (F, f) in enumerate(Lam.labels):
        cert = list(zip(S.stalk(F), f))
        meet = everything.intersection(*(Lam.L(s, i) for s, i in cert))
        disc[j] = cert if meet == {j} else []
    return SubbaseReport(id_fail, sep_fail, disc)


def preimage_law_failures(h, n: int) -> list:
    """``(s, i)`` where ``Lambda_n(h)^{-1}(L(s,i)) != L(h(s), i)``."""
    m = biglambda_on_hom(h, n)
    L1 = build_biglambda(h.source, n)
    L2 = build_biglambda(h.target, n)
    bad = []
    for s in h.source.elements():
        for i in range(1, n + 2):
            pre = frozenset(j for j, k in enumerate(m) if k in L1.L(s, i))
            if pre != L2.L(h(s), i):
                bad.append((s, i))
    return bad
