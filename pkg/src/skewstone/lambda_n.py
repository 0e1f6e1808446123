"""The algebras ``lambda_n(X)`` of maps from a finite space into ``{0..n+1}``.

An element is a value tuple, one entry per point of ``X`` in declared
order; operations are pointwise in the primitive algebra ``n+2``.  The
algebra is never tabulated unless :meth:`LambdaAlgebra.materialize` is
called, because the reflections built later reach ``3^32`` elements.

Three element encodings are supported: the value tuple, the tuple of
disjoint level sets ``(f^{-1}(1), ..., f^{-1}(n+1))`` and the flag
``f^{-1}({1..n+1}) >= f^{-1}({1..n}) >= ... >= f^{-1}(1)``.  At finite scale
every level set is compact, so there is no side condition to check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .algebra import (LazyHom, SkewBA, SkewHom, is_bijective, is_homomorphism, make_hom,
                      max_boolean_image)
from .errors import FlagNotDescending, SizeGuard
from .etale import spectrum_etale, ultrafilter_of
from .stone import FiniteBooleanSpace, dual_algebra_A, subset_index

MAX_MATERIALIZE = 1024


def _meet(a: int, b: int) -> int:
    return a if a and b else 0


def _join(a: int, b: int) -> int:
    return b if b else a


class LambdaAlgebra:
    """``lambda_n(X)``; implements the algebra protocol of :mod:`.algebra`.

    Atom classes are point indices ``y``; the germs over ``y`` are the
    elements ``e(y, i)`` that take value ``i`` at ``y`` and 0 elsewhere.
    """

    def __init__(self, X: FiniteBooleanSpace, n: int):
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.space = X
        self.n = n
        self.width = len(X)
        self.zero = (0,) * self.width
        self.atom_classes = tuple(range(self.width))

    def __eq__(self, other):
        return (isinstance(other, LambdaAlgebra)
                and self.space == other.space and self.n == other.n)

    def __hash__(self):
        return hash((self.space, self.n))

    def __repr__(self):
        return f"LambdaAlgebra(n={self.n}, points={len(self.space)})"

    @property
    def size(self) -> int:
        return (self.n + 2) ** self.width

    def elements(self):
        return itertools.product(range(self.n + 2), repeat=self.width)

    def index(self, f: Sequence[int]) -> int:
        i = 0
        for v in f:
            i = i * (self.n + 2) + v
        return i

    def element(self, i: int) -> tuple:
        out = []
        for _ in range(self.width):
            i, v = divmod(i, self.n + 2)
            out.append(v)
        return tuple(reversed(out))

    def meet(self, f, g) -> tuple:
        return tuple(_meet(a, b) for a, b in zip(f, g))

    def join(self, f, g) -> tuple:
        return tuple(_join(a, b) for a, b in zip(f, g))

    def rcomp(self, f, g) -> tuple:
        return tuple(a if b == 0 else 0 for a, b in zip(f, g))

    def leq(self, f, g) -> bool:
        return all(a == 0 or a == b for a, b in zip(f, g))

    def glb(self, f, g) -> tuple:
        return tuple(a if a == b else 0 for a, b in zip(f, g))

    def support(self, f) -> tuple:
        return tuple(1 if v else 0 for v in f)

    def atom(self, y: int, i: int) -> tuple:
        return tuple(i if k == y else 0 for k in range(self.width))

    def stalk(self, y: int) -> tuple:
        return tuple(self.atom(y, i) for i in range(1, self.n + 2))

    def atoms(self) -> list:
        return [self.atom(y, i) for y in range(self.width) for i in range(1, self.n + 2)]

    def germs_of(self, f) -> dict:
        return {y: self.atom(y, v) for y, v in enumerate(f) if v}

    def from_germs(self, germs: Mapping) -> tuple:
        out = [0] * self.width
        for y, g in germs.items():
            out[y] = g[y]
        return tuple(out)

    def top(self) -> tuple:
        return (1,) * self.width

    def in_top_class(self, f) -> bool:
        return all(f)

    def evaluate(self, f, x) -> int:
        return f[self.space.index(x)]

    def materialize(self) -> SkewBA:
        """Tabulate as a :class:`SkewBA` (canonical lexicographic order)."""
        return self._table

    @cached_property
    def _table(self) -> SkewBA:
        if self.size > MAX_MATERIALIZE:
            raise SizeGuard(f"lambda_{self.n} of {self.width} points has {self.size} elements")
        els = list(self.elements())
        meet = [[self.index(self.meet(f, g)) for g in els] for f in els]
        join = [[self.index(self.join(f, g)) for g in els] for f in els]
        names = ["".join(map(str, f)) for f in els]
        return SkewBA(meet, join, 0, names)

    def table_hom(self):
        """The isomorphism ``materialize() -> self`` (index to value tuple)."""
        T = self.materialize()
        return SkewHom(T, self, tuple(self.element(i) for i in T.elements()))


def build_lambda(X: FiniteBooleanSpace, n: int) -> LambdaAlgebra:
    return LambdaAlgebra(X, n)


def level_sets(L: LambdaAlgebra, f) -> tuple:
    """``(f^{-1}(1), ..., f^{-1}(n+1))`` as frozensets of point labels."""
    pts = L.space.points
    return tuple(frozenset(p for p, v in zip(pts, f) if v == i) for i in range(1, L.n + 2))


def from_level_sets(L: LambdaAlgebra, parts: Sequence) -> tuple:
    seen = set()
    for part in parts:
        if seen & set(part):
            raise ValueError("level sets must be pairwise disjoint")
        seen |= set(part)
    return tuple(next((i for i, part in enumerate(parts, 1) if p in part), 0)
                 for p in L.space.points)


def to_flag(L: LambdaAlgebra, f) -> tuple:
    """``(A_{n+1}, ..., A_1)`` with ``A_j = f^{-1}({1..j})``, highest first."""
    pts = L.space.points
    return tuple(frozenset(p for p, v in zip(pts, f) if 1 <= v <= j)
                 for j in range(L.n + 1, 0, -1))


def _check_flag(flag):
    for big, small in zip(flag, flag[1:]):
        if not set(small) <= set(big):
            raise FlagNotDescending("flag sets must shrink")


def from_flag(L: LambdaAlgebra, flag: Sequence) -> tuple:
    _check_flag(flag)
    if len(flag) != L.n + 1:
        raise ValueError(f"a flag for n={L.n} has {L.n + 1} sets")
    ascending = list(reversed(flag))  # A_1, ..., A_{n+1}
    return tuple(next((j for j, A in enumerate(ascending, 1) if p in A), 0)
                 for p in L.space.points)


def flag_join(F: Sequence, G: Sequence, n: int) -> tuple:
    """``C_i = (A_i minus B_{n+1}) union B_i``."""
    _check_flag(F)
    _check_flag(G)
    top_g = frozenset(G[0])
    return tuple((frozenset(a) - top_g) | frozenset(b) for a, b in zip(F, G))


def flag_meet(F: Sequence, G: Sequence, n: int) -> tuple:
    """``D_i = A_i intersect B_{n+1}``."""
    _check_flag(F)
    _check_flag(G)
    top_g = frozenset(G[0])
    return tuple(frozenset(a) & top_g for a in F)


def empty_flag(n: int) -> tuple:
    return (frozenset(),) * (n + 1)


@dataclass(frozen=True)
class LambdaElement:
    """An element of ``lambda_n(X)`` with its three encodings."""

    n: int
    space: FiniteBooleanSpace
    values: tuple

    @classmethod
    def from_mapping(cls, X, n, mapping: Mapping) -> "LambdaElement":
        return cls(n, X, tuple(int(mapping[p]) for p in X.points))

    @property
    def algebra(self) -> LambdaAlgebra:
        return LambdaAlgebra(self.space, self.n)

    @property
    def mapping(self) -> dict:
        return dict(zip(self.space.points, self.values))

    @property
    def parts(self) -> tuple:
        return level_sets(self.algebra, self.values)

    @property
    def flag(self) -> tuple:
        return to_flag(self.algebra, self.values)

    @property
    def support(self) -> frozenset:
        return frozenset(p for p, v in zip(self.space.points, self.values) if v)


def lambda_on_map(g: Mapping, X1: FiniteBooleanSpace, X2: FiniteBooleanSpace, n: int):
    """``lambda_n(g): lambda_n(X2) -> lambda_n(X1)``, ``f -> f o g``."""
    L1, L2 = LambdaAlgebra(X1, n), LambdaAlgebra(X2, n)
    pos = [X2.index(g[x]) for x in X1.points]
    return LazyHom(L2, L1, lambda f: tuple(f[j] for j in pos))


def tabulate(h, source: LambdaAlgebra, target=None) -> SkewHom:
    """Tabulate a hom out of ``source`` over its materialized table."""
    S = source.materialize()
    tgt = target if target is not None else h.target
    if isinstance(tgt, LambdaAlgebra):
        T = tgt.materialize()
        return make_hom(S, T, lambda i: tgt.index(h(source.element(i))))
    return make_hom(S, tgt, lambda i: h(source.element(i)))


# -- ultrafilters and structure lemmas ---------------------------------------


def N_x(L: LambdaAlgebra, x) -> frozenset:
    """Ultrafilter of ``L/D`` at ``x``, as a set of supports (D-classes)."""
    j = L.space.index(x)
    return frozenset(s for s in itertools.product((0, 1), repeat=L.width) if s[j])


def N_xi(L: LambdaAlgebra, x, i: int) -> frozenset:
    """``{f : f(x) = i}`` as a set of value tuples."""
    j = L.space.index(x)
    return frozenset(f for f in L.elements() if f[j] == i)


def ultrafilter_families(X: FiniteBooleanSpace, n: int) -> tuple:
    L = LambdaAlgebra(X, n)
    nx = {x: N_x(L, x) for x in X.points}
    nxi = {(x, i): N_xi(L, x, i) for x in X.points for i in range(1, n + 2)}
    return nx, nxi


@dataclass
class LemmaReport:
    checks: dict  # name -> list of counterexamples

    @property
    def passed(self) -> bool:
        return all(not v for v in self.checks.values())

    def summary(self) -> dict:
        return {k: ("pass" if not v else f"fail: {v[:3]}") for k, v in self.checks.items()}


def d_and_order_lemmas(X: FiniteBooleanSpace, n: int) -> LemmaReport:
    """Check the D-class, order, intersection, quotient, flag and
    ultrafilter statements against the tabulated algebra."""
    L = LambdaAlgebra(X, n)
    S = L.materialize()
    els = [L.element(i) for i in S.elements()]
    ix = L.index
    checks = {name: [] for name in (
        "d_class", "order", "intersection", "quotient_iso", "flag_join", "flag_meet",
        "encodings", "ultrafilters", "alpha_image", "alpha_preimage", "stalk_size",
        "spectrum_copies")}

    for f in els:
        for g in els:
            a, b = ix(f), ix(g)
            same = S.class_of[a] == S.class_of[b]
            if same != (L.support(f) == L.support(g)):
                checks["d_class"].append((f, g))
            by_parts = all(pg <= pf for pf, pg in zip(level_sets(L, f), level_sets(L, g)))
            if S.leq(b, a) != by_parts:
                checks["order"].append((f, g))
            c = S.glb(a, b)
            want = from_level_sets(L, [pf & pg for pf, pg in
                                       zip(level_sets(L, f), level_sets(L, g))])
            if c is None or els[c] != want:
                checks["intersection"].append((f, g))
            F, G = to_flag(L, f), to_flag(L, g)
            if flag_join(F, G, n) != to_flag(L, els[S.join(a, b)]):
                checks["flag_join"].append((f, g))
            if flag_meet(F, G, n) != to_flag(L, els[S.meet(a, b)]):
                checks["flag_meet"].append((f, g))
        if (from_flag(L, to_flag(L, f)) != f
                or from_level_sets(L, level_sets(L, f)) != f):
            checks["encodings"].append(f)

    # S/D is isomorphic to lambda_0(X) via [f] -> support of f
    B, alpha = max_boolean_image(S)
    A0 = dual_algebra_A(X)
    reps = [c[0] for c in S.classes]
    hat = tuple(subset_index(X, {p for p, v in zip(X.points, L.support(els[r])) if v})
                for r in reps)
    if not (is_homomorphism(hat, B, A0).is_morphism
            and is_bijective(hat.__getitem__, B, A0)):
        checks["quotient_iso"].append("support map is not an isomorphism")

    nx, nxi = ultrafilter_families(X, n)
    spec = spectrum_etale(S)
    actual = {ultrafilter_of(S, c) for c in spec.germs}
    expected = {frozenset(ix(f) for f in members) for members in nxi.values()}
    if actual != expected:
        checks["ultrafilters"].append("spectrum differs from the N_{x,i} family")
    for (x, i), members in nxi.items():
        if {L.support(f) for f in members} != nx[x]:
            checks["alpha_image"].append((x, i))
    for x in X.points:
        union = set().union(*(nxi[(x, i)] for i in range(1, n + 2)))
        if union != {f for f in els if L.support(f) in nx[x]}:
            checks["alpha_preimage"].append(x)
    if any(len(spec.stalk(F)) != n + 1 for F in spec.base.points):
        checks["stalk_size"].append(spec.profile)
    # spectrum is n+1 disjoint copies of X: N_{x,i} -> (x, i) is a bijection
    # onto X x {1..n+1} compatible with projection to the base
    copies = {}
    for c in spec.germs:
        (y,) = [y for y, v in enumerate(els[c]) if v]
        copies[c] = (X.points[y], els[c][y])
    if sorted(copies.values(), key=repr) != sorted(
            ((x, i) for x in X.points for i in range(1, n + 2)), key=repr):
        checks["spectrum_copies"].append("germs do not match X x {1..n+1}")
    for F in spec.base.points:
        if len({copies[c][0] for c in spec.stalk(F)}) != 1:
            checks["spectrum_copies"].append(F)
    return LemmaReport(checks)
