"""Finite etale spaces, their section algebras, and spectra of algebras.

Direction convention for cohomomorphisms: ``k: B ~> A`` over a base map
``f: X -> Y``, where ``A`` lies over ``X`` and ``B`` over ``Y``, has one
component ``k_x: B_{f(x)} -> A_x`` for each point ``x`` of ``X``.  So the
base map runs *against* the arrow.  ``Cohomomorphism.source`` is ``B``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Mapping

from .algebra import (SkewBA, SkewHom, dual_of_hom, hom_from_dual, is_homomorphism, iter_homs,
                      primitive)
from .errors import NotProper
from .stone import FiniteBooleanSpace


@dataclass(frozen=True)
class EtaleSpace:
    base: FiniteBooleanSpace
    germs: tuple
    projection: tuple  # (germ, base point) pairs

    def __post_init__(self):
        proj = dict(self.projection)
        if set(proj) != set(self.germs) or len(proj) != len(self.germs):
            raise ValueError("projection must be defined on every germ")
        if set(proj.values()) - set(self.base.points):
            raise ValueError("projection lands outside the base")
        if set(self.base.points) - set(proj.values()):
            raise ValueError("projection must be surjective (empty stalk)")

    @classmethod
    def from_stalks(cls, base, stalks: Mapping) -> "EtaleSpace":
        """Germs are auto-named ``"x.1", "x.2", ...``."""
        base = base if isinstance(base, FiniteBooleanSpace) else FiniteBooleanSpace(base)
        germs, proj = [], []
        for x in base.points:
            for j in range(1, stalks[x] + 1):
                g = f"{x}.{j}"
                germs.append(g)
                proj.append((g, x))
        return cls(base, tuple(germs), tuple(proj))

    @classmethod
    def from_profile(cls, profile) -> "EtaleSpace":
        labels = [f"x{i}" for i in range(len(profile))]
        return cls.from_stalks(labels, dict(zip(labels, profile)))

    def project(self, germ):
        return self._proj[germ]

    @cached_property
    def _proj(self) -> dict:
        return dict(self.projection)

    @cached_property
    def _stalks(self) -> dict:
        out = {x: [] for x in self.base.points}
        for g in self.germs:
            out[self._proj[g]].append(g)
        return {x: tuple(gs) for x, gs in out.items()}

    def stalk(self, x) -> tuple:
        return self._stalks[x]

    @property
    def profile(self) -> tuple:
        return tuple(len(self.stalk(x)) for x in self.base.points)


def section_domain(E: EtaleSpace, section) -> frozenset:
    return frozenset(E.project(g) for g in section)


def is_section(E: EtaleSpace, germs) -> bool:
    return len(section_domain(E, germs)) == len(germs)


@dataclass(frozen=True, eq=False)
class SectionAlgebra:
    space: EtaleSpace
    sections: tuple  # frozensets of germs, in canonical order
    algebra: SkewBA
    index: dict = field(repr=False)


def _override_join(E, A, B):
    dom_b = section_domain(E, B)
    return frozenset(B) | frozenset(g for g in A if E.project(g) not in dom_b)


def _restrict_meet(E, A, B):
    dom_b = section_domain(E, B)
    return frozenset(g for g in A if E.project(g) in dom_b)


@lru_cache(maxsize=256)
def sections_algebra(E: EtaleSpace) -> SectionAlgebra:
    """All sections under override-join and domain-restriction meet.

    Canonical order: lexicographic over base points of (0 if undefined,
    else 1 + position of the chosen germ in the stalk).
    """
    stalks = [E.stalk(x) for x in E.base.points]
    sections = [
        frozenset(st[c - 1] for st, c in zip(stalks, choice) if c)
        for choice in itertools.product(*(range(len(st) + 1) for st in stalks))
    ]
    index = {s: i for i, s in enumerate(sections)}
    meet = [[index[_restrict_meet(E, a, b)] for b in sections] for a in sections]
    join = [[index[_override_join(E, a, b)] for b in sections] for a in sections]
    names = ["{" + ",".join(sorted(map(str, s))) + "}" for s in sections]
    return SectionAlgebra(E, tuple(sections), SkewBA(meet, join, 0, names), index)


# -- spectrum ----------------------------------------------------------------


def spectrum_etale(S: SkewBA) -> EtaleSpace:
    """The etale space of ultrafilters of ``S``.

    The base has one point per atom D-class (labelled by its class index);
    the germ ``c`` (an element of an atom class) stands for the ultrafilter
    ``up(c)``, which projects to the class of ``c``.
    """
    base = FiniteBooleanSpace(S.atom_classes)
    germs = tuple(c for F in S.atom_classes for c in S.stalk(F))
    proj = tuple((c, S.class_of[c]) for c in germs)
    return EtaleSpace(base, germs, proj)


def ultrafilter_of(S: SkewBA, germ: int) -> frozenset:
    return frozenset(b for b in S.elements() if S.leq(germ, b))


def ultrafilters_by_definition(S: SkewBA) -> set:
    """Every ``X_{a,F} = {b : exists c <= a, b with [c] in F}``.

    ``F`` runs over ultrafilters of ``S/D`` (up-sets of atom classes) and
    ``a`` over elements with ``[a]`` in ``F``.
    """
    out = set()
    for F in S.atom_classes:
        in_F = [c for c in S.elements() if S.class_leq(F, S.class_of[c])]
        for a in in_F:
            below_a = [c for c in in_F if S.leq(c, a)]
            out.add(frozenset(b for b in S.elements()
                              if any(S.leq(c, b) for c in below_a)))
    return out


def M(S: SkewBA, a: int) -> frozenset:
    """Germs (ultrafilters) containing ``a``."""
    return frozenset(S.germs_of(a).values())


# -- morphisms ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Cohomomorphism:
    source: EtaleSpace  # B, over Y
    target: EtaleSpace  # A, over X
    base_map: dict      # X -> Y
    components: dict    # x -> {germ of B over f(x): germ of A over x}

    def __post_init__(self):
        for x in self.target.base.points:
            comp = self.components[x]
            fx = self.base_map[x]
            if set(comp) != set(self.source.stalk(fx)):
                raise ValueError(f"component at {x!r} has the wrong domain")
            if not set(comp.values()) <= set(self.target.stalk(x)):
                raise ValueError(f"component at {x!r} leaves the stalk")

    def __eq__(self, other):
        return (isinstance(other, Cohomomorphism)
                and self.source == other.source and self.target == other.target
                and self.base_map == other.base_map and self.components == other.components)

    __hash__ = None

    def components_injective(self) -> bool:
        return all(len(set(c.values())) == len(c) for c in self.components.values())


def enumerate_cohomomorphisms(B: EtaleSpace, A: EtaleSpace) -> list:
    X, Y = A.base.points, B.base.points
    out = []
    for fx in itertools.product(Y, repeat=len(X)):
        base = dict(zip(X, fx))
        per_point = []
        for x in X:
            dom = B.stalk(base[x])
            per_point.append([dict(zip(dom, vals))
                              for vals in itertools.product(A.stalk(x), repeat=len(dom))])
        for comps in itertools.product(*per_point):
            out.append(Cohomomorphism(B, A, base, dict(zip(X, comps))))
    return out


def dualize_hom(k: SkewHom, check: bool = True) -> Cohomomorphism:
    """``k: S -> T`` gives ``S* ~> T*`` over the preimage map on atoms.

    The component at a target atom ``G`` sends ``up(c)`` to the unique
    ``up(d)`` over ``G`` with ``up(c)`` inside ``k^{-1}(up(d))``, i.e. ``d`` is
    the germ of ``k(c)`` over ``G``.
    """
    S, T = k.source, k.target
    if check and not is_homomorphism(k.images, S, T, intersections=False).is_morphism:
        raise NotProper("only proper homomorphisms dualize")
    base, comps = dual_of_hom(k, S, T)
    return Cohomomorphism(spectrum_etale(S), spectrum_etale(T), base, comps)


def dualize_cohom(k: Cohomomorphism) -> SkewHom:
    """The induced map of section algebras ``B* -> A*``."""
    SB, SA = sections_algebra(k.source), sections_algebra(k.target)
    B, A = k.source, k.target
    images = []
    for s in SB.sections:
        by_point = {B.project(g): g for g in s}
        image = frozenset(
            k.components[x][by_point[k.base_map[x]]]
            for x in A.base.points if k.base_map[x] in by_point
        )
        images.append(SA.index[image])
    return SkewHom(SB.algebra, SA.algebra, tuple(images))


def beta_iso(S: SkewBA) -> SkewHom:
    """``a -> M(a)`` into the section algebra of the spectrum."""
    SA = sections_algebra(spectrum_etale(S))
    return SkewHom(S, SA.algebra, tuple(SA.index[M(S, a)] for a in S.elements()))


@dataclass(frozen=True, eq=False)
class GammaIso:
    space: EtaleSpace
    double_dual: EtaleSpace
    germ_map: dict  # germ of E -> germ of E** (index of the singleton section)
    base_map: dict  # base point of E -> base point of E** (class of sections over {x})

    def ultrafilter(self, germ) -> frozenset:
        """``N_A``: indices of sections that contain ``germ``."""
        SA = sections_algebra(self.space)
        return frozenset(i for i, s in enumerate(SA.sections) if germ in s)


def gamma_iso(E: EtaleSpace) -> GammaIso:
    SA = sections_algebra(E)
    S = SA.algebra
    germ_map = {g: SA.index[frozenset([g])] for g in E.germs}
    base_map = {x: S.class_of[germ_map[E.stalk(x)[0]]] for x in E.base.points}
    return GammaIso(E, spectrum_etale(S), germ_map, base_map)


def spectral_morphisms(S: SkewBA, n: int) -> list:
    """Morphisms ``S -> n+2`` standing for points of the spectrum.

    ``f^{-1}(1)`` must be nonempty and minimal, which forces exactly one
    germ to 1.  The other germs of that stalk go to 2, the canonical choice
    that keeps the result in bijection with the germs when ``n >= 2``.
    Returns one morphism per germ, in germ order; germs whose stalk is not
    a singleton are skipped when ``n == 0``.
    """
    P = primitive(n)
    (G,) = P.atom_classes
    out = []
    for F in S.atom_classes:
        stalk = S.stalk(F)
        if n == 0 and len(stalk) > 1:
            continue
        for c in stalk:
            comp = {d: (1 if d == c else 2) for d in stalk}
            out.append(hom_from_dual(S, P, {G: F}, {G: comp}))
    return out


def is_spectral(h: SkewHom, n: int) -> bool:
    """Literal test: ``h^{-1}(1)`` is nonempty and minimal among all homs."""
    pre = frozenset(a for a in h.source.elements() if h(a) == 1)
    if not pre:
        return False
    for g in iter_homs(h.source, primitive(n)):
        other = frozenset(a for a in h.source.elements() if g(a) == 1)
        if other and other < pre:
            return False
    return True
