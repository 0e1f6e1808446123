"""Classical Stone duality for finite Boolean algebras and finite spaces.

A finite Boolean space is discrete, so every subset is compact-open and
every map between finite spaces is continuous and proper.  Ultrafilters of
a finite Boolean algebra are represented by their atom.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .algebra import BooleanAlgebra, SkewBA, SkewHom, as_boolean, is_homomorphism
from .errors import NotProper


@dataclass(frozen=True)
class FiniteBooleanSpace:
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(set(self.points)) != len(self.points):
            raise ValueError("point labels must be distinct")

    def __len__(self):
        return len(self.points)

    def index(self, label) -> int:
        return self.points.index(label)


def space(*labels) -> FiniteBooleanSpace:
    return FiniteBooleanSpace(labels)


def _subset_order(X: FiniteBooleanSpace) -> list:
    # lexicographic in the indicator tuple, first point most significant
    return [frozenset(p for p, v in zip(X.points, bits) if v)
            for bits in itertools.product((0, 1), repeat=len(X))]


def dual_algebra_A(X: FiniteBooleanSpace) -> BooleanAlgebra:
    """The algebra of all maps ``X -> {0,1}``, i.e. the powerset of ``X``."""
    subsets = _subset_order(X)
    index = {s: i for i, s in enumerate(subsets)}
    meet = [[index[a & b] for b in subsets] for a in subsets]
    join = [[index[a | b] for b in subsets] for a in subsets]
    names = ["{" + ",".join(str(p) for p in X.points if p in s) + "}" for s in subsets]
    return BooleanAlgebra(meet, join, 0, names)


def subset_index(X: FiniteBooleanSpace, subset) -> int:
    """Index of ``subset`` in :func:`dual_algebra_A` of ``X``."""
    i = 0
    for p in X.points:
        i = 2 * i + (1 if p in subset else 0)
    return i


def index_subset(X: FiniteBooleanSpace, i: int) -> frozenset:
    bits = format(i, f"0{len(X)}b") if len(X) else ""
    return frozenset(p for p, b in zip(X.points, bits) if b == "1")


def dual_space_S(B: SkewBA) -> FiniteBooleanSpace:
    """One point per ultrafilter; the point is labelled by its atom."""
    B = B if isinstance(B, BooleanAlgebra) else as_boolean(B)
    return FiniteBooleanSpace(B.atoms)


def ultrafilter(B: BooleanAlgebra, atom: int) -> frozenset:
    return frozenset(b for b in B.elements() if B.leq(atom, b))


def ultrafilters_by_homs(B: BooleanAlgebra) -> list:
    """Ultrafilters as ``h^{-1}(1)`` for every proper hom ``B -> 2``.

    Scans all maps ``B -> {0,1}``, so it is independent of the atom view.
    """
    two = as_boolean(SkewBA([[0, 0], [0, 1]], [[0, 1], [1, 1]]))
    out = []
    for images in itertools.product((0, 1), repeat=B.size):
        if is_homomorphism(images, B, two).is_morphism:
            out.append(frozenset(b for b, v in enumerate(images) if v == 1))
    return out


def A_on_map(f: Mapping, X: FiniteBooleanSpace, Y: FiniteBooleanSpace) -> SkewHom:
    """``A(f): Y* -> X*`` for ``f: X -> Y``, acting by preimage."""
    AX, AY = dual_algebra_A(X), dual_algebra_A(Y)
    images = tuple(
        subset_index(X, frozenset(x for x in X.points if f[x] in index_subset(Y, i)))
        for i in AY.elements()
    )
    return SkewHom(AY, AX, images)


def S_on_map(phi: SkewHom) -> dict:
    """``S(phi): B2* -> B1*`` sending each atom ``b`` of the target to the
    atom ``a`` of the source with ``phi^{-1}(up b) = up a``."""
    B1 = as_boolean(phi.source)
    B2 = as_boolean(phi.target)
    if not is_homomorphism(phi.images, B1, B2).is_morphism:
        raise NotProper("S is only defined on proper homomorphisms")
    out = {}
    for b in B2.atoms:
        (a,) = [a for a in B1.atoms if B2.leq(b, phi(a))]
        out[b] = a
    return out


def space_unit(X: FiniteBooleanSpace) -> dict:
    """``X -> S(A(X))``: a point goes to the atom ``{x}``."""
    return {x: subset_index(X, {x}) for x in X.points}


def algebra_unit(B: BooleanAlgebra) -> SkewHom:
    """``B -> A(S(B))``: an element goes to the set of atoms below it."""
    X = dual_space_S(B)
    AX = dual_algebra_A(X)
    return SkewHom(B, AX, tuple(subset_index(X, B.atoms_below(b)) for b in B.elements()))
