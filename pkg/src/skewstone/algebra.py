"""Finite left-handed skew Boolean algebras as operation tables.

Elements are the integers ``0..m-1``.  Everything beyond ``meet``, ``join``
and ``zero`` (the D-classes, the natural order, relative complements,
restrictions, intersections) is derived from the two tables.

Two kinds of algebra objects share a small duck-typed protocol so that
homomorphism code works on both: :class:`SkewBA` (tabulated) and
:class:`skewstone.lambda_n.LambdaAlgebra` (elements are value tuples, never
tabulated).  The protocol is::

    size, zero, elements(), meet(a, b), join(a, b), leq(a, b), glb(a, b),
    atom_classes, stalk(F), germs_of(a), from_germs(mapping),
    top(), in_top_class(a)

A *germ* is an element of an atom D-class.  In a finite algebra the
ultrafilters are exactly the up-sets of germs, and every element is the
join of the germs below it, so ``germs_of``/``from_germs`` are mutually
inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Mapping, Optional, Sequence

from .errors import AxiomViolation, MalformedTable, NotBelow, NotBoolean


class SkewBA:
    """A finite left-handed skew Boolean algebra given by its tables.

    The constructor does not check the axioms; use :func:`validate_algebra`
    for untrusted input.
    """

    def __init__(self, meet, join, zero: int = 0, names=None):
        self.meet_table = tuple(tuple(int(v) for v in row) for row in meet)
        self.join_table = tuple(tuple(int(v) for v in row) for row in join)
        self.zero = int(zero)
        self.names = tuple(str(s) for s in names) if names is not None else None

    @property
    def size(self) -> int:
        return len(self.meet_table)

    def elements(self) -> range:
        return range(self.size)

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def leq(self, a: int, b: int) -> bool:
        m = self.meet_table
        return m[a][b] == a and m[b][a] == a

    def name(self, a: int) -> str:
        return self.names[a] if self.names is not None else str(a)

    def __eq__(self, other):
        if not isinstance(other, SkewBA):
            return NotImplemented
        return (self.meet_table == other.meet_table
                and self.join_table == other.join_table
                and self.zero == other.zero)

    def __hash__(self):
        return hash((self.meet_table, self.join_table, self.zero))

    def __repr__(self):
        return f"SkewBA(size={self.size}, profile={list(self.stalk_profile)})"

    # -- derived structure -------------------------------------------------

    @cached_property
    def class_of(self) -> tuple:
        m = self.meet_table
        cls = [-1] * self.size
        count = 0
        for a in self.elements():
            if cls[a] >= 0:
                continue
            for b in range(a, self.size):
                if cls[b] < 0 and m[m[a][b]][a] == a and m[m[b][a]][b] == b:
                    cls[b] = count
            count += 1
        return tuple(cls)

    @cached_property
    def classes(self) -> tuple:
        out = [[] for _ in range(max(self.class_of, default=-1) + 1)]
        for a, c in enumerate(self.class_of):
            out[c].append(a)
        return tuple(tuple(c) for c in out)

    @cached_property
    def _class_leq(self) -> tuple:
        reps = [c[0] for c in self.classes]
        cof, m = self.class_of, self.meet_table
        return tuple(
            tuple(cof[m[ri][rj]] == i for rj in reps)
            for i, ri in enumerate(reps)
        )

    def class_leq(self, i: int, j: int) -> bool:
        return self._class_leq[i][j]

    @cached_property
    def zero_class(self) -> int:
        return self.class_of[self.zero]

    @cached_property
    def atom_classes(self) -> tuple:
        z = self.zero_class
        nonzero = [i for i in range(len(self.classes)) if i != z]
        return tuple(
            i for i in nonzero
            if not any(j != i and self._class_leq[j][i] for j in nonzero)
        )

    def stalk(self, F: int) -> tuple:
        return self.classes[F]

    @cached_property
    def stalk_profile(self) -> tuple:
        return tuple(len(self.classes[F]) for F in self.atom_classes)

    @cached_property
    def _germs(self) -> tuple:
        out = []
        for a in self.elements():
            ca = self.class_of[a]
            g = {}
            for F in self.atom_classes:
                if self._class_leq[F][ca]:
                    g[F] = next(c for c in self.classes[F] if self.leq(c, a))
            out.append(g)
        return tuple(out)

    def germs_of(self, a: int) -> dict:
        """Map atom class -> the germ of that class lying below ``a``."""
        return self._germs[a]

    @cached_property
    def _by_germs(self) -> dict:
        return {frozenset(g.values()): a for a, g in enumerate(self._germs)}

    def from_germs(self, germs: Mapping) -> int:
        return self._by_germs[frozenset(germs.values())]

    @cached_property
    def top_class(self) -> int:
        n = len(self.classes)
        return next(i for i in range(n) if all(self._class_leq[j][i] for j in range(n)))

    def top(self) -> int:
        return self.classes[self.top_class][0]

    def in_top_class(self, a: int) -> bool:
        return self.class_of[a] == self.top_class

    @cached_property
    def _down(self) -> tuple:
        # bitmask of the principal down-set of each element
        return tuple(sum(1 << c for c in self.elements() if self.leq(c, a))
                     for a in self.elements())

    @cached_property
    def _by_down(self) -> dict:
        return {d: a for a, d in enumerate(self._down)}

    def glb(self, a: int, b: int) -> Optional[int]:
        """Greatest common lower bound: the element whose down-set is the
        intersection of the two down-sets, if there is one."""
        return self._by_down.get(self._down[a] & self._down[b])

    def is_commutative(self) -> bool:
        m = self.meet_table
        return all(m[a][b] == m[b][a] for a in self.elements() for b in self.elements())


class BooleanAlgebra(SkewBA):
    """A :class:`SkewBA` whose D-classes are singletons."""

    @cached_property
    def atoms(self) -> tuple:
        return tuple(self.classes[F][0] for F in self.atom_classes)

    def atoms_below(self, a: int) -> frozenset:
        return frozenset(x for x in self.atoms if self.leq(x, a))


def as_boolean(S: SkewBA) -> BooleanAlgebra:
    if not S.is_commutative():
        raise NotBoolean("algebra is not commutative")
    return BooleanAlgebra(S.meet_table, S.join_table, S.zero, S.names)


# -- homomorphisms -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SkewHom:
    """A map out of a tabulated algebra; ``images[a]`` is the image of ``a``."""

    source: object
    target: object
    images: tuple

    def __call__(self, a):
        return self.images[a]

    def __eq__(self, other):
        if not isinstance(other, SkewHom):
            return NotImplemented
        return (self.images == other.images and self.source == other.source
                and self.target == other.target)

    def __hash__(self):
        return hash(self.images)


@dataclass(frozen=True, eq=False)
class LazyHom:
    """A map out of an algebra too large to tabulate; evaluated on demand."""

    source: object
    target: object
    fn: Callable

    def __call__(self, a):
        return self.fn(a)


def make_hom(source, target, fn: Callable):
    """Tabulate ``fn`` when ``source`` is a table algebra, else wrap it."""
    if isinstance(source, SkewBA):
        return SkewHom(source, target, tuple(fn(a) for a in source.elements()))
    return LazyHom(source, target, fn)


def compose(second, first):
    """``second`` after ``first``."""
    return make_hom(first.source, second.target, lambda a: second(first(a)))


def identity(S):
    return make_hom(S, S, lambda a: a)


@dataclass(frozen=True)
class HomReport:
    preserves_ops: bool
    proper: bool
    preserves_intersections: Optional[bool]

    @property
    def is_morphism(self) -> bool:
        return self.preserves_ops and self.proper


def _as_callable(h) -> Callable:
    if callable(h):
        return h
    return h.__getitem__


def is_homomorphism(h, source, target, intersections: bool = True) -> HomReport:
    """Check ``h`` (a sequence indexed by source elements, or a callable).

    ``preserves_intersections`` is only evaluated for morphisms (homs that
    are also proper), and only when ``intersections`` is set; otherwise it
    is ``None``.
    """
    f = _as_callable(h)
    els = list(source.elements())
    img = {a: f(a) for a in els}
    ops = img[source.zero] == target.zero and all(
        img[source.meet(a, b)] == target.meet(img[a], img[b])
        and img[source.join(a, b)] == target.join(img[a], img[b])
        for a in els for b in els
    )
    # finite Boolean images are unital, so properness is: top class onto top class
    proper = target.in_top_class(img[source.top()])
    inter = None
    if ops and proper and intersections:
        inter = True
        for a in els:
            for b in els:
                c = source.glb(a, b)
                if c is not None and target.glb(img[a], img[b]) != img[c]:
                    inter = False
                    break
            if not inter:
                break
    return HomReport(ops, proper, inter)


def hom_from_dual(source, target, base_map: Mapping, components: Mapping):
    """Build the morphism ``source -> target`` with the given dual data.

    ``base_map`` sends each atom class ``G`` of the target to an atom class
    of the source; ``components[G]`` maps the stalk of the source over
    ``base_map[G]`` into the stalk of the target over ``G``.
    """
    pairs = [(G, base_map[G], components[G]) for G in target.atom_classes]

    def fn(a):
        g = source.germs_of(a)
        return target.from_germs({G: comp[g[F]] for G, F, comp in pairs if F in g})

    return make_hom(source, target, fn)


def dual_of_hom(h, source, target) -> tuple:
    """Inverse of :func:`hom_from_dual` for a proper homomorphism ``h``."""
    base, comps = {}, {}
    image_germs = {F: [target.germs_of(h(c)) for c in source.stalk(F)]
                   for F in source.atom_classes}
    for G in target.atom_classes:
        for F in source.atom_classes:
            if G in image_germs[F][0]:
                base[G] = F
                comps[G] = {c: gs[G] for c, gs in zip(source.stalk(F), image_germs[F])}
                break
    return base, comps


def _dual_options(source, target, G) -> list:
    opts = []
    for F in source.atom_classes:
        dom = source.stalk(F)
        for values in itertools.product(target.stalk(G), repeat=len(dom)):
            opts.append((F, dict(zip(dom, values))))
    return opts


def iter_homs(source, target) -> Iterator:
    """Lazily yield every proper homomorphism ``source -> target``.

    Order: lexicographic over target atom classes of (source atom index,
    stalk function tuple).
    """
    Gs = target.atom_classes
    per_target = [_dual_options(source, target, G) for G in Gs]
    for choice in itertools.product(*per_target):
        base = {G: F for G, (F, _) in zip(Gs, choice)}
        comps = {G: comp for G, (_, comp) in zip(Gs, choice)}
        yield hom_from_dual(source, target, base, comps)


def enumerate_homs(source, target) -> list:
    return list(iter_homs(source, target))


def count_homs(source, target) -> int:
    total = 1
    for G in target.atom_classes:
        g = len(target.stalk(G))
        total *= sum(g ** len(source.stalk(F)) for F in source.atom_classes)
    return total


def enumerate_homs_search(source: SkewBA, target) -> list:
    """All proper homomorphisms found by exhaustive search over carrier maps.

    Independent of the dual machinery: a backtracking scan over every
    assignment of target elements to source elements, pruning as soon as
    an equation ``h(a op b) = h(a) op h(b)`` with all three terms assigned
    fails.  Used as the oracle for :func:`enumerate_homs`.
    """
    m = source.size
    checks = [[] for _ in range(m)]
    for a in range(m):
        for b in range(m):
            for op, table in (("meet", source.meet_table), ("join", source.join_table)):
                r = table[a][b]
                checks[max(a, b, r)].append((a, b, op, r))
    tmeet, tjoin = target.meet, target.join
    cands = list(target.elements())
    h = [None] * m
    found = []

    def ok(k):
        if k == source.zero and h[k] != target.zero:
            return False
        for a, b, op, r in checks[k]:
            val = tmeet(h[a], h[b]) if op == "meet" else tjoin(h[a], h[b])
            if h[r] != val:
                return False
        return True

    def rec(k):
        if k == m:
            if target.in_top_class(h[source.top()]):
                found.append(SkewHom(source, target, tuple(h)))
            return
        for t in cands:
            h[k] = t
            if ok(k):
                rec(k + 1)
        h[k] = None

    rec(0)
    return found


def enumerate_homs_brute(source: SkewBA, target: SkewBA) -> list:
    """Plain filter over all ``|T|^|S|`` carrier maps (small inputs only)."""
    out = []
    for images in itertools.product(target.elements(), repeat=source.size):
        if is_homomorphism(images, source, target).is_morphism:
            out.append(SkewHom(source, target, images))
    return out


# -- construction and validation ---------------------------------------------


def _check_shape(meet, join, zero):
    m = len(meet)
    if m == 0:
        raise MalformedTable("empty carrier")
    if len(join) != m:
        raise MalformedTable("meet and join tables differ in size")
    for name, t in (("meet", meet), ("join", join)):
        for row in t:
            if len(row) != m:
                raise MalformedTable(f"{name} table is not square")
            for v in row:
                if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < m:
                    raise MalformedTable(f"{name} table entry {v!r} out of range")
    if not isinstance(zero, int) or not 0 <= zero < m:
        raise MalformedTable(f"zero index {zero!r} out of range")


def axiom_violations(S: SkewBA) -> list:
    """Return ``(identity, witness)`` for every identity that fails."""
    M, J = S.meet_table, S.join_table
    els = list(S.elements())
    found = {}

    def fail(name, witness):
        found.setdefault(name, witness)

    for x in els:
        if M[x][x] != x:
            fail("meet_idempotent", (x,))
        if J[x][x] != x:
            fail("join_idempotent", (x,))
        if M[x][S.zero] != S.zero or M[S.zero][x] != S.zero:
            fail("zero", (x,))
        for y in els:
            if M[x][J[x][y]] != x:
                fail("absorption_meet_join", (x, y))
            if J[x][M[x][y]] != x:
                fail("absorption_join_meet", (x, y))
            if M[J[y][x]][x] != x:
                fail("absorption_join_meet_right", (y, x))
            if J[M[y][x]][x] != x:
                fail("absorption_meet_join_right", (y, x))
            if M[M[x][y]][x] != M[x][y]:
                fail("left_handed_meet", (x, y))
            if J[J[x][y]][x] != J[y][x]:
                fail("left_handed_join", (x, y))
            if (M[x][y] == M[y][x]) != (J[x][y] == J[y][x]):
                fail("symmetry", (x, y))
            for z in els:
                if M[M[x][y]][z] != M[x][M[y][z]]:
                    fail("meet_associative", (x, y, z))
                if J[J[x][y]][z] != J[x][J[y][z]]:
                    fail("join_associative", (x, y, z))
                if M[x][J[y][z]] != J[M[x][y]][M[x][z]]:
                    fail("distributive_left", (x, y, z))
                if M[J[y][z]][x] != J[M[y][x]][M[z][x]]:
                    fail("distributive_right", (y, z, x))
    if found:
        return list(found.items())
    for x in els:
        down = [y for y in els if S.leq(y, x)]
        for y in down:
            for z in down:
                if M[y][z] != M[z][y] or J[y][z] != J[z][y] or not S.leq(M[y][z], x):
                    fail("principal_boolean", (x, y, z))
            if not any(M[y][z] == S.zero and J[y][z] == x for z in down):
                fail("principal_boolean", (x, y))
    return list(found.items())


def validate_algebra(meet, join, zero: int = 0, names=None) -> SkewBA:
    _check_shape(meet, join, zero)
    S = SkewBA(meet, join, zero, names)
    bad = axiom_violations(S)
    if bad:
        raise AxiomViolation(bad)
    return S


def primitive(n: int) -> SkewBA:
    """The primitive algebra ``{0, ..., n+1}`` with one non-zero D-class."""
    m = n + 2
    meet = [[a if a and b else 0 for b in range(m)] for a in range(m)]
    join = [[b if b else a for b in range(m)] for a in range(m)]
    return SkewBA(meet, join)


def algebra_from_stalks(profile: Sequence[int]) -> SkewBA:
    """Section algebra of the finite etale space with the given stalk sizes.

    Elements are partial sections in lexicographic order of the tuple
    ``(s(x_1), ..., s(x_k))`` where ``0`` means undefined and ``j`` picks the
    ``j``-th germ of the stalk.
    """
    sections = list(itertools.product(*(range(k + 1) for k in profile)))
    index = {s: i for i, s in enumerate(sections)}
    meet = [[index[tuple(a if a and b else 0 for a, b in zip(s, t))] for t in sections]
            for s in sections]
    join = [[index[tuple(b if b else a for a, b in zip(s, t))] for t in sections]
            for s in sections]
    return SkewBA(meet, join)


def boolean_power(k: int) -> BooleanAlgebra:
    """The Boolean algebra ``2^k`` (``boolean_power(2)`` is 2x2)."""
    S = algebra_from_stalks([1] * k)
    return BooleanAlgebra(S.meet_table, S.join_table)


# -- derived operations ------------------------------------------------------


def d_classes(S: SkewBA) -> tuple:
    return S.classes


def natural_leq(S, a, b) -> bool:
    return S.leq(a, b)


def relative_complement(S: SkewBA, x: int, y: int) -> int:
    """``x \\ y``: the complement of ``x ^ y ^ x`` inside ``[0, x]``."""
    core = S.meet(S.meet(x, y), x)
    hits = [
        z for z in S.elements()
        if S.leq(z, x)
        and S.meet(z, core) == S.zero and S.meet(core, z) == S.zero
        and S.join(z, core) == x and S.join(core, z) == x
    ]
    if len(hits) != 1:
        raise NotBoolean(f"no unique complement of {core} below {x}")
    return hits[0]


def restriction(S: SkewBA, a: int, D: int) -> int:
    """``a|_D`` for a D-class index ``D`` below the class of ``a``."""
    if not S.class_leq(D, S.class_of[a]):
        raise NotBelow(f"class {D} is not below the class of {a}")
    below = [b for b in S.classes[D] if S.leq(b, a)]
    if len(below) != 1:
        raise NotBoolean(f"restriction of {a} to class {D} is not unique")
    return below[0]


def intersection(S, a, b):
    return S.glb(a, b)


def max_boolean_image(S: SkewBA) -> tuple:
    """``(S/D, alpha)`` with the classes numbered as in ``S.classes``."""
    reps = [c[0] for c in S.classes]
    cof = S.class_of
    meet = [[cof[S.meet(r, t)] for t in reps] for r in reps]
    join = [[cof[S.join(r, t)] for t in reps] for r in reps]
    B = BooleanAlgebra(meet, join, cof[S.zero])
    return B, SkewHom(S, B, cof)


# -- isomorphism -------------------------------------------------------------


def fingerprint(S) -> tuple:
    return (S.size, tuple(sorted(S.stalk_profile)),
            tuple(sorted(len(c) for c in S.classes)))


def is_isomorphic(S: SkewBA, T: SkewBA) -> Optional[SkewHom]:
    """Return an isomorphism ``S -> T`` or ``None``.

    Backtracks over matchings of atom classes with equal stalk size and
    bijections between matched stalks; every candidate is re-checked as a
    bijective homomorphism before it is returned.
    """
    if fingerprint(S) != fingerprint(T):
        return None
    s_atoms, t_atoms = list(S.atom_classes), list(T.atom_classes)

    def matchings(i, used):
        if i == len(t_atoms):
            yield {}
            return
        G = t_atoms[i]
        for F in s_atoms:
            if F not in used and len(S.stalk(F)) == len(T.stalk(G)):
                for rest in matchings(i + 1, used | {F}):
                    yield {G: F, **rest}

    for base in matchings(0, frozenset()):
        perms = [itertools.permutations(T.stalk(G)) for G in t_atoms]
        for choice in itertools.product(*perms):
            comps = {G: dict(zip(S.stalk(base[G]), p)) for G, p in zip(t_atoms, choice)}
            h = hom_from_dual(S, T, base, comps)
            if len(set(h.images)) == S.size and is_homomorphism(h, S, T).is_morphism:
                return h
    return None


def is_bijective(h, source, target) -> bool:
    imgs = {h(a) for a in source.elements()}
    return len(imgs) == source.size == target.size
