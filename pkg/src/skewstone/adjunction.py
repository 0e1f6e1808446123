"""The adjunction ``Lambda_n -| lambda_n``, its monad, T-algebras, and the
twisted-product pair ``Omega -| omega``.

``T(S) = lambda_n(Lambda_n(S))`` is kept lazy (a :class:`LambdaAlgebra`
over the point labels of ``Lambda_n(S)``).  Laws between homomorphisms out
of a lambda algebra are checked on its atoms ``e(y, i)``: every element is
the join of the atoms below it, so agreement on atoms is agreement
everywhere.  Nothing at the ``T^2`` level or above is ever tabulated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .algebra import (BooleanAlgebra, LazyHom, SkewBA, SkewHom, as_boolean, d_classes,
                      dual_of_hom, hom_from_dual, is_bijective, is_homomorphism,
                      iter_homs, make_hom, max_boolean_image, relative_complement)
from .biglambda import (BigLambdaSpace, biglambda_on_hom, build_biglambda,
                        encode_double_point)
from .errors import NotProper, SizeGuard
from .lambda_n import MAX_MATERIALIZE, LambdaAlgebra, lambda_on_map
from .stone import FiniteBooleanSpace, dual_algebra_A, dual_space_S, subset_index

FULL_CHECK_LIMIT = 20000


def reflection(S, n: int) -> tuple:
    """``(Lambda_n(S), T(S))``."""
    Lam = build_biglambda(S, n)
    return Lam, LambdaAlgebra(Lam.space, n)


def unit_eta(S, n: int):
    """``eta_S(a)(g) = g(a)``: the evaluation morphism ``S -> T(S)``."""
    Lam, T = reflection(S, n)
    pts = Lam.points
    return make_hom(S, T, lambda a: tuple(p(a) for p in pts))


def counit_epsilon(X: FiniteBooleanSpace, n: int) -> tuple:
    """``epsilon_X(x)(f) = f(x)`` as point indices of ``Lambda_n(lambda_n(X))``."""
    Lam = build_biglambda(LambdaAlgebra(X, n), n)
    ident = tuple(range(1, n + 2))
    return tuple(Lam._index[(j, ident)] for j in range(len(X)))


def _counit_of_reflection(Lam: BigLambdaSpace) -> tuple:
    return counit_epsilon(Lam.space, Lam.n)


def lambda_of_counit(X: FiniteBooleanSpace, n: int) -> LazyHom:
    """``lambda_n(epsilon_X): T(lambda_n(X)) -> lambda_n(X)``."""
    L = LambdaAlgebra(X, n)
    _, T = reflection(L, n)
    eps = counit_epsilon(X, n)
    return LazyHom(T, L, lambda w: tuple(w[k] for k in eps))


# -- the adjunction ----------------------------------------------------------


@dataclass
class MediatingResult:
    u: tuple                 # point index of Lambda_n(S) for each point of X
    factors: bool            # mu == lambda_n(u) o eta_S on every element
    factoring_count: int     # maps X -> Lambda_n(S) that factor mu
    candidate_count: int


def mediating_map(mu, X: FiniteBooleanSpace, n: int) -> MediatingResult:
    """``u(x)(s) = mu(s)(x)`` with existence and uniqueness certificates.

    ``mu`` maps a table algebra into ``lambda_n(X)`` (value tuples).
    Uniqueness is certified by scanning every map ``X -> Lambda_n(S)``.
    """
    S = mu.source
    if not LambdaAlgebra(X, n).in_top_class(mu(S.top())):
        raise NotProper("mediating maps exist only for proper morphisms")
    Lam = build_biglambda(S, n)
    u = tuple(Lam.index_of(lambda s, j=j: mu(s)[j]) for j in range(len(X)))
    eta = unit_eta(S, n)
    els = list(S.elements())
    target = [mu(a) for a in els]
    etas = [eta(a) for a in els]

    def factors_through(v):
        return all(tuple(e[k] for k in v) == t for e, t in zip(etas, target))

    count = sum(1 for v in itertools.product(range(len(Lam)), repeat=len(X))
                if factors_through(v))
    return MediatingResult(u, factors_through(u), count, len(Lam) ** len(X))


@dataclass
class TriangleReport:
    algebra_side: list  # points j of Lambda_n(S) where Lambda_n(eta_S)(eps(j)) != j
    space_side: list    # elements f of lambda_n(X) where lambda_n(eps_X)(eta(f)) != f

    @property
    def passed(self) -> bool:
        return not self.algebra_side and not self.space_side


def check_triangle_identities(S, X: FiniteBooleanSpace, n: int) -> TriangleReport:
    Lam, T = reflection(S, n)
    eta = unit_eta(S, n)
    eps = _counit_of_reflection(Lam)
    LamT = build_biglambda(T, n)
    # Lambda_n(eta_S) o epsilon_{Lambda_n(S)}
    bad_alg = []
    for j in range(len(Lam)):
        psi = LamT.points[eps[j]]
        if Lam.index_of(lambda a: psi(eta(a))) != j:
            bad_alg.append(j)
    # lambda_n(epsilon_X) o eta_{lambda_n(X)}
    L = LambdaAlgebra(X, n)
    eta_L = unit_eta(L, n)
    eps_X = counit_epsilon(X, n)
    bad_sp = []
    for f in L.elements():
        w = eta_L(f)
        if tuple(w[k] for k in eps_X) != f:
            bad_sp.append(f)
    return TriangleReport(bad_alg, bad_sp)


# -- the monad ---------------------------------------------------------------


def T_on_hom(h, n: int) -> LazyHom:
    """``T(h) = lambda_n(Lambda_n(h))``: ``w -> w o Lambda_n(h)``."""
    _, T1 = reflection(h.source, n)
    _, T2 = reflection(h.target, n)
    m = biglambda_on_hom(h, n, check=False)
    return LazyHom(T1, T2, lambda w: tuple(w[k] for k in m))


def monad_mu(S, n: int) -> LazyHom:
    """``mu_S = lambda_n(epsilon_{Lambda_n(S)}): T^2(S) -> T(S)``."""
    Lam, T = reflection(S, n)
    _, T2 = reflection(T, n)
    eps = _counit_of_reflection(Lam)
    return LazyHom(T2, T, lambda w: tuple(w[k] for k in eps))


def _test_elements(A, limit: int) -> list:
    if A.size <= limit:
        return list(A.elements())
    return [A.zero] + A.atoms()


@dataclass
class MonadReport:
    n: int
    checks: dict = field(default_factory=dict)  # law -> (checked, failures)

    @property
    def passed(self) -> bool:
        return all(not bad for _, bad in self.checks.values())


def check_monad_laws(S, n: int, full_limit: int = FULL_CHECK_LIMIT) -> MonadReport:
    """Unit laws on every element of ``T(S)`` (atoms only above
    ``full_limit``); associativity on the atoms of ``T^3(S)`` plus the
    images of ``eta_{T^2(S)}`` and ``T(eta_{T(S)})`` on those test points."""
    Lam, T = reflection(S, n)
    _, T2 = reflection(T, n)
    _, T3 = reflection(T2, n)
    if T.width > 64:
        raise SizeGuard(f"T(S) has {T.width} points")
    eta_S = unit_eta(S, n)
    eta_T = unit_eta(T, n)
    eta_T2 = unit_eta(T2, n)
    mu_S = monad_mu(S, n)
    mu_T = monad_mu(T, n)
    T_eta_S = T_on_hom(eta_S, n)
    T_eta_T = T_on_hom(eta_T, n)
    T_mu_S = T_on_hom(mu_S, n)
    report = MonadReport(n)

    ts = _test_elements(T, full_limit)
    report.checks["mu.eta_T = id"] = (len(ts), [t for t in ts if mu_S(eta_T(t)) != t])
    report.checks["mu.T(eta) = id"] = (len(ts), [t for t in ts if mu_S(T_eta_S(t)) != t])

    cubes = T3.atoms()
    for t in (T.atoms() if T.size > full_limit else ts):
        cubes.append(eta_T2(eta_T(t)))
        cubes.append(T_eta_T(eta_T(t)))
    bad = [w for w in cubes if mu_S(T_mu_S(w)) != mu_S(mu_T(w))]
    report.checks["mu.T(mu) = mu.mu_T"] = (len(cubes), bad)
    return report


# -- T-algebras --------------------------------------------------------------


def is_t_algebra(S, gamma, n: int) -> bool:
    """``gamma o eta_S = id`` and ``gamma o mu_S = gamma o T(gamma)``."""
    eta = unit_eta(S, n)
    if any(gamma(eta(a)) != a for a in S.elements()):
        return False
    mu = monad_mu(S, n)
    T_gamma = T_on_hom(gamma, n)
    _, T = reflection(S, n)
    _, T2 = reflection(T, n)
    return all(gamma(mu(w)) == gamma(T_gamma(w)) for w in T2.atoms())


@dataclass
class TAlgebra:
    gamma: object
    layers: tuple  # layers[i-1] = germs F_(i), one per atom class of S
    strict: bool   # S is literally lambda_n(X) and gamma == lambda_n(epsilon_X)
    # other structure maps isomorphic to this one, as (automorphism theta, gamma')
    # with theta o gamma == gamma' o T(theta)
    transports: tuple = ()


def _candidate_structure_maps(S, n: int):
    Lam, T = reflection(S, n)
    Fs = list(S.atom_classes)
    per_atom = []
    for F in Fs:
        opts = []
        for G in range(T.width):
            dom = T.stalk(G)
            for vals in itertools.product(S.stalk(F), repeat=len(dom)):
                opts.append((G, dict(zip(dom, vals))))
        per_atom.append(opts)
    for choice in itertools.product(*per_atom):
        base = {F: G for F, (G, _) in zip(Fs, choice)}
        comps = {F: c for F, (_, c) in zip(Fs, choice)}
        yield hom_from_dual(T, S, base, comps), base, comps


def count_candidates(S, n: int) -> int:
    Lam, T = reflection(S, n)
    total = 1
    for F in S.atom_classes:
        total *= T.width * len(S.stalk(F)) ** (n + 1)
    return total


def t_algebra_structures(S, n: int) -> list:
    """Every ``(gamma, base, components)`` making ``S`` a T-algebra.

    Candidates are enumerated on the dual side (a point of ``Lambda_n(S)``
    per atom class of ``S`` and a stalk map ``{1..n+1} -> S_F``).
    """
    return [c for c in _candidate_structure_maps(S, n) if is_t_algebra(S, c[0], n)]


def automorphisms(S) -> list:
    return [h for h in iter_homs(S, S) if is_bijective(h, S, S)]


def structure_iso(S, gamma1, gamma2, n: int, autos=None):
    """An automorphism ``theta`` of ``S`` with ``theta o gamma1 = gamma2 o T(theta)``."""
    _, T = reflection(S, n)
    for theta in automorphisms(S) if autos is None else autos:
        T_theta = T_on_hom(theta, n)
        if all(theta(gamma1(w)) == gamma2(T_theta(w)) for w in T.atoms()):
            return theta
    return None


def _is_canonical(S, gamma, n: int) -> bool:
    if not (isinstance(S, LambdaAlgebra) and S.n == n):
        return False
    _, T = reflection(S, n)
    canon = lambda_of_counit(S.space, n)
    return all(gamma(w) == canon(w) for w in T.atoms())


def classify_t_algebras(S, n: int) -> list:
    """T-algebra structures on ``S``, one per isomorphism class.

    The representative is ``lambda_n(epsilon_X)`` whenever a class contains
    it; the remaining members of the class are listed in ``transports``.
    """
    _, T = reflection(S, n)
    found = t_algebra_structures(S, n)
    found.sort(key=lambda c: not _is_canonical(S, c[0], n))
    autos = automorphisms(S) if found else []
    out = []
    for gamma, base, comps in found:
        for cls in out:
            theta = structure_iso(S, cls.gamma, gamma, n, autos)
            if theta is not None:
                cls.transports += ((theta, gamma),)
                break
        else:
            layers = tuple(
                tuple(comps[F][T.atom(base[F], i)] for F in S.atom_classes)
                for i in range(1, n + 2))
            out.append(TAlgebra(gamma, layers, _is_canonical(S, gamma, n)))
    return out


def check_t_morphism(h, X1: FiniteBooleanSpace, X2: FiniteBooleanSpace,
                     n: int) -> Optional[dict]:
    """If ``h: lambda_n(X1) -> lambda_n(X2)`` commutes with the canonical
    structure maps, return the base map ``f: X2 -> X1`` with
    ``h = lambda_n(f)``; otherwise ``None``."""
    L1, L2 = LambdaAlgebra(X1, n), LambdaAlgebra(X2, n)
    if not L2.in_top_class(h(L1.top())):
        raise NotProper("h must be a proper morphism")
    g1, g2 = lambda_of_counit(X1, n), lambda_of_counit(X2, n)
    Th = T_on_hom(h, n)
    _, T1 = reflection(L1, n)
    if any(h(g1(w)) != g2(Th(w)) for w in T1.atoms()):
        return None
    f = {}
    for j, x in enumerate(X2.points):
        (y,) = [y for y in range(L1.width) if h(L1.atom(y, 1))[j]]
        f[x] = X1.points[y]
    lam_f = lambda_on_map(f, X2, X1, n)
    if any(lam_f(a) != h(a) for a in L1.atoms()):
        return None
    return f


# -- reflections -------------------------------------------------------------


@dataclass
class ReflectionReport:
    n: int
    reflection: LambdaAlgebra
    eta: object
    injective: bool
    kernel: tuple                 # partition of S by eta-image
    kernel_is_d: bool
    stalk_sizes: tuple            # stalk sizes of T(S)*, all n+1
    iso_to_quotient: Optional[SkewHom] = None  # n == 0: S/D -> T(S), tabulated


def reflect(S: SkewBA, n: int) -> ReflectionReport:
    Lam, T = reflection(S, n)
    eta = unit_eta(S, n)
    groups = {}
    for a in S.elements():
        groups.setdefault(eta(a), []).append(a)
    kernel = tuple(sorted(tuple(g) for g in groups.values()))
    injective = len(groups) == S.size
    report = ReflectionReport(
        n, T, eta, injective, kernel, kernel == tuple(sorted(d_classes(S))),
        tuple(len(T.stalk(y)) for y in T.atom_classes))
    if n == 0:
        B, _ = max_boolean_image(S)
        TT = T.materialize()
        reps = [c[0] for c in S.classes]
        iso = SkewHom(B, TT, tuple(T.index(eta(r)) for r in reps))
        if is_homomorphism(iso.images, B, TT).is_morphism and is_bijective(iso, B, TT):
            report.iso_to_quotient = iso
    return report


# -- omega and Omega ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TwistedProduct:
    """``omega(B)``: flags ``(a, b)`` with ``b <= a`` in ``B``."""

    base: BooleanAlgebra
    pairs: tuple
    algebra: SkewBA
    index: dict


def omega(B: SkewBA) -> TwistedProduct:
    """Flag algebra over ``B``: ``(a1,b1) v (a2,b2) = (a1 v a2, (b1 minus a2) v b2)``
    and ``(a1,b1) ^ (a2,b2) = (a1 ^ a2, b1 ^ a2)``."""
    B = as_boolean(B)
    pairs = [(a, b) for a in B.elements() for b in B.elements() if B.leq(b, a)]
    index = {p: i for i, p in enumerate(pairs)}

    def j(p, q):
        return (B.join(p[0], q[0]), B.join(relative_complement(B, p[1], q[0]), q[1]))

    def m(p, q):
        return (B.meet(p[0], q[0]), B.meet(p[1], q[0]))

    meet = [[index[m(p, q)] for q in pairs] for p in pairs]
    join = [[index[j(p, q)] for q in pairs] for p in pairs]
    names = [f"({B.name(a)},{B.name(b)})" for a, b in pairs]
    return TwistedProduct(B, tuple(pairs), SkewBA(meet, join, 0, names), index)


def omega_iso(W: TwistedProduct) -> SkewHom:
    """``omega(B) -> lambda_1(S(B))``: ``(a, b)`` is 1 on atoms below ``b``,
    2 on atoms below ``a`` but not ``b``, 0 elsewhere."""
    B = W.base
    X = dual_space_S(B)
    L = LambdaAlgebra(X, 1)
    images = tuple(
        tuple(1 if B.leq(x, b) else 2 if B.leq(x, a) else 0 for x in X.points)
        for a, b in W.pairs)
    return SkewHom(W.algebra, L, images)


def big_omega(S) -> BooleanAlgebra:
    """``Omega(S)``: the powerset algebra of ``Lambda_1(S)``."""
    return dual_algebra_A(build_biglambda(S, 1).space)


def omega_unit(S) -> SkewHom:
    """``S -> omega(Omega(S))``: ``s -> ({g : g(s) != 0}, {g : g(s) = 1})``."""
    Lam = build_biglambda(S, 1)
    X = Lam.space
    if 3 ** len(X) > MAX_MATERIALIZE:
        raise SizeGuard(f"omega(Omega(S)) has {3 ** len(X)} elements; use omega_unit_masks")
    W = omega(big_omega(S))
    images = []
    for s in S.elements():
        top = {X.points[j] for j, g in enumerate(Lam.points) if g(s)}
        one = {X.points[j] for j, g in enumerate(Lam.points) if g(s) == 1}
        images.append(W.index[(subset_index(X, top), subset_index(X, one))])
    return SkewHom(S, W.algebra, tuple(images))


def omega_on_hom(v: SkewHom, W1: TwistedProduct, W2: TwistedProduct) -> SkewHom:
    return SkewHom(W1.algebra, W2.algebra,
                   tuple(W2.index[(v(a), v(b))] for a, b in W1.pairs))


class FlagBits:
    """``omega`` of the powerset of ``k`` points, kept lazy.

    Elements are pairs ``(a, b)`` of bitmasks with ``b`` inside ``a``; the
    bit order matches :func:`.stone.subset_index`, so ``a`` and ``b`` are
    also element indices of the powerset algebra.
    """

    def __init__(self, k: int):
        self.k = k
        self.full = (1 << k) - 1
        self.zero = (0, 0)

    @property
    def size(self) -> int:
        return 3 ** self.k

    def meet(self, p, q):
        return p[0] & q[0], p[1] & q[0]

    def join(self, p, q):
        return p[0] | q[0], (p[1] & ~q[0]) | q[1]

    def in_top_class(self, p) -> bool:
        return p[0] == self.full

    def glb(self, p, q):
        ones = p[1] & q[1]
        twos = (p[0] & ~p[1]) & (q[0] & ~q[1])
        return ones | twos, ones


@dataclass
class OmegaReport:
    iso_ok: bool
    unit_is_morphism: bool
    homs_checked: int
    factorization_failures: list  # mu indices without exactly one factorization

    @property
    def passed(self) -> bool:
        return self.iso_ok and self.unit_is_morphism and not self.factorization_failures


def omega_unit_masks(S) -> tuple:
    """``s -> ({g : g(s) != 0}, {g : g(s) = 1})`` as bitmask pairs."""
    Lam = build_biglambda(S, 1)
    k = len(Lam)
    out = []
    for s in S.elements():
        top = one = 0
        for j, g in enumerate(Lam.points):
            bit = 1 << (k - 1 - j)
            v = g(s)
            top |= bit if v else 0
            one |= bit if v == 1 else 0
        out.append((top, one))
    return tuple(out)


def check_omega_adjunction(S: SkewBA, B: SkewBA) -> OmegaReport:
    """Every morphism ``S -> omega(B)`` is ``omega(v) o unit`` for exactly one
    Boolean morphism ``v: Omega(S) -> B``."""
    B = as_boolean(B)
    W = omega(B)
    iso = omega_iso(W)
    iso_ok = (is_homomorphism(iso.images, W.algebra, iso.target).is_morphism
              and is_bijective(iso, W.algebra, iso.target))
    OS = big_omega(S)
    unit = omega_unit_masks(S)
    unit_ok = is_homomorphism(unit, S, FlagBits(len(build_biglambda(S, 1)))).is_morphism
    vs = list(iter_homs(OS, B))
    homs = list(iter_homs(S, W.algebra))
    failures = []
    for k, mu in enumerate(homs):
        hits = sum(1 for v in vs
                   if all(W.index[(v(a), v(b))] == mu(s) for s, (a, b) in enumerate(unit)))
        if hits != 1:
            failures.append(k)
    return OmegaReport(iso_ok, unit_ok, len(homs), failures)


# -- dual descriptions of the structure maps ----------------------------------


def eta_dual_failures(S: SkewBA, n: int) -> list:
    """``eta_S`` over ``N_(F,f)`` sends the germ ``x`` to ``N_((F,f), f(x))``."""
    Lam, T = reflection(S, n)
    eta = unit_eta(S, n)
    base, comps = dual_of_hom(eta, S, T)
    bad = []
    for G, (F, f) in enumerate(Lam.labels):
        if base[G] != F:
            bad.append(("base", G))
            continue
        for x, v in zip(S.stalk(F), f):
            if comps[G][x] != T.atom(G, v):
                bad.append(("component", G, x))
    return bad


def epsilon_dual_failures(S: SkewBA, n: int) -> list:
    """``epsilon_{Lambda_n(S)}(F, f) = (F, f, id)``."""
    Lam, T = reflection(S, n)
    LamT = build_biglambda(T, n)
    eps = _counit_of_reflection(Lam)
    ident = tuple(range(1, n + 2))
    return [j for j, (F, f) in enumerate(Lam.labels)
            if encode_double_point(LamT.points[eps[j]], Lam) != (F, f, ident)]


def mu_dual_failures(S, n: int) -> list:
    """``mu_S`` over ``N_(F,f)`` sends ``N_((F,f,id), i)`` to ``N_((F,f), i)``."""
    Lam, T = reflection(S, n)
    _, T2 = reflection(T, n)
    mu = monad_mu(S, n)
    base, comps = dual_of_hom(mu, T2, T)
    eps = _counit_of_reflection(Lam)
    bad = []
    for G in range(T.width):
        if base[G] != eps[G]:
            bad.append(("base", G))
            continue
        for i in range(1, n + 2):
            if comps[G][T2.atom(eps[G], i)] != T.atom(G, i):
                bad.append(("component", G, i))
    return bad
