import itertools

from hypothesis import given

from conftest import small_profiles
from oracles import natural_order
from skewstone.algebra import (SkewHom, algebra_from_stalks, boolean_power, enumerate_homs,
                               is_homomorphism, is_isomorphic, primitive)
from skewstone.etale import (EtaleSpace, M, beta_iso, dualize_cohom, dualize_hom,
                             enumerate_cohomomorphisms, gamma_iso, is_spectral,
                             sections_algebra, spectral_morphisms, spectrum_etale,
                             ultrafilter_of, ultrafilters_by_definition)
from skewstone.stone import (A_on_map, S_on_map, algebra_unit, dual_algebra_A, dual_space_S,
                             space, space_unit, ultrafilter, ultrafilters_by_homs)
from skewstone.verify import spanning_homs


# -- classical Stone ---------------------------------------------------------


def test_powerset_of_two_points():
    A = dual_algebra_A(space("p", "q"))
    assert A.size == 4 and A.names == ("{}", "{q}", "{p}", "{p,q}")


def test_ultrafilters_two_ways():
    B = boolean_power(3)
    assert sorted(map(sorted, ultrafilters_by_homs(B))) == \
        sorted(sorted(ultrafilter(B, a)) for a in B.atoms)


def test_stone_units_are_isomorphisms():
    B = boolean_power(2)
    u = algebra_unit(B)
    assert len(set(u.images)) == 4 and is_homomorphism(u.images, B, u.target).is_morphism
    X = space("p", "q", "r")
    assert len(set(space_unit(X).values())) == 3
    assert len(dual_space_S(dual_algebra_A(X))) == 3


def test_A_and_S_are_mutually_inverse_on_maps():
    X, Y = space("p", "q"), space("r", "s", "t")
    for values in itertools.product(Y.points, repeat=2):
        f = dict(zip(X.points, values))
        h = A_on_map(f, X, Y)
        assert is_homomorphism(h.images, h.source, h.target).is_morphism
        back = S_on_map(h)
        # atoms of A(X) are singletons; check S(A(f)) is f under the units
        ux, uy = space_unit(X), space_unit(Y)
        assert {x: back[ux[x]] for x in X.points} == {x: uy[f[x]] for x in X.points}


# -- etale duality -----------------------------------------------------------


def test_phi1_dualizes_to_its_components(four, three):
    k = dualize_hom(SkewHom(four, three, (0, 1, 2, 2)))
    (G,) = three.atom_classes
    assert k.base_map == {G: four.class_of[1]}
    assert k.components == {G: {1: 1, 2: 2, 3: 2}}
    assert not k.components_injective()


def test_spectral_points(three, four):
    assert [h.images for h in spectral_morphisms(three, 1)] == [(0, 1, 2), (0, 2, 1)]
    assert [h.images for h in spectral_morphisms(four, 1)] == \
        [(0, 1, 2, 2), (0, 2, 1, 2), (0, 2, 2, 1)]
    assert all(is_spectral(h, 1) for h in spectral_morphisms(four, 1))
    assert not is_spectral(SkewHom(four, three, (0, 1, 1, 1)), 1)


@given(small_profiles())
def test_ultrafilters_are_principal_on_germs(profile):
    S = algebra_from_stalks(profile)
    E = spectrum_etale(S)
    assert ultrafilters_by_definition(S) == {ultrafilter_of(S, g) for g in E.germs}
    assert E.profile == tuple(len(S.stalk(F)) for F in S.atom_classes)


@given(small_profiles())
def test_beta_is_an_isomorphism(profile):
    S = algebra_from_stalks(profile)
    b = beta_iso(S)
    assert len(set(b.images)) == S.size == b.target.size
    assert is_homomorphism(b.images, S, b.target).is_morphism
    for a in S.elements():
        assert M(S, a) == frozenset(g for g in spectrum_etale(S).germs if S.leq(g, a))


@given(small_profiles())
def test_gamma_is_an_iso_of_etale_spaces(profile):
    E = EtaleSpace.from_profile(profile)
    g = gamma_iso(E)
    assert len(set(g.germ_map.values())) == len(E.germs)
    for x in E.base.points:
        assert {g.base_map[E.project(h)] for h in E.stalk(x)} == {g.base_map[x]}
    S = sections_algebra(E).algebra
    for h in E.germs:
        assert g.ultrafilter(h) == ultrafilter_of(S, g.germ_map[h])


@given(small_profiles(8), small_profiles(8))
def test_hom_and_cohom_sets_correspond(p, q):
    S, T = algebra_from_stalks(p), algebra_from_stalks(q)
    homs = enumerate_homs(S, T)
    cohoms = enumerate_cohomomorphisms(spectrum_etale(S), spectrum_etale(T))
    assert len(homs) == len(cohoms)
    for h in homs:
        k = dualize_hom(h)
        assert k.components_injective() == is_homomorphism(h.images, S, T).preserves_intersections
        back = dualize_cohom(k)
        bS, bT = beta_iso(S), beta_iso(T)
        assert all(back(bS(a)) == bT(h(a)) for a in S.elements())


def test_section_algebra_order_is_inclusion():
    E = EtaleSpace.from_profile((2, 1))
    SA = sections_algebra(E)
    order = natural_order(SA.algebra)
    assert order == {(i, j) for i, a in enumerate(SA.sections)
                     for j, b in enumerate(SA.sections) if a <= b}


def test_spanning_family_separates_different_homs():
    """A naturality check driven by the spanning family must notice a
    single wrong component value."""
    S, T = algebra_from_stalks((3, 2)), algebra_from_stalks((3,))
    family = list(spanning_homs(S, T))
    assert family and all(is_homomorphism(h.images, S, T).is_morphism for h in family)
    bS, bT = beta_iso(S), beta_iso(T)

    def square_ok(h, tweak):
        k = dualize_hom(h)
        comps = {x: dict(c) for x, c in k.components.items()}
        if tweak:
            (x, c), = [(x, c) for x, c in comps.items()][:1]
            g = next(iter(c))
            stalk = k.target.stalk(x)
            c[g] = stalk[(stalk.index(c[g]) + 1) % len(stalk)]
        k2 = type(k)(k.source, k.target, k.base_map, comps)
        back = dualize_cohom(k2)
        return all(back(bS(a)) == bT(h(a)) for a in S.elements())

    assert all(square_ok(h, False) for h in family)
    assert not all(square_ok(h, True) for h in family)


def test_square_and_four_have_different_spectra(four, square):
    assert spectrum_etale(four).profile == (3,)
    assert spectrum_etale(square).profile == (1, 1)
    assert is_isomorphic(sections_algebra(spectrum_etale(four)).algebra, primitive(2))
