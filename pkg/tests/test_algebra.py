import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import small_profiles
from oracles import brute_homs, d_relation, natural_order, top_class
from skewstone.algebra import (algebra_from_stalks, axiom_violations, boolean_power,
                               count_homs, enumerate_homs, enumerate_homs_brute,
                               enumerate_homs_search, is_homomorphism, is_isomorphic,
                               max_boolean_image, relative_complement, restriction,
                               validate_algebra)
from skewstone.errors import AxiomViolation, MalformedTable, NotBelow


def test_primitive_tables(three):
    assert three.size == 3
    assert three.join(1, 2) == 2 and three.join(2, 1) == 1
    assert three.meet(1, 2) == 1 and three.meet(2, 1) == 2
    assert three.classes == ((0,), (1, 2))


def test_only_hom_three_to_two(three, two):
    assert [h.images for h in enumerate_homs(three, two)] == [(0, 1, 1)]


def test_homs_two_to_four(two, four):
    assert [h.images for h in enumerate_homs(two, four)] == [(0, 1), (0, 2), (0, 3)]


def test_eight_homs_four_to_three(four, three):
    assert count_homs(four, three) == 8
    assert len(enumerate_homs(four, three)) == 8


def test_hom_report_for_phi1(four, three):
    r = is_homomorphism((0, 1, 2, 2), four, three)
    assert (r.preserves_ops, r.proper, r.preserves_intersections) == (True, True, False)


def test_zero_map_is_not_proper(four, three):
    r = is_homomorphism((0, 0, 0, 0), four, three)
    assert r.preserves_ops and not r.proper and not r.is_morphism


def test_broken_join_is_rejected_with_witness(three):
    join = [list(r) for r in three.join_table]
    join[1][2] = 1
    with pytest.raises(AxiomViolation) as exc:
        validate_algebra(three.meet_table, join)
    names = {name for name, _ in exc.value.violations}
    assert names & {"symmetry", "absorption_join_meet_right", "absorption_meet_join_right"}
    assert any(w[:2] == (1, 2) for _, w in exc.value.violations)


@pytest.mark.parametrize("meet, join, zero", [
    ([[0, 0], [0, 1]], [[0, 1]], 0),
    ([[0, 0], [0, 5]], [[0, 1], [1, 1]], 0),
    ([[0, 0], [0, 1]], [[0, 1], [1, 1]], 3),
])
def test_malformed_tables(meet, join, zero):
    with pytest.raises(MalformedTable):
        validate_algebra(meet, join, zero)


def test_stalks_two_one_classes(six):
    assert six.size == 6
    assert sorted(len(c) for c in six.classes) == [1, 1, 2, 2]
    B, alpha = max_boolean_image(six)
    assert B.size == 4
    assert is_homomorphism(alpha.images, six, B).is_morphism


def test_four_and_square_are_not_isomorphic(four, square):
    assert is_isomorphic(four, square) is None


def test_swap_is_an_automorphism_of_three(three):
    h = is_isomorphic(three, three)
    assert h is not None and sorted(h.images) == [0, 1, 2]


def test_restriction_to_own_and_zero_class(six):
    for a in six.elements():
        assert restriction(six, a, six.class_of[a]) == a
        assert restriction(six, a, six.zero_class) == six.zero


def test_restriction_above_raises(three):
    with pytest.raises(NotBelow):
        restriction(three, 0, three.class_of[1])


@given(small_profiles())
def test_generated_algebras_satisfy_axioms(profile):
    assert axiom_violations(algebra_from_stalks(profile)) == []


@given(small_profiles())
def test_d_and_order_match_raw_definitions(profile):
    S = algebra_from_stalks(profile)
    assert natural_order(S) == {(a, b) for a in S.elements() for b in S.elements()
                                if S.leq(a, b)}
    assert d_relation(S) == {(a, b) for a in S.elements() for b in S.elements()
                             if S.class_of[a] == S.class_of[b]}
    assert top_class(S) == set(S.classes[S.top_class])


@given(small_profiles(), st.data())
def test_relative_complement(profile, data):
    S = algebra_from_stalks(profile)
    x = data.draw(st.sampled_from(list(S.elements())))
    y = data.draw(st.sampled_from(list(S.elements())))
    z = relative_complement(S, x, y)
    core = S.meet(S.meet(x, y), x)
    assert S.leq(z, x)
    assert S.meet(z, core) == S.zero
    assert S.join(z, core) == x


@given(small_profiles(6), small_profiles(6))
def test_hom_enumerations_agree(p, q):
    S, T = algebra_from_stalks(p), algebra_from_stalks(q)
    dual = sorted(h.images for h in enumerate_homs(S, T))
    assert dual == sorted(brute_homs(S, T))
    assert dual == sorted(h.images for h in enumerate_homs_search(S, T))
    assert len(dual) == count_homs(S, T)


def test_brute_enumeration_matches_on_small_pair(three, four):
    assert sorted(h.images for h in enumerate_homs_brute(four, three)) == \
        sorted(brute_homs(four, three))


@given(small_profiles(8))
def test_isomorphic_to_permuted_copy(profile):
    S = algebra_from_stalks(profile)
    T = algebra_from_stalks(tuple(reversed(profile)))
    h = is_isomorphic(S, T)
    assert h is not None
    assert len(set(h.images)) == S.size


def test_boolean_power_is_commutative():
    B = boolean_power(3)
    assert B.size == 8 and B.is_commutative()
    assert all(B.meet(a, b) == B.meet(b, a) for a, b in itertools.product(B.elements(), repeat=2))


def test_trivial_algebra_conventions(three):
    Z = algebra_from_stalks(())
    assert Z.size == 1
    assert count_homs(three, Z) == 1 and count_homs(Z, Z) == 1
    assert count_homs(Z, three) == 0
    assert is_homomorphism((0, 0, 0), three, Z).is_morphism
