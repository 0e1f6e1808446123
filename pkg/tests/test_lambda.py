import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_homs, lambda_values, naive_lambda_ops
from skewstone.adjunction import reflection
from skewstone.algebra import (SkewHom, algebra_from_stalks, count_homs, is_homomorphism,
                               iter_homs, primitive, relative_complement, restriction)
from skewstone.biglambda import (EvalPoint, biglambda_on_hom, build_biglambda, decode_point,
                                 encode_point, preimage_law_failures, subbase_identity_check)
from skewstone.errors import FlagNotDescending, NotProper, SizeGuard
from skewstone.lambda_n import (LambdaAlgebra, LambdaElement, d_and_order_lemmas, flag_join,
                                flag_meet, from_flag, from_level_sets, lambda_on_map,
                                level_sets, to_flag)
from skewstone.stone import space
from skewstone.verify import generated_algebras, spaces

values = st.integers(0, 2)


@pytest.fixture
def L2(X2):
    return LambdaAlgebra(X2, 1)


def test_size_and_table(L2):
    assert L2.size == 9
    T = L2.materialize()
    assert T.size == 9 and len(T.classes) == 4


def test_element_operations(L2):
    T = L2.materialize()
    ix = L2.index
    assert L2.rcomp((1, 2), (2, 0)) == (0, 2)
    assert L2.element(relative_complement(T, ix((1, 2)), ix((2, 0)))) == (0, 2)
    p_class = T.class_of[ix((1, 0))]
    assert L2.element(restriction(T, ix((1, 2)), p_class)) == (1, 0)
    assert L2.glb((1, 2), (1, 1)) == (1, 0)
    assert L2.element(T.glb(ix((1, 2)), ix((1, 1)))) == (1, 0)


@given(st.tuples(values, values), st.tuples(values, values))
def test_operations_match_pointwise_oracle(f, g):
    L = LambdaAlgebra(space("p", "q"), 1)
    meet, join = naive_lambda_ops(1)
    assert L.meet(f, g) == meet(f, g)
    assert L.join(f, g) == join(f, g)


@given(st.tuples(values, values, values), st.tuples(values, values, values))
def test_flag_operations(f, g):
    L = LambdaAlgebra(space("p", "q", "r"), 1)
    F, G = to_flag(L, f), to_flag(L, g)
    assert from_flag(L, F) == f
    assert from_level_sets(L, level_sets(L, f)) == f
    assert flag_join(F, G, 1) == to_flag(L, L.join(f, g))
    assert flag_meet(F, G, 1) == to_flag(L, L.meet(f, g))


def test_flag_must_descend(L2):
    with pytest.raises(FlagNotDescending):
        from_flag(L2, (frozenset(), frozenset({"p"})))


def test_lambda_element_views(X2):
    e = LambdaElement.from_mapping(X2, 1, {"p": 2, "q": 1})
    assert e.parts == (frozenset({"q"}), frozenset({"p"}))
    assert e.flag == (frozenset({"p", "q"}), frozenset({"q"}))
    assert e.support == {"p", "q"}


def test_materialize_guard():
    with pytest.raises(SizeGuard):
        LambdaAlgebra(space(*"abcdefg"), 1).materialize()


@pytest.mark.parametrize("X", spaces(3), ids=lambda X: f"{len(X)}pts")
@pytest.mark.parametrize("n", [0, 1, 2])
def test_structure_lemmas(X, n):
    report = d_and_order_lemmas(X, n)
    assert report.passed, report.summary()


def test_lambda_on_map_is_precomposition(X1, X2):
    h = lambda_on_map({"p": "q"}, X1, X2, 1)
    assert h((1, 2)) == (2,)
    L2 = LambdaAlgebra(X2, 1)
    T = L2.materialize()
    for f in lambda_values(1, 2):
        for g in lambda_values(1, 2):
            assert h(L2.meet(f, g)) == LambdaAlgebra(X1, 1).meet(h(f), h(g))
    assert T.size == 9


# -- Lambda_n ----------------------------------------------------------------


def test_point_counts(two, three, four):
    assert [len(build_biglambda(S, 1)) for S in (four, three, two)] == [8, 4, 2]
    assert len(build_biglambda(two, 0)) == 1


@pytest.mark.parametrize("profile, S", generated_algebras(8), ids=str)
@pytest.mark.parametrize("n", [0, 1, 2])
def test_point_count_formula(profile, S, n):
    formula = sum((n + 1) ** len(S.stalk(F)) for F in S.atom_classes)
    assert len(build_biglambda(S, n)) == formula == count_homs(S, primitive(n))
    if S.size <= 6 and n <= 1:
        assert len(brute_homs(S, primitive(n))) == formula


def test_point_encodings_round_trip(six):
    Lam = build_biglambda(six, 1)
    for p, (F, f) in zip(Lam.points, Lam.labels):
        assert encode_point(p) == (F, f)
        assert decode_point(F, f, six, 1).images == p.images


def test_swap_on_three_acts_on_points(three):
    assert biglambda_on_hom(SkewHom(three, three, (0, 2, 1)), 1) == (0, 2, 1, 3)


def test_two_into_four(two, four):
    assert biglambda_on_hom(SkewHom(two, four, (0, 1)), 1) == (0, 0, 0, 0, 1, 1, 1, 1)


def test_lambda_of_non_proper_map_raises(three, four):
    with pytest.raises(NotProper):
        biglambda_on_hom(SkewHom(four, three, (0, 0, 0, 0)), 1)


def test_points_of_lambda_algebras_are_evaluations(X2):
    L = LambdaAlgebra(X2, 1)
    Lam = build_biglambda(L, 1)
    assert len(Lam) == 2 * 2 ** 2
    table = L.materialize()
    brute = brute_homs(table, primitive(1))
    as_tables = sorted(tuple(p(L.element(i)) for i in table.elements()) for p in Lam.points)
    assert as_tables == sorted(brute)
    assert all(isinstance(p, EvalPoint) for p in Lam.points)


def test_double_reflection_count(three):
    _, T = reflection(three, 1)
    assert T.size == 81
    assert len(build_biglambda(T, 1)) == 16


@pytest.mark.parametrize("profile, S", generated_algebras(6), ids=str)
@pytest.mark.parametrize("n", [0, 1])
def test_subbase_identity(profile, S, n):
    assert subbase_identity_check(S, n).passed


@given(st.sampled_from([(2, 1), (1, 1), (3,), (2,)]), st.sampled_from([(2,), (1, 1), (3,)]))
def test_preimage_law(p, q):
    S, T = algebra_from_stalks(p), algebra_from_stalks(q)
    for h in iter_homs(S, T):
        assert is_homomorphism(h.images, S, T).is_morphism
        for n in (0, 1):
            assert preimage_law_failures(h, n) == []
