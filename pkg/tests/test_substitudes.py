import itertools

import pytest

from noperads.errors import AxiomFailure, NotStrictMonoidal, TruncationRequired
from noperads.fincat import SetPresheaf, arrow_category, constant_presheaf
from noperads.substitudes import (
    CategorySubstitude,
    NOSubstitude,
    algebra_hom_count,
    capped_addition,
    capped_sum_algebra,
    check_algebra,
    check_substitude,
    check_unary_tame,
    classifier_pc,
    comma_cross_check,
    constant_disconnection_report,
    convolution,
    convolution_associator,
    cyclic_monoid_algebra,
    filtration_colimit,
    free_algebra,
    generator_element,
    is_alternating,
    marked_finality,
    micro_instances,
    monoid_algebra,
    monoid_substitude,
    monoidal_substitude,
    poset_category,
    presheaf_algebra,
    presheaf_maps,
    profiles_up_to,
    retract_word,
    shuffle_coproduct,
    tilde_functor,
)
from noperads.substitudes.classifiers import K, X


def representable(P, a):
    """The covariant representable at a for a poset colour category."""
    A = P.colours
    return SetPresheaf.from_function(A, [[0] if A.hom(a, c) else [] for c in range(A.n_objects)], lambda m, i: 0)


# -- substitudes ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "P", [monoid_substitude(), capped_addition(2), CategorySubstitude(arrow_category()), NOSubstitude(2, 3, "normal")]
)
def test_instances_satisfy_the_axioms(P):
    check_substitude(P, max_arity=2)


def test_non_strict_tensor_is_rejected():
    C = poset_category(3, lambda a, b: a <= b)
    with pytest.raises(NotStrictMonoidal):
        # capped addition with 1 declared as the unit object
        monoidal_substitude(C, lambda a, b: min(a + b, 2), lambda f, g: C.hom(0, 0)[0], 1)


# -- convolution -----------------------------------------------------------------------


def test_convolution_for_monoids_is_the_product():
    P = monoid_substitude()
    A = P.colours
    Xs = [constant_presheaf(A, tuple(range(k))) for k in (2, 3)]
    assert len(convolution(P, Xs).values[0]) == 6
    assert len(convolution(P, Xs + [Xs[0]]).values[0]) == 12
    assert [len(v) for v in convolution(P, []).values] == [1]


def test_convolution_of_representables_is_representable():
    P = capped_addition(2)
    for a, b in itertools.product(range(3), repeat=2):
        Z = convolution(P, [representable(P, a), representable(P, b)])
        assert [len(v) for v in Z.values] == [len(v) for v in representable(P, min(a + b, 2)).values]


def test_convolution_associator_is_a_bijection():
    P = capped_addition(2)
    X, Y, Z = representable(P, 1), representable(P, 0), constant_presheaf(P.colours, ("p", "q"))
    right = convolution(P, [X, Y, Z])
    for a, m in enumerate(convolution_associator(P, X, Y, Z)):
        assert sorted(m.values()) == list(range(len(right.values[a])))


# -- algebras -------------------------------------------------------------------------


def test_example_algebras():
    P = monoid_substitude()
    check_algebra(cyclic_monoid_algebra(P, 3), max_arity=3)
    check_algebra(capped_sum_algebra(capped_addition(2)), max_arity=2)
    # right zero multiplication: associative, but 0 is not a unit
    table = {(a, b): b for a in range(2) for b in range(2)}
    with pytest.raises(AxiomFailure):
        check_algebra(monoid_algebra(P, range(2), table, 0), max_arity=2)


def test_free_monoid_sizes():
    P = monoid_substitude()
    A = P.colours
    # words of length at most the bound
    assert len(free_algebra(P, constant_presheaf(A), bound=3).value(0)) == 4
    assert len(free_algebra(P, constant_presheaf(A, ("a", "b")), bound=2).value(0)) == 7
    with pytest.raises(TruncationRequired):
        free_algebra(P, constant_presheaf(A))


def test_free_algebra_of_a_category_substitude_is_the_presheaf():
    P = CategorySubstitude(arrow_category())
    A = P.colours
    Xp = SetPresheaf.from_function(A, [["a"], ["a", "b"]], lambda m, i: i)
    F = check_algebra(free_algebra(P, Xp))
    assert [len(F.value(a)) for a in range(2)] == [1, 2]
    Yp = SetPresheaf.from_function(A, [["u", "v"], ["u", "v", "w"]], lambda m, i: i)
    assert algebra_hom_count(F, presheaf_algebra(P, Yp)) == len(presheaf_maps(Xp, Yp))


def test_free_algebra_adjunction_for_capped_addition():
    P = capped_addition(2)
    Xp = representable(P, 1)
    F = check_algebra(free_algebra(P, Xp, bound=2), max_arity=2)
    # maps out of the free algebra are determined by the generator
    Y = capped_sum_algebra(P)
    assert algebra_hom_count(F, Y) == len(presheaf_maps(Xp, Y.carrier))
    g = generator_element(F, 1, 0)
    assert g in F.value(1)


# -- classifiers and finality ---------------------------------------------------------


def test_alternating_words():
    assert is_alternating((X,)) and is_alternating((X, K, X))
    assert not is_alternating((K,)) and not is_alternating((X, K)) and not is_alternating((X, X, K, X))


def test_monoid_classifier_is_final_on_alternating_words():
    C = classifier_pc(monoid_substitude(), 3)
    assert bool(marked_finality(C))
    assert all(is_alternating(C.objects[a][3]) for a in C.marked)


def test_retraction_of_a_word():
    P = monoid_substitude()
    C = classifier_pc(P, 4, 3)
    Xt = tilde_functor(C, cyclic_monoid_algebra(P, 2), constant_presheaf(P.colours, ("k",)))
    obj = (0, (0,) * 6, 0, (K, K, X, X, X, K))
    target, vals = retract_word(C, Xt, obj, ("k", "k", 1, 1, 1, "k"))
    # units fill the gaps, the X block multiplies out
    assert target[3] == (X, K, X, K, X, K, X)
    assert vals == (0, "k", 0, "k", 1, "k", 0)


@pytest.mark.parametrize("order,degree", [(2, 2), (3, 2), (2, 3)])
def test_shuffle_coproduct_matches_normal_forms(order, degree):
    P = monoid_substitude()
    R = shuffle_coproduct(P, cyclic_monoid_algebra(P, order), constant_presheaf(P.colours), degree)
    # Z/order amalgamated with one free generator: x_0 k x_1 ... k x_j
    expected = sum(order ** (j + 1) for j in range(degree + 1))
    assert R.alternating_count() == R.coproduct_count() == expected
    assert R.shuffle_count() >= expected


def test_shuffle_coproduct_with_empty_k():
    P = monoid_substitude()
    R = shuffle_coproduct(P, cyclic_monoid_algebra(P, 2), SetPresheaf(P.colours, [[]], [()]), 2)
    assert R.coproduct_count() == 2


def test_unary_tameness():
    for P in (monoid_substitude(), CategorySubstitude(arrow_category())):
        assert check_unary_tame(P, 3).ok
    cert = check_unary_tame(NOSubstitude(2, 3, "constant_free"), 2)
    assert cert.ok and cert.candidate == "noncontractible retracts"


# -- fibers --------------------------------------------------------------------------


def test_monoid_fibers_are_points():
    rep = constant_disconnection_report(monoid_substitude(), [(), (0,), (0, 0), (0, 0, 0)])
    assert rep.ok and rep.components == 4


def test_single_ordinal_profiles():
    P = NOSubstitude(2, 4, "normal")
    for a in range(P.colours.n_objects):
        assert constant_disconnection_report(P, [(a,)]).ok


def test_nop_fiber_components_without_initial_objects():
    # a recorded counterexample: over the profile (level 1, level 0) both
    # components lack an initial object, yet they are acyclic and the
    # component maps stay bijective
    P = NOSubstitude(2, 4, "normal")
    rep = constant_disconnection_report(P, profiles_up_to(P, 4, 3))
    assert rep.non_posets == [] and rep.non_bijective == [] and rep.noncontractible == []
    assert {b[0] for b in rep.bad_initial} == {(1, 0)}
    assert all(b[2] == 0 for b in rep.bad_initial)


def test_comma_categories_agree_with_strict_fibers():
    counts, constant = comma_cross_check(monoid_substitude(), 2)
    assert counts == [((0, 0), 1, 1)] and constant
    P = NOSubstitude(2, 3, "normal")
    for k in (1, 2):
        counts, constant = comma_cross_check(P, k)
        assert all(c1 == c2 for _, c1, c2 in counts)
        # the comma-category route sees the missing initial objects too
        assert constant == (k == 1)


# -- filtration ------------------------------------------------------------------------


def test_filtration_on_micro_instances():
    for name, P, Xa, Kp, Lp, f, g, arity_cap, D in micro_instances():
        R = filtration_colimit(P, Xa, Kp, Lp, f, g, arity_cap, D)
        assert R.staged == R.direct, name
        assert R.monotone
        assert R.stages[0].size == sum(len(v) for v in Xa.carrier.values)


def test_filtration_with_no_cells_is_constant():
    P = monoid_substitude()
    A = P.colours
    empty = SetPresheaf(A, [[]], [()])
    R = filtration_colimit(P, cyclic_monoid_algebra(P, 2), empty, empty, lambda c, k: k, lambda c, k: k, 3, 2)
    assert [s.size for s in R.stages] == [2, 2, 2] and R.direct == 2
