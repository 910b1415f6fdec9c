import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from noperads.errors import AxiomFailure, TruncationRequired
from noperads.fincat import connected_components
from noperads.operads import (
    ass,
    beck_chevalley,
    check_collection,
    check_operad,
    check_sym_operad,
    coproduct,
    desymmetrise,
    free_operad,
    from_dict,
    generated_operads,
    hom_count_collections,
    hom_count_nop,
    hom_count_sym,
    ordinals_in,
    product,
    random_collection,
    redirect,
    representable,
    suspend_restrict,
    sym_ass,
    sym_com,
    sym_perm,
    sym_product,
    symmetrise_collection,
    symmetrise_operad,
    terminal_at,
    to_dict,
)
from noperads.ordinals import enumerate_ordinals, linear, milgram_poset, ordinal_maps, unit

seeds = st.integers(min_value=0, max_value=10**9)
L0, L1 = linear(2, 2, 0), linear(2, 2, 1)


# -- axioms ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ass_is_an_operad(n):
    A = check_operad(ass(n, 3))
    assert all(A.value(T) == ["*"] for T in ordinals_in(n, 3, "normal"))


@pytest.mark.parametrize("B", [sym_com(3), sym_ass(3), sym_perm(3), sym_product(sym_ass(3), sym_perm(3))])
def test_symmetric_examples_are_operads(B):
    check_sym_operad(B)
    check_operad(desymmetrise(B, 2))


def test_products_and_suspensions_are_operads():
    check_operad(product(ass(2, 3), desymmetrise(sym_perm(3), 2)))
    for p in range(3):
        R = check_operad(suspend_restrict(desymmetrise(sym_perm(3), 3), p))
        assert all(len(R.value(T)) == T.k for T in ordinals_in(2, 3, "normal"))
    with pytest.raises(ValueError):
        suspend_restrict(ass(1, 3), 0)


def test_changed_multiplication_is_caught():
    A = desymmetrise(sym_perm(3), 2)
    T = enumerate_ordinals(2, 3)[0]
    s = next(s for s in ordinal_maps(T, L0) if sorted(s.fn) == [0, 0, 1])
    good = A.mult(s, 0, (0, 0))
    bad = redirect(A, s, 0, (0, 0), next(v for v in A.value(T) if v != good))
    with pytest.raises(AxiomFailure):
        check_operad(bad, check_carrier=False)


def test_json_round_trip():
    A = desymmetrise(sym_ass(3), 2)
    d = json.loads(json.dumps(to_dict(A)))
    B = check_operad(from_dict(d))
    assert to_dict(B) == to_dict(A)


# -- free operads ---------------------------------------------------------------------


def test_free_on_one_binary_generator():
    F = check_operad(free_operad(representable(2, 3, L0)))
    sizes = {T: len(F.value(T)) for T in ordinals_in(2, 3, "normal")}
    assert sizes[unit(2)] == 1
    assert sizes[L0] == 1 and sizes[L1] == 0
    # two bracketings of three inputs at level 0, nothing at higher levels
    assert sizes[linear(2, 3, 0)] == 2
    assert sum(sizes.values()) == 4


def test_free_on_the_terminal_binary_collection():
    F = check_operad(free_operad(terminal_at(2, 3, {2})))
    assert [len(F.value(T)) for T in enumerate_ordinals(2, 2)] == [1, 1]
    # symmetrising gives the free symmetric operad on one commutative binary
    # operation, which has three elements of arity 3
    B = check_sym_operad(symmetrise_operad(F))
    assert [len(B.value(k)) for k in (1, 2, 3)] == [1, 1, 3]


def test_free_needs_generators_of_arity_two_or_more():
    with pytest.raises(TruncationRequired):
        free_operad(terminal_at(2, 3, {1}, kind="constant_free"))


@pytest.mark.parametrize("target", [ass(2, 3), desymmetrise(sym_ass(3), 2), desymmetrise(sym_perm(3), 2)])
@pytest.mark.parametrize("gens", [(L0,), (L1,), (L0, L1)])
def test_free_adjunction(gens, target):
    X = coproduct([representable(2, 3, T) for T in gens])
    assert hom_count_nop(free_operad(X), target) == hom_count_collections(X, target.carrier)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_free_adjunction_on_random_collections(seed):
    X = random_collection(random.Random(seed), 2, 3)
    check_collection(X)
    F = check_operad(free_operad(X))
    target = desymmetrise(sym_perm(3), 2)
    assert hom_count_nop(F, target) == hom_count_collections(X, target.carrier)


# -- symmetrisation -----------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sym_of_ass_counts_components(n):
    B = check_sym_operad(symmetrise_operad(ass(n, 3)))
    for k in (1, 2, 3):
        assert len(B.value(k)) == connected_components(milgram_poset(n, k))[1]


def test_depth_one_symmetrisation_is_free_on_orders():
    B = symmetrise_operad(desymmetrise(sym_ass(3), 1))
    assert {k: len(v) for k, v in B.values.items()} == {k: math.factorial(k) ** 2 for k in (1, 2, 3)}


@pytest.mark.parametrize("A", [ass(2, 3), desymmetrise(sym_perm(3), 2), free_operad(representable(2, 3, L0))])
@pytest.mark.parametrize("B", [sym_com(3), sym_ass(3), sym_perm(3)])
def test_symmetrisation_adjunction(A, B):
    assert hom_count_sym(symmetrise_operad(A), B) == hom_count_nop(A, desymmetrise(B, 2))


def test_hom_counts_by_hand():
    assert hom_count_sym(sym_com(3), sym_com(3)) == 1
    # the identity, and reversing every order
    assert hom_count_sym(sym_ass(3), sym_ass(3)) == 2
    assert hom_count_nop(ass(2, 3), desymmetrise(sym_ass(3), 2)) == 0


def test_beck_chevalley_on_generated_operads():
    for A in generated_operads(seed=0, n=2, N=3, count=14):
        rep = beck_chevalley(A)
        assert rep.ok, (A.name, rep.failure)
        sym_sizes = {k: len(v) for k, v in symmetrise_collection(A.carrier).values.items()}
        assert rep.sizes == sym_sizes
