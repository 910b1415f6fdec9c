import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from noperads.errors import NotAMorphism, SizeBudgetExceeded
from noperads.fincat import check_category, check_functor, is_connected
from noperads.ordinals import (
    check_map,
    check_ordinal,
    compose,
    dominates,
    empty,
    enumerate_ordinals,
    fiber,
    fiber_elements,
    format_ordinal,
    from_steps,
    identity,
    is_map,
    is_poset,
    linear,
    milgram_poset,
    ordinal_maps,
    parse_ordinal,
    quasibijection_category,
    suspend,
    suspend_map,
    to_unit,
    total_order,
    total_order_functor,
    underlying_perm,
    unit,
)

small = st.tuples(st.integers(1, 3), st.integers(0, 4))


@st.composite
def ordinals(draw, n=None, max_k=4):
    n = draw(st.integers(1, 3)) if n is None else n
    k = draw(st.integers(1, max_k))
    return from_steps(n, draw(st.lists(st.integers(0, n - 1), min_size=k - 1, max_size=k - 1)))


# -- enumeration --------------------------------------------------------------


def test_enumeration_examples():
    assert len(enumerate_ordinals(3, 1)) == 1 and enumerate_ordinals(3, 1)[0] == unit(3)
    assert len(enumerate_ordinals(1, 4)) == 1
    assert all(x == 0 for x in enumerate_ordinals(1, 4)[0].levels)
    assert len(enumerate_ordinals(2, 3)) == 4
    assert enumerate_ordinals(2, 0) == [empty(2)]


@given(small)
def test_enumeration_count(nk):
    n, k = nk
    assert len(enumerate_ordinals(n, k)) == (1 if k == 0 else n ** (k - 1))


@given(small)
def test_enumerated_ordinals_satisfy_min_identity(nk):
    n, k = nk
    Ts = enumerate_ordinals(n, k)
    assert len(set(Ts)) == len(Ts)
    for T in Ts:
        check_ordinal(T)
        for p in range(n + 1):
            check_ordinal(suspend(T, p))


def test_enumeration_budget():
    with pytest.raises(SizeBudgetExceeded):
        enumerate_ordinals(4, 12)


def test_literal_round_trip():
    for T in enumerate_ordinals(3, 3):
        assert parse_ordinal(format_ordinal(T)) == T
    with pytest.raises(ValueError):
        parse_ordinal("n=2;k=3;levels=[(1,2):1,(1,3):1,(2,3):0]")


# -- maps and fibers -------------------------------------------------------------


def test_maps_to_unit_and_identity():
    T = from_steps(2, [1, 0])
    assert fiber(to_unit(T), 0) == T
    for i in range(T.k):
        assert fiber(identity(T), i) == unit(2)


def test_swap_is_a_map():
    a, b = linear(2, 2, 0), linear(2, 2, 1)
    assert check_map(a, b, (1, 0)).fn == (1, 0)
    # the other direction breaks the level-1 pair
    with pytest.raises(NotAMorphism):
        check_map(b, a, (1, 0))


@settings(max_examples=100, deadline=None)
@given(ordinals(n=2, max_k=3), ordinals(n=2, max_k=3), ordinals(n=2, max_k=3))
def test_fiber_of_composite(R, S, T):
    for sigma in ordinal_maps(R, S):
        for tau in ordinal_maps(S, T):
            ts = compose(tau, sigma)
            assert is_map(R, T, ts.fn)
            for i in range(T.k):
                E = fiber_elements(tau, i)
                # sigma restricted over the fiber of tau is a map of fibers
                src = fiber_elements(ts, i)
                restricted = check_map(fiber(ts, i), fiber(tau, i), tuple(E.index(sigma.fn[x]) for x in src))
                for j, e in enumerate(E):
                    assert fiber(restricted, j) == fiber(sigma, e)


@settings(max_examples=60, deadline=None)
@given(ordinals(max_k=3), ordinals(max_k=3), st.integers(0, 3))
def test_suspension_commutes_with_fibers(S, T, p):
    if S.n != T.n or p > S.n:
        return
    for sigma in ordinal_maps(S, T):
        s = suspend_map(sigma, p)
        assert is_map(s.source, s.target, s.fn)
        for i in range(T.k):
            assert fiber(s, i) == suspend(fiber(sigma, i), p)


def test_suspension_examples():
    assert suspend(unit(2), 1) == unit(3)
    assert suspend(linear(1, 3), 1) == linear(2, 3, 0)
    # the two-vertex 2-ordinal 0 1 | 2 3 4 with its two suspensions
    T = from_steps(2, [1, 0, 1, 1])
    assert suspend(T, 0) == from_steps(3, [2, 1, 2, 2])
    assert suspend(T, 2) == from_steps(3, [1, 0, 1, 1])


@given(ordinals(), ordinals(), st.integers(0, 3))
def test_suspension_is_injective(S, T, p):
    if S.n == T.n and p <= S.n and S != T:
        assert suspend(S, p) != suspend(T, p)


# -- domination ---------------------------------------------------------------------


def test_domination_examples():
    a, b = linear(2, 2, 0).relation(), linear(2, 2, 1).relation()
    assert dominates(a, a)
    assert dominates(a, b)
    assert not dominates(b, a)


# -- quasibijection categories ---------------------------------------------------------


def test_q_small_cases():
    Q1 = check_category(quasibijection_category(1, 4))
    assert (Q1.n_objects, Q1.n_morphisms) == (1, 1)
    Q = check_category(quasibijection_category(2, 2))
    assert Q.n_objects == 2
    assert [len(Q.hom(0, 1)), len(Q.hom(1, 0))] == [2, 0]
    Q3 = check_category(quasibijection_category(3, 2))
    for i, j in itertools.product(range(3), repeat=2):
        assert len(Q3.hom(i, j)) == (2 if i < j else 1 if i == j else 0)


def test_total_order_on_q22():
    u = check_functor(total_order_functor(2, 2))
    Q = u.source
    perms = sorted(underlying_perm(u.target, u.mor_map[m]) for m in Q.hom(0, 1))
    assert perms == [(0, 1), (1, 0)]
    assert total_order(unit(2)) == 1 and total_order(empty(2)) == 0


@pytest.mark.parametrize("n,k", [(1, 3), (2, 2), (2, 3), (3, 2), (3, 3), (2, 4)])
def test_milgram_poset_sizes(n, k):
    J = milgram_poset(n, k)
    assert is_poset(J)
    assert J.n_objects == math.factorial(k) * len(enumerate_ordinals(n, k))
    check_functor(total_order_functor(n, k))
    assert is_connected(J) == (n > 1 or k <= 1)


def test_milgram_j1_is_discrete():
    J = milgram_poset(1, 3)
    assert J.n_objects == 6 and J.n_morphisms == 6


def test_milgram_j22_is_a_square():
    J = milgram_poset(2, 2)
    assert J.n_objects == 4 and len(J.non_identity()) == 4
