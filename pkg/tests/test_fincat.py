import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from noperads.errors import BadIdentity, NonAssociative, SizeBudgetExceeded
from noperads.fincat import (
    FinCategory,
    FinFunctor,
    SetPresheaf,
    arrow_category,
    check_bimodule,
    check_category,
    check_functor,
    check_presheaf,
    colim,
    comma,
    concrete_category,
    constant_presheaf,
    discrete_category,
    dumps,
    grothendieck,
    hom_bimodule,
    identity_functor,
    is_connected,
    is_constantly_disconnected,
    is_disconnected_functor,
    is_final,
    left_kan,
    lim,
    loads,
    presheaf_coproduct,
    product_category,
    random_concrete_category,
    representable_presheaf,
    tautological_presheaf,
    terminal_category,
    to_dict,
    under,
)
from noperads.harness import naive_left_kan_classes
from noperads.ordinals import milgram_poset, quasibijection_category, total_order_functor

seeds = st.integers(min_value=0, max_value=10**9)


def parallel_pair(f_table, g_table):
    """Two objects and two parallel arrows; a presheaf sends them to the given tables."""
    cat = FinCategory(["s", "t"], [0, 1, 0, 0], [0, 1, 1, 1], [("id", 0), ("id", 1), "f", "g"], [0, 1], {})
    X = SetPresheaf(cat, [[1, 2], [1, 2]], [(0, 1), (0, 1), tuple(f_table), tuple(g_table)])
    return cat, X


def to_terminal(C):
    return FinFunctor(C, terminal_category(), [0] * C.n_objects, [0] * C.n_morphisms)


def cyclic_monoid_category(order):
    """One object, morphisms the powers of a generator of Z/order."""
    mors = list(range(order))
    return FinCategory(["*"], [0] * order, [0] * order, [("id", 0)] + mors[1:], [0], lambda g, f: (g + f) % order)


# -- construction and validation ------------------------------------------------


def test_terminal_and_arrow_are_categories():
    assert check_category(terminal_category()).n_morphisms == 1
    A = check_category(arrow_category())
    assert (A.n_objects, A.n_morphisms) == (2, 3)
    assert A.hom(0, 1) == [2] and A.hom(1, 0) == []


def test_broken_associativity_is_named():
    # Z/3 as a one-object category with g.g perturbed to the identity:
    # (g.g).g^2 = g^2 but g.(g.g^2) = g
    cat = cyclic_monoid_category(3)
    table = {(g, f): (g + f) % 3 for g in range(3) for f in range(3)}
    table[(1, 1)] = 0
    bad = FinCategory(cat.objects, cat.src, cat.tgt, cat.labels, cat.identities, table)
    with pytest.raises(NonAssociative) as e:
        check_category(bad)
    h, g, f = e.value.witness
    assert bad.compose(h, bad.compose(g, f)) != bad.compose(bad.compose(h, g), f)


def test_json_identity_mismatch():
    d = to_dict(cyclic_monoid_category(3))
    d["compose"][0][1] = 2
    with pytest.raises(BadIdentity):
        check_category(d)


def test_check_cap():
    with pytest.raises(SizeBudgetExceeded):
        check_category(cyclic_monoid_category(5), cap=4)


def test_json_round_trip():
    C = quasibijection_category(2, 3)
    D = loads(dumps(C))
    assert (D.n_objects, D.n_morphisms) == (C.n_objects, C.n_morphisms)
    assert json.loads(dumps(D)) == json.loads(dumps(C))


def test_product_category_counts():
    P = check_category(product_category([arrow_category(), arrow_category()]))
    assert (P.n_objects, P.n_morphisms) == (4, 9)


# -- comma and Grothendieck constructions --------------------------------------


def test_comma_trivial_cases():
    one = terminal_category()
    C, _ = comma(identity_functor(one), 0)
    assert (C.n_objects, C.n_morphisms) == (1, 1)
    pick_a = FinFunctor(one, arrow_category(), [0], [0])
    C, _ = comma(pick_a, 1)
    assert C.objects == [(0, 2)]


def test_comma_of_total_order_is_milgram_poset():
    C, _ = comma(total_order_functor(2, 2), 0)
    J = milgram_poset(2, 2)
    assert (C.n_objects, C.n_morphisms) == (J.n_objects, J.n_morphisms) == (4, 8)
    # Hasse diagram is a 4-cycle: every object meets exactly two non-identity arrows
    degree = [0] * 4
    for m in C.non_identity():
        degree[C.src[m]] += 1
        degree[C.tgt[m]] += 1
    assert degree == [2, 2, 2, 2]


def test_grothendieck_of_singleton_is_terminal():
    one = terminal_category()
    G = grothendieck(hom_bimodule(identity_functor(one)))
    assert (G.category.n_objects, G.category.n_morphisms) == (1, 1)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_grothendieck_fibers_are_commas(seed):
    rng = random.Random(seed)
    B = random_concrete_category(rng, 4, 2)
    objs = sorted(rng.sample(range(B.n_objects), rng.randint(1, B.n_objects)))
    _, u = B.full_subcategory(objs)
    F = check_bimodule(hom_bimodule(u))
    G = grothendieck(F)
    check_functor(G.p)
    check_functor(G.pi)
    for d in range(B.n_objects):
        # the fiber of p over d is d/u
        fib = [o for o in range(G.category.n_objects) if G.category.objects[o][0] == d]
        arrows = [m for m in range(G.category.n_morphisms) if G.p.mor_map[m] == B.identities[d] and G.category.src[m] in fib]
        U, _ = under(d, u)
        assert (len(fib), len(arrows)) == (U.n_objects, U.n_morphisms)


# -- colimits and limits --------------------------------------------------------


def test_colim_examples():
    A = arrow_category()
    assert len(colim(constant_presheaf(A))) == 1
    D = discrete_category(["p", "q"])
    X = SetPresheaf(D, [["a"], ["b", "c"]], [(0,), (0, 1)])
    assert len(colim(X)) == 3
    _, Y = parallel_pair((0, 1), (1, 0))
    assert len(colim(Y)) == 1


def test_lim_examples():
    assert len(lim(constant_presheaf(arrow_category()))) == 1
    D = discrete_category(["p", "q"])
    X = SetPresheaf(D, [["a"], ["b", "c"]], [(0,), (0, 1)])
    assert len(lim(X)) == 2
    _, Y = parallel_pair((0, 1), (1, 0))
    assert lim(Y) == []


def test_empty_category():
    E = FinCategory([], [], [], [], [], {})
    assert len(colim(SetPresheaf(E, [], []))) == 0
    assert not is_final(FinFunctor(E, terminal_category(), [], []))


# -- Kan extensions -------------------------------------------------------------


def test_left_kan_along_identity_and_to_point():
    X = tautological_presheaf(random_concrete_category(random.Random(3), 4, 2))
    L = left_kan(identity_functor(X.base), X)
    assert [len(v) for v in L.values] == [len(v) for v in X.values]
    T = left_kan(to_terminal(X.base), X)
    assert len(T.values[0]) == len(colim(X))


def test_left_kan_total_order_constant():
    u = total_order_functor(2, 3)
    L = left_kan(u, constant_presheaf(u.source))
    assert len(L.values[0]) == 1
    assert is_connected(milgram_poset(2, 3)) and milgram_poset(2, 3).n_objects == 24


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_left_kan_matches_naive_search(seed):
    rng = random.Random(seed)
    C = random_concrete_category(rng, 5, 2)
    objs = sorted(rng.sample(range(C.n_objects), rng.randint(1, C.n_objects)))
    _, inc = C.full_subcategory(objs)
    X = tautological_presheaf(C).pullback(inc)
    L = left_kan(inc, X)
    check_presheaf(L)
    for b in range(C.n_objects):
        naive = naive_left_kan_classes(inc, X, b)
        assert sorted(c[0] for c in naive) == sorted(L.values[b])


# -- finality ---------------------------------------------------------------------


def test_finality_examples():
    A = arrow_category()
    assert is_final(identity_functor(A))
    _, terminal_inc = A.full_subcategory([1])
    assert is_final(terminal_inc)
    _, domain_inc = A.full_subcategory([0])
    cert = is_final(domain_inc)
    assert not cert and cert.failure[0] == 1


def test_disconnected_examples():
    A = arrow_category()
    assert is_disconnected_functor(identity_functor(A))
    assert is_constantly_disconnected(identity_functor(A))
    D = discrete_category(["p", "q"])
    assert is_disconnected_functor(to_terminal(D))


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_final_restriction_keeps_colimit(seed):
    rng = random.Random(seed)
    C = random_concrete_category(rng, 6, 2)
    objs = sorted(rng.sample(range(C.n_objects), rng.randint(1, C.n_objects)))
    _, inc = C.full_subcategory(objs)
    if not is_final(inc):
        return
    Xs = [tautological_presheaf(C), representable_presheaf(C, rng.randrange(C.n_objects)), constant_presheaf(C)]
    X = presheaf_coproduct(Xs)
    full, rest = colim(X), colim(X.pullback(inc))
    image = {}
    for a, b in enumerate(inc.obj_map):
        for i in range(len(X.values[b])):
            assert image.setdefault(rest.cocone[a][i], full.cocone[b][i]) == full.cocone[b][i]
    assert len(image) == len(rest) == len(full) == len(set(image.values()))


# -- concrete micro categories -------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_random_concrete_categories_are_categories(seed):
    C = random_concrete_category(random.Random(seed))
    check_category(C)
    assert C.n_objects <= 6
    check_presheaf(tautological_presheaf(C))
    for c in range(C.n_objects):
        R = representable_presheaf(C, c)
        check_presheaf(R)
        assert len(R.values[c]) == len(C.hom(c, c))


def test_concrete_category_closure():
    # a constant map and a swap on a 2-element set generate 4 endomorphisms
    C = check_category(concrete_category([2], [(0, 0, (1, 0)), (0, 0, (0, 0))]))
    assert C.n_morphisms == 4
