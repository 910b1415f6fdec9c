import itertools

import pytest

from noperads.errors import ProfileMismatch, SizeBudgetExceeded
from noperads.optrees import (
    Leaf,
    NPlanarTree,
    Vertex,
    check_tree,
    complementary_relation,
    corolla,
    enumerate_trees,
    format_tree,
    is_sigma_free,
    parse_tree,
    satisfies_domination,
    substitute,
    substitute_all,
    trees_into,
    unit_tree,
)
from noperads.ordinals import enumerate_ordinals, from_steps, linear, quasibijections, unit

L0, L1 = linear(2, 2, 0), linear(2, 2, 1)


def two_vertex(root, upper, slot, labels, out, kind="normal"):
    kids = [Leaf(-1)] * root.k
    kids[slot] = Vertex(upper, tuple(Leaf(-1) for _ in range(upper.k)))
    it = iter(labels)

    def fill(node):
        if isinstance(node, Leaf):
            return Leaf(next(it))
        return Vertex(node.deco, tuple(fill(c) for c in node.children))

    return NPlanarTree(fill(Vertex(root, tuple(kids))), out, kind)


def naive_two_vertex_trees(R, U, S):
    """Trees with root R and one vertex U above it, by direct generation and filtering:
    the level of two leaves is read off the vertex where their paths split."""
    out = set()
    for slot in range(R.k):
        # leaf positions in planar order: (root slot, upper slot or None)
        pos = [(r, None) for r in range(slot)] + [(slot, u) for u in range(U.k)] + [(r, None) for r in range(slot + 1, R.k)]
        for labels in itertools.permutations(range(S.k)):
            ok = True
            for a, b in itertools.combinations(range(len(pos)), 2):
                (ra, ua), (rb, ub) = pos[a], pos[b]
                lev = U.level(ua, ub) if ra == rb else R.level(ra, rb)
                i, j = labels[a], labels[b]
                # S says i <_p j (for i < j); the tree has labels[a] before labels[b] at level lev
                p = S.level(min(i, j), max(i, j))
                if i < j and not lev >= p or i > j and not lev > p:
                    ok = False
                    break
            if ok:
                out.add(str(two_vertex(R, U, slot, labels, S)))
    return out


# -- relations and domination ------------------------------------------------------


def test_corolla_relation_is_its_decoration():
    for T in enumerate_ordinals(2, 3):
        assert complementary_relation(corolla(T)) == T.relation()


def test_two_vertex_relations():
    t = two_vertex(L0, L0, 0, [0, 1, 2], linear(2, 3, 0))
    assert complementary_relation(t) == linear(2, 3, 0).relation()
    t = two_vertex(L0, L1, 0, [0, 1, 2], linear(2, 3, 0))
    assert complementary_relation(t).rel == {(0, 1): 1, (0, 2): 0, (1, 2): 0}


def test_domination_examples():
    for T in enumerate_ordinals(2, 3):
        assert satisfies_domination(corolla(T), T)
    assert satisfies_domination(two_vertex(L0, L0, 0, [0, 1, 2], linear(2, 3, 0)))
    # a finer level in the tree is allowed, a coarser one is not
    assert satisfies_domination(corolla(L1), L0)
    assert not satisfies_domination(corolla(L0), L1)
    # swapping the leaves of a level-0 pair reverses the order
    assert satisfies_domination(corolla(L1, labels=(1, 0)), L0)
    assert not satisfies_domination(corolla(L0, labels=(1, 0)), L0)


# -- enumeration ------------------------------------------------------------------


def test_unary_profile_matches_quasibijections():
    for k in (1, 2, 3):
        for T in enumerate_ordinals(2, k):
            for S in enumerate_ordinals(2, k):
                trees = enumerate_trees(2, (T,), S, "general")
                assert len(trees) == len(quasibijections(S, T))
                # a leaf labelling is the underlying function of a quasibijection S -> T
                inv = {tuple(sorted(range(k), key=lambda x: t.leaf_labels()[x])) for t in trees}
                assert inv == {q.fn for q in quasibijections(S, T)}


def test_hom_level1_to_level0_has_two_elements():
    assert len(enumerate_trees(2, (L1,), L0, "general")) == 2


def test_empty_profile():
    assert enumerate_trees(2, (), unit(2), "normal") == []
    assert enumerate_trees(2, (), unit(2), "general") == [unit_tree(2)]


@pytest.mark.parametrize("R", enumerate_ordinals(2, 2))
@pytest.mark.parametrize("U", enumerate_ordinals(2, 2))
def test_two_vertex_enumeration_matches_naive(R, U):
    for S in enumerate_ordinals(2, 3):
        got = {str(t) for t in enumerate_trees(2, (R, U), S, "normal")}
        assert got == naive_two_vertex_trees(R, U, S)


def test_enumeration_budget():
    with pytest.raises(SizeBudgetExceeded):
        enumerate_trees(2, (L0,) * 6, linear(2, 7), "normal")


def test_trees_are_valid_and_sigma_free():
    for S in enumerate_ordinals(2, 4):
        trees = trees_into(S, 3, "normal")
        for t in trees:
            check_tree(t)
        assert is_sigma_free(trees)


def test_literal_round_trip():
    for S in enumerate_ordinals(2, 3):
        for t in trees_into(S, 2, "normal"):
            assert parse_tree(format_tree(t)) == t


def test_invalid_trees_rejected():
    with pytest.raises(ProfileMismatch):
        check_tree(NPlanarTree(Vertex(L0, (Leaf(0),)), L0, "normal"))
    with pytest.raises(ProfileMismatch):
        check_tree(NPlanarTree(corolla(L0).root, L1, "normal"))


# -- substitution ----------------------------------------------------------------------


def test_unit_laws():
    for S in enumerate_ordinals(2, 3):
        for t in trees_into(S, 2, "normal"):
            for v, vert in enumerate(t.vertices()):
                assert substitute(t, v, corolla(vert.deco, kind=t.kind)) == t
            assert substitute(corolla(S, kind="normal"), 0, t) == t


def test_substitution_is_associative():
    checked = 0
    for S in enumerate_ordinals(2, 4):
        for tau in trees_into(S, 2, "normal"):
            for v, vert in enumerate(tau.vertices()):
                for sigma in trees_into(vert.deco, 2, "normal"):
                    for w, wv in enumerate(sigma.vertices()):
                        for rho in trees_into(wv.deco, 2, "normal"):
                            if tau.n_vertices() + sigma.n_vertices() + rho.n_vertices() - 2 > 4:
                                continue
                            first, prov = substitute_all(tau, [sigma if i == v else None for i in range(tau.n_vertices())])
                            lhs = substitute(first, prov.index((v, w)), rho)
                            rhs = substitute(tau, v, substitute(sigma, w, rho))
                            assert lhs == rhs
                            checked += 1
    assert checked > 50


def test_substitution_preserves_domination():
    S = from_steps(2, [1, 0, 1])
    for tau in trees_into(S, 2, "normal"):
        for v, vert in enumerate(tau.vertices()):
            for sigma in trees_into(vert.deco, 2, "normal"):
                check_tree(substitute(tau, v, sigma))
