import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from noperads.errors import NotConnected, SizeBudgetExceeded
from noperads.fincat import FinCategory, arrow_category, discrete_category, random_concrete_category, terminal_category
from noperads.homotopy import (
    betti,
    h1_integral,
    homology_report,
    nerve,
    pi1_presentation,
    rank_f2,
    rank_q,
    smith_invariants,
)
from noperads.ordinals import milgram_poset, quasibijection_category

seeds = st.integers(min_value=0, max_value=10**9)


def dense(cols, nrows):
    return sympy.Matrix(nrows, len(cols), lambda r, c: cols[c].get(r, 0))


def add_terminal(C):
    """C with a new terminal object (the cone)."""
    n = C.n_objects
    objs = list(C.objects) + ["top"]
    src, tgt, labels = list(C.src), list(C.tgt), list(C.labels)
    to_top = {}
    for a in range(n):
        to_top[a] = len(src)
        src.append(a)
        tgt.append(n)
        labels.append(("to top", a))
    top_id = len(src)
    src.append(n)
    tgt.append(n)
    labels.append(("id", n))
    m0 = C.n_morphisms

    def comp(g, f):
        if g == top_id:
            return f
        if f < m0 and g >= m0:
            return to_top[C.src[f]]
        return C.compose(g, f)

    return FinCategory(objs, src, tgt, labels, list(C.identities) + [top_id], comp)


# -- nerves -------------------------------------------------------------------


def test_nerve_counts_small():
    assert nerve(terminal_category(), 3).counts() == [1, 0, 0, 0]
    assert nerve(arrow_category(), 3).counts() == [2, 1, 0, 0]
    assert nerve(quasibijection_category(3, 2), 3).counts() == [3, 6, 4, 0]


def test_nerve_budget():
    with pytest.raises(SizeBudgetExceeded):
        nerve(milgram_poset(2, 3), 3, budget=100)


# -- Betti numbers --------------------------------------------------------------


def test_betti_examples():
    assert betti(nerve(terminal_category(), 2)).betti[0] == 1
    assert betti(nerve(milgram_poset(2, 2), 2)).betti[:2] == (1, 1)
    N = nerve(quasibijection_category(3, 2), 3)
    assert betti(N, "q").betti[:3] == (1, 0, 0)
    assert betti(N, "f2").betti[:3] == (1, 1, 1)
    assert betti(N).euler == 1


def test_q22_is_a_circle():
    N = nerve(quasibijection_category(2, 2), 3)
    assert betti(N).betti[:2] == (1, 1)
    assert str(h1_integral(N)) == "Z"


def test_h1_examples():
    assert str(h1_integral(nerve(terminal_category(), 2))) == "0"
    h = h1_integral(nerve(quasibijection_category(3, 2), 2))
    assert (h.rank, h.torsion) == (0, (2,))
    assert h.factors() == [2]


def test_homology_report_fields():
    rep = homology_report(quasibijection_category(3, 2), 3, "z1")
    assert rep["h1_factors"] == [2] and rep["complex"][:3] == [3, 6, 4]
    rep = homology_report(quasibijection_category(2, 2), 2, "q")
    assert rep["betti"][:2] == [1, 1]


# -- fundamental groups -----------------------------------------------------------


def test_pi1_examples():
    assert str(pi1_presentation(add_terminal(arrow_category())).abelianization) == "0"
    assert str(pi1_presentation(quasibijection_category(2, 2)).abelianization) == "Z"
    assert str(pi1_presentation(quasibijection_category(2, 3)).abelianization) == "Z"
    ab = pi1_presentation(quasibijection_category(3, 2)).abelianization
    assert (ab.rank, ab.torsion) == (0, (2,))


def test_pi1_needs_connected():
    with pytest.raises(NotConnected):
        pi1_presentation(discrete_category(["p", "q"]))


# -- exact linear algebra against sympy -------------------------------------------


matrices = st.integers(1, 5).flatmap(
    lambda r: st.lists(st.dictionaries(st.integers(0, r - 1), st.integers(-4, 4).filter(bool), max_size=r), max_size=6).map(
        lambda cols: (r, cols)
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rank_and_smith_form_match_sympy(data):
    nrows, cols = data
    M = dense(cols, nrows)
    assert rank_q(cols) == M.rank()
    inv = smith_invariants(cols, nrows)
    if cols and M.rank():
        S = smith_normal_form(M, domain=sympy.ZZ)
        diag = [abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0]
        assert sorted(inv) == sorted(diag)
    else:
        assert list(inv) == []


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rank_f2_matches_brute_force(data):
    nrows, cols = data
    vecs = [tuple(c.get(r, 0) % 2 for r in range(nrows)) for c in cols]
    span = {tuple([0] * nrows)}
    for v in vecs:
        span |= {tuple((a + b) % 2 for a, b in zip(s, v)) for s in span}
    assert 2 ** rank_f2(cols) == len(span)


# -- invariants on random categories ----------------------------------------------


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_homology_invariants_on_random_categories(seed):
    C = random_concrete_category(random.Random(seed), 5, 2)
    N = nerve(C, 3)
    q, f2 = betti(N, "q"), betti(N, "f2")
    h1 = h1_integral(N)
    assert h1.rank == q.betti[1]
    # F2 counts the free part and every even invariant factor
    assert f2.betti[1] == h1.rank + sum(1 for d in h1.torsion if d % 2 == 0)
    if not N.has_higher:
        assert q.euler == q.euler_from_betti()
    for comp_objs in _components(C):
        sub, _ = C.full_subcategory(comp_objs)
        ab = pi1_presentation(sub).abelianization
        h = h1_integral(nerve(sub, 2))
        assert (ab.rank, ab.torsion) == (h.rank, h.torsion)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_terminal_object_gives_a_point(seed):
    C = add_terminal(random_concrete_category(random.Random(seed), 4, 2))
    rep = betti(nerve(C, 3))
    assert rep.betti[0] == 1 and all(b == 0 for b in rep.betti[1 : rep.exact_through + 1])


def _components(C):
    from noperads.fincat import connected_components

    comp, count = connected_components(C)
    return [[a for a in range(C.n_objects) if comp[a] == c] for c in range(count)]
