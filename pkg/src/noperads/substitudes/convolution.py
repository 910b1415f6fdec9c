"""Convolution of presheaves, algebras in Set and free algebras.

Presheaves on the colour category A are covariant SetPresheaf objects.  An
element of a convolution or free algebra is represented by the least triple
(profile, op, xs) of its class, xs being elements of the generating
presheaves.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from ..errors import AxiomFailure, NotAFunctor, SizeBudgetExceeded, TruncationRequired
from ..fincat import FinFunctor, SetPresheaf, UnionFind, grothendieck, left_kan
from .base import Substitude, operation_bimodule

DEFAULT_BUDGET = 10**6


# -- convolution ------------------------------------------------------------------


def tensor_presheaf(B, Xs):
    """X_1 x ... x X_k on the product category B = A^k, elements as index tuples."""
    k = len(Xs)
    values = []
    for b in range(B.n_objects):
        prof = B.objects[b] if k else ()
        values.append(list(itertools.product(*[range(len(X.values[a])) for X, a in zip(Xs, prof)])))
    pos = [{x: i for i, x in enumerate(v)} for v in values]

    def act(m, i):
        ms = B.labels[m] if k else ()
        x = values[B.src[m]][i]
        return pos[B.tgt[m]][tuple(X.action[mi][xi] for X, mi, xi in zip(Xs, ms, x))]

    return SetPresheaf.from_function(B, values, act)


def convolution(P: Substitude, Xs, budget=DEFAULT_BUDGET) -> SetPresheaf:
    """The convolution X_1 * ... * X_k: left Kan extension along the output
    projection of the Grothendieck construction of the arity-k operations,
    applied to the pulled back tensor of the X_i."""
    Xs = list(Xs)
    k = len(Xs)
    if P.max_arity is not None and k > P.max_arity:
        A = P.colours
        return SetPresheaf(A, [[] for _ in range(A.n_objects)], [() for _ in range(A.n_morphisms)])
    F = operation_bimodule(P, k)
    G = grothendieck(F, budget=budget)
    Y = tensor_presheaf(F.left_cat, Xs).pullback(G.p)
    L = left_kan(G.pi, Y)
    # replace (object, f, element) triples by readable (profile, op, xs)
    B = F.left_cat
    values = []
    for a, vals in enumerate(L.values):
        row = []
        for o, f, i in vals:
            b, a0, j = G.category.objects[o]
            prof = tuple(B.objects[b]) if k else ()
            op = P.act_out(f, prof, F.values[(b, a0)][j])
            xs = tuple(X.values[c][x] for X, c, x in zip(Xs, prof, Y.values[o][i]))
            row.append((prof, op, xs))
        values.append(row)
    return SetPresheaf(L.base, values, L.action)


def unit_presheaf(P: Substitude):
    """P(;-), the empty convolution."""
    return convolution(P, [])


def convolution_associator(P: Substitude, X, Y, Z):
    """The map (X * Y) * Z -> X * Y * Z induced by substitution, per colour,
    as a list of dicts from element index to element index."""
    XY = convolution(P, [X, Y])
    left = convolution(P, [XY, Z])
    right = convolution(P, [X, Y, Z])
    lookup = _class_lookup(P, [X, Y, Z], right)
    maps = []
    for a, vals in enumerate(left.values):
        m = {}
        for i, (prof, op, (xy, z)) in enumerate(vals):
            prof1, op1, (x, y) = xy
            c = lookup(a, *_compose_elements(P, prof, a, op, [(prof1, op1, (x, y)), ((prof[1],), None, (z,))]))
            m[i] = c
        maps.append(m)
    return maps


def _compose_elements(P, prof, out, op, parts):
    """op applied to elements (prof_i, op_i, xs_i); op_i None means a generator."""
    A = P.colours
    subs, xs = [], []
    for p, o, e in parts:
        if o is None:
            subs.append((p, P.identity_op(p[0])))
        else:
            subs.append((p, o))
        xs.extend(e)
    prof2, op2, perm = P.compose(prof, out, op, subs)
    return prof2, op2, tuple(xs[perm[j]] for j in range(len(prof2)))


def _class_lookup(P, Xs, conv):
    """Find the class of an arbitrary (profile, op, xs) in a computed convolution
    by walking to a representative through the output action."""
    A = P.colours
    index = [{v: i for i, v in enumerate(vals)} for vals in conv.values]
    k = len(Xs)
    F = operation_bimodule(P, k)
    cache = {}

    def lookup(a, prof, op, xs):
        key = (a, prof, op, xs)
        if key in cache:
            return cache[key]
        # the triple itself is an element of the underlying union; search its class by
        # moving it along every input action until a recorded representative appears
        seen = {(prof, op, xs)}
        frontier = [(prof, op, xs)]
        while frontier:
            cur = frontier.pop()
            if cur in index[a]:
                found = index[a][cur]
                # every visited triple lies in the same class
                for p, o, e in seen:
                    cache[(a, p, o, e)] = found
                return found
            if (a,) + cur in cache:
                found = cache[(a,) + cur]
                for p, o, e in seen:
                    cache[(a, p, o, e)] = found
                return found
            p, o, e = cur
            for nxt in _neighbours(P, Xs, a, p, o, e):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        raise AxiomFailure("element not found in the convolution", key)

    return lookup


def _neighbours(P, Xs, a, prof, op, xs):
    """Triples related to (prof, op, xs) by one input action, in either direction."""
    A = P.colours
    out = []
    for i, c in enumerate(prof):
        X = Xs[i]
        xi = X.values[c].index(xs[i])
        for m in A.into(c):
            b = A.src[m]
            ms = [A.identities[d] for d in prof]
            ms[i] = m
            for y in range(len(X.values[b])):
                if X.action[m][y] == xi:
                    p2 = prof[:i] + (b,) + prof[i + 1 :]
                    o2 = P.act_in(ms, prof, op, a)
                    out.append((p2, o2, xs[:i] + (X.values[b][y],) + xs[i + 1 :]))
        for m in A.out_of(c):
            t = A.tgt[m]
            p2 = prof[:i] + (t,) + prof[i + 1 :]
            ms = [A.identities[d] for d in p2]
            ms[i] = m
            y = X.values[t][X.action[m][xi]]
            for o2 in P.ops(p2, a):
                if P.act_in(ms, p2, o2, a) == op:
                    out.append((p2, o2, xs[:i] + (y,) + xs[i + 1 :]))
    return out


# -- algebras ------------------------------------------------------------------------


@dataclass
class AlgebraInSet:
    """An algebra: a presheaf on A with mult(profile, out, op, xs) -> element.

    ``mult`` may return None when a truncated carrier cannot hold the result."""

    substitude: Substitude
    carrier: SetPresheaf
    mult: Callable
    truncated: bool = False
    bound: int = None
    meta: dict = field(default_factory=dict)

    def value(self, a):
        return self.carrier.values[a]

    def index(self, a, x):
        cache = self.meta.setdefault("_index", {})
        if a not in cache:
            cache[a] = {v: i for i, v in enumerate(self.carrier.values[a])}
        return cache[a][x]

    def act(self, m, x):
        """Presheaf action of an A-morphism on an element value."""
        A = self.carrier.base
        return self.carrier.values[A.tgt[m]][self.carrier.action[m][self.index(A.src[m], x)]]


def check_algebra(Alg: AlgebraInSet, max_arity=2, budget=DEFAULT_BUDGET):
    """Unit law (eta(m) acts as the presheaf action) and associativity of the
    structure maps against substitution, for operations of arity <= max_arity."""
    P, A = Alg.substitude, Alg.carrier.base
    for m in range(A.n_morphisms):
        for x in Alg.value(A.src[m]):
            y = Alg.mult((A.src[m],), A.tgt[m], P.unit(m), (x,))
            if y is not None and y != Alg.act(m, x):
                raise AxiomFailure("unit operations do not act as the presheaf action", (m, x))
    count = 0
    for out in range(A.n_objects):
        for prof, op in P.ops_into(out, max_arity):
            for subs in itertools.product(*[P.ops_into(c, max_arity) for c in prof]):
                prof2, op2, perm = P.compose(prof, out, op, list(subs))
                for xs in itertools.product(*[Alg.value(c) for p, _ in subs for c in p]):
                    count += 1
                    if count > budget:
                        raise SizeBudgetExceeded("algebra check over budget", count)
                    inner, pos = [], 0
                    for (p, o), c in zip(subs, prof):
                        inner.append(Alg.mult(p, c, o, tuple(xs[pos : pos + len(p)])))
                        pos += len(p)
                    if any(y is None for y in inner):
                        continue
                    lhs = Alg.mult(prof, out, op, tuple(inner))
                    rhs = Alg.mult(prof2, out, op2, tuple(xs[perm[j]] for j in range(len(prof2))))
                    if lhs is not None and rhs is not None and lhs != rhs:
                        raise AxiomFailure("structure maps are not associative", (prof, out, op, xs))
    return Alg


def monoid_algebra(P: Substitude, elements, table, unit):
    """An algebra of the monoid substitude from a multiplication table."""
    elements = list(elements)
    A = P.colours
    carrier = SetPresheaf(A, [elements], [tuple(range(len(elements)))])

    def mult(profile, out, op, xs):
        r = unit
        for x in xs:
            r = table[(r, x)]
        return r

    return AlgebraInSet(P, carrier, mult)


def cyclic_monoid_algebra(P: Substitude, order=2):
    """Z/order as an algebra of the monoid substitude."""
    table = {(a, b): (a + b) % order for a in range(order) for b in range(order)}
    return monoid_algebra(P, range(order), table, 0)


# -- free algebras ---------------------------------------------------------------------


def free_algebra(P: Substitude, X: SetPresheaf, bound=None, budget=DEFAULT_BUDGET) -> AlgebraInSet:
    """Free algebra on X, truncated to elements built from at most ``bound``
    generators.  An element is the least (profile, op, xs) of its class under
    the input actions; structure maps substitute and permute the generators."""
    A = P.colours
    nonempty = any(X.values)
    if bound is None:
        if nonempty and P.max_arity is None:
            raise TruncationRequired("the free algebra may be infinite; supply a generator bound")
        bound = P.max_arity if nonempty else 0
    top = bound if P.max_arity is None else min(bound, P.max_arity)
    truncated = nonempty and (P.max_arity is None or bound < P.max_arity)
    triples = [[] for _ in range(A.n_objects)]
    for out in range(A.n_objects):
        for k in range(top + 1):
            for prof in P.profiles(k):
                gens = [X.values[c] for c in prof]
                if any(not g for g in gens):
                    continue
                for op in P.ops(prof, out):
                    for xs in itertools.product(*gens):
                        triples[out].append((prof, op, xs))
                        if len(triples[out]) > budget:
                            raise SizeBudgetExceeded("free algebra too large", (out, len(triples[out])))
    values, classes = [], []
    for out in range(A.n_objects):
        elems = triples[out]
        pos = {e: i for i, e in enumerate(elems)}
        uf = UnionFind(len(elems))
        for i, (prof, op, xs) in enumerate(elems):
            # relate (prof, op, X(m) xs) with (src prof, act_in(m) op, xs) one input at a time
            for j, c in enumerate(prof):
                for m in A.into(c):
                    if A.is_identity(m):
                        continue
                    b = A.src[m]
                    ms = [A.identities[d] for d in prof]
                    ms[j] = m
                    op2 = P.act_in(ms, prof, op, out)
                    prof2 = prof[:j] + (b,) + prof[j + 1 :]
                    for y in X.values[b]:
                        if X.values[c][X.action[m][X.values[b].index(y)]] == xs[j]:
                            uf.union(i, pos[(prof2, op2, xs[:j] + (y,) + xs[j + 1 :])])
        cls = uf.classes()
        values.append([elems[r] for r in sorted(cls)])
        classes.append((pos, uf, cls))

    def canon(out, e):
        pos, uf, cls = classes[out]
        if e not in pos:
            return None
        return triples[out][uf.find(pos[e])]

    vpos = [{v: i for i, v in enumerate(vals)} for vals in values]

    def act(m, i):
        prof, op, xs = values[A.src[m]][i]
        e = canon(A.tgt[m], (prof, P.act_out(m, prof, op), xs))
        return vpos[A.tgt[m]][e]

    carrier = SetPresheaf.from_function(A, values, act)

    def mult(profile, out, op, elems):
        subs, xs = [], []
        for (p, o, e) in elems:
            subs.append((p, o))
            xs.extend(e)
        if len(xs) > top:
            return None
        prof2, op2, perm = P.compose(tuple(profile), out, op, subs)
        return canon(out, (prof2, op2, tuple(xs[perm[j]] for j in range(len(prof2)))))

    Alg = AlgebraInSet(P, carrier, mult, truncated=truncated, bound=top)
    Alg.meta["generators"] = X
    return Alg


def generator_element(Alg: AlgebraInSet, a, x):
    """The image of a generator x in X(a)."""
    P = Alg.substitude
    return Alg.mult((a,), a, P.identity_op(a), [((a,), P.identity_op(a), (x,))])


# -- hom counts for the free-forgetful adjunction ----------------------------------------


def presheaf_maps(X: SetPresheaf, Y: SetPresheaf, budget=DEFAULT_BUDGET):
    """All natural maps X -> Y as tuples of per-object element-index tuples."""
    C = X.base
    out = []
    count = 0
    choices = [list(itertools.product(range(len(Y.values[a])), repeat=len(X.values[a]))) for a in range(C.n_objects)]
    for combo in itertools.product(*choices):
        count += 1
        if count > budget:
            raise SizeBudgetExceeded("presheaf map enumeration over budget", count)
        if all(
            combo[C.tgt[m]][X.action[m][i]] == Y.action[m][combo[C.src[m]][i]]
            for m in range(C.n_morphisms)
            for i in range(len(X.values[C.src[m]]))
        ):
            out.append(combo)
    return out


def algebra_hom_count(F: AlgebraInSet, Y: AlgebraInSet, max_arity=2, budget=DEFAULT_BUDGET):
    """Number of presheaf maps F -> Y commuting with every defined structure map
    of arity <= max_arity (for a truncated F only the defined ones)."""
    P, A = F.substitude, F.carrier.base
    count = 0
    for phi in presheaf_maps(F.carrier, Y.carrier, budget):
        def img(a, x):
            return Y.value(a)[phi[a][F.index(a, x)]]

        ok = True
        for out in range(A.n_objects):
            for prof, op in P.ops_into(out, max_arity):
                for xs in itertools.product(*[F.value(c) for c in prof]):
                    z = F.mult(prof, out, op, xs)
                    if z is None:
                        continue
                    if img(out, z) != Y.mult(prof, out, op, tuple(img(c, x) for c, x in zip(prof, xs))):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        count += ok
    return count


# -- collections of n-operads as presheaves ----------------------------------------------------


def collection_presheaf(P, X):
    """A Collection (operads module) as a presheaf on the colour category of an
    NOSubstitude; the colour morphism labelled q acts by X.act(q, -)."""
    from ..ordinals import OrdinalMap

    A = P.colours
    values = [list(X.value(T)) for T in A.objects]
    pos = [{x: i for i, x in enumerate(v)} for v in values]

    def act(m, i):
        T, T2 = A.objects[A.src[m]], A.objects[A.tgt[m]]
        lab = A.labels[m]
        fn = tuple(range(T.k)) if lab[0] == "id" else lab
        x = values[A.src[m]][i]
        return pos[A.tgt[m]][X.act(OrdinalMap(T2, T, fn), x)]

    try:
        return SetPresheaf.from_function(A, values, act)
    except KeyError as e:
        raise NotAFunctor("collection action leaves its value sets", e.args) from None


def capped_sum_algebra(P: Substitude):
    """X(a) = {0..a} over the capped-addition poset, with sums truncated at the
    output colour; the presheaf action is inclusion."""
    A = P.colours
    values = [list(range(a + 1)) for a in range(A.n_objects)]
    carrier = SetPresheaf.from_function(A, values, lambda m, i: i)

    def mult(profile, out, op, xs):
        return min(sum(xs), out)

    return AlgebraInSet(P, carrier, mult)


def presheaf_algebra(P: Substitude, Y: SetPresheaf):
    """A presheaf as an algebra of a category substitude: operations act."""
    A = P.colours

    def mult(profile, out, op, xs):
        (x,) = xs
        return Y.values[A.tgt[op]][Y.action[op][Y.values[A.src[op]].index(x)]]

    return AlgebraInSet(P, Y, mult)
