"""Collections on Q_n^op, n-operads in Set, symmetrisation and friends.

Multiplications follow one serialisation contract: for an ordinal map
sigma: T -> S, ``m_sigma(x, ys)`` takes x in A(S) and ys = (y_0, ..., y_{k-1})
with y_i in A(T_i), T_i the fiber over i, in the order of S.

Symmetric operads use the same shape with finite sets in place of
ordinals: ``m_f(x, ys)`` for a function f: m -> k, the fibers ordered by
their smallest elements' natural order.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .errors import AxiomFailure, RepresentativeDependence, SizeBudgetExceeded, TruncationRequired
from .fincat import SetPresheaf, UnionFind, colim
from .optrees import (
    Leaf,
    NPlanarTree,
    Vertex,
    corolla,
    enumerate_trees,
    substitute_all,
    satisfies_domination,
    unit_tree,
)
from .ordinals import (
    NOrdinal,
    OrdinalMap,
    compose,
    enumerate_ordinals,
    fiber,
    fiber_elements,
    identity,
    lex_substitute,
    milgram_poset,
    ordinal_maps,
    quasibijection_category,
    quasibijections,
    suspend,
    suspend_map,
    symmetric_group_category,
    to_unit,
    underlying_perm,
    unit,
)

KIND_MIN = {"general": 0, "constant_free": 1, "normal": 1}
DEFAULT_ARITY = 4


def arity_range(N, kind):
    return range(KIND_MIN[kind], N + 1)


def ordinals_in(n, N, kind):
    return [T for k in arity_range(N, kind) for T in enumerate_ordinals(n, k)]


# -- shapes: the indexing categories for the two flavours of operads ----------


@dataclass(frozen=True)
class FinMap:
    source: int
    target: int
    fn: tuple


class OrdinalShapes:
    """Ordinals of size in range and their maps (surjective unless general)."""

    def __init__(self, n, N, kind):
        self.n, self.N, self.kind = n, N, kind
        self.surjective = kind != "general"

    def objects(self):
        return ordinals_in(self.n, self.N, self.kind)

    def maps(self, T, S):
        return ordinal_maps(T, S, surjective=self.surjective)

    def fiber(self, s, i):
        return fiber(s, i)

    def fiber_elements(self, s, i):
        return fiber_elements(s, i)

    def target_size(self, S):
        return S.k

    def compose(self, w, s):
        return compose(w, s)

    def restrict(self, s, w, i):
        """sigma_i: (w s)^{-1}(i) -> w^{-1}(i)."""
        src = fiber_elements(compose(w, s), i)
        tgt = fiber_elements(w, i)
        pos = {x: a for a, x in enumerate(tgt)}
        return OrdinalMap(fiber(compose(w, s), i), fiber(w, i), tuple(pos[s.fn[t]] for t in src))

    def unit_object(self):
        return unit(self.n)

    def identity(self, S):
        return identity(S)

    def to_unit(self, T):
        return to_unit(T)

    def bijections(self, T, S):
        return quasibijections(T, S)


class FinSetShapes:
    """Finite sets m = {0..m-1} and functions (surjective unless general)."""

    def __init__(self, N, kind):
        self.N, self.kind = N, kind
        self.surjective = kind != "general"

    def objects(self):
        return list(arity_range(self.N, self.kind))

    def maps(self, m, k):
        out = []
        for fn in itertools.product(range(k), repeat=m):
            if self.surjective and len(set(fn)) != k:
                continue
            out.append(FinMap(m, k, fn))
        return out

    def fiber(self, f, i):
        return sum(1 for x in f.fn if x == i)

    def fiber_elements(self, f, i):
        return [x for x in range(f.source) if f.fn[x] == i]

    def target_size(self, k):
        return k

    def compose(self, w, f):
        return FinMap(f.source, w.target, tuple(w.fn[x] for x in f.fn))

    def restrict(self, f, w, i):
        src = [t for t in range(f.source) if w.fn[f.fn[t]] == i]
        tgt = self.fiber_elements(w, i)
        pos = {x: a for a, x in enumerate(tgt)}
        return FinMap(len(src), len(tgt), tuple(pos[f.fn[t]] for t in src))

    def unit_object(self):
        return 1

    def identity(self, k):
        return FinMap(k, k, tuple(range(k)))

    def to_unit(self, m):
        return FinMap(m, 1, (0,) * m)

    def bijections(self, m, k):
        if m != k:
            return []
        return [FinMap(m, k, p) for p in itertools.permutations(range(m))]


# -- collections and operads ------------------------------------------------------


@dataclass
class Collection:
    """A presheaf on Q_n^op within the arity budget.

    ``act(sigma, x)`` for a quasibijection sigma: T -> S and x in A(S)
    returns an element of A(T).
    """

    n: int
    N: int
    kind: str
    values: dict
    act: Callable

    def value(self, T):
        return self.values.get(T, [])

    def index(self, T):
        cache = self.__dict__.setdefault("_index", {})
        if T not in cache:
            cache[T] = {x: i for i, x in enumerate(self.value(T))}
        return cache[T]

    def total(self):
        return sum(len(v) for v in self.values.values())


def check_collection(X: Collection):
    for k in arity_range(X.N, X.kind):
        objs = enumerate_ordinals(X.n, k)
        for T in objs:
            for x in X.value(T):
                if X.act(identity(T), x) != x:
                    raise AxiomFailure("identity acts non-trivially", (str(T), x))
        for T, S, R in itertools.product(objs, repeat=3):
            for s in quasibijections(T, S):
                for w in quasibijections(S, R):
                    for x in X.value(R):
                        if X.act(compose(w, s), x) != X.act(s, X.act(w, x)):
                            raise AxiomFailure("action is not functorial", (s.fn, w.fn, x))
    return X


@dataclass
class NOperadAlg:
    carrier: Collection
    unit: object
    mult: Callable  # mult(sigma, x, ys)
    name: str = ""

    @property
    def n(self):
        return self.carrier.n

    @property
    def N(self):
        return self.carrier.N

    @property
    def kind(self):
        return self.carrier.kind

    def value(self, T):
        return self.carrier.value(T)


@dataclass
class SymOperad:
    N: int
    kind: str
    values: dict  # arity -> list
    unit: object
    mult: Callable  # mult(f: FinMap, x, ys)
    name: str = ""

    def value(self, k):
        return self.values.get(k, [])

    def act(self, g, x):
        """Right action by a permutation g of k: m_g(x; units)."""
        k = len(g)
        return self.mult(FinMap(k, k, tuple(g)), x, (self.unit,) * k)


def _memo(fn):
    cache = {}

    def wrapped(s, x, ys):
        key = (s, x, ys)
        r = cache.get(key)
        if r is None:
            r = fn(s, x, ys)
            cache[key] = r
        return r

    return wrapped


def check_axioms(shapes, value, unit_elem, mult, budget=5 * 10**6):
    """Unit and associativity axioms for an operad over ``shapes``.

    Raises AxiomFailure with the replayable instance (maps, elements).
    """
    U = shapes.unit_object()
    if unit_elem not in value(U):
        raise AxiomFailure("unit is not an element of the unary value", unit_elem)
    objs = shapes.objects()
    for S in objs:
        for x in value(S):
            ident = shapes.identity(S)
            k = shapes.target_size(S)
            if mult(ident, x, (unit_elem,) * k) != x:
                raise AxiomFailure("right unit law fails", (ident, x))
            if mult(shapes.to_unit(S), unit_elem, (x,)) != x:
                raise AxiomFailure("left unit law fails", (shapes.to_unit(S), x))
    work = 0
    for T in objs:
        for S in objs:
            sigmas = shapes.maps(T, S)
            if not sigmas:
                continue
            for R in objs:
                omegas = shapes.maps(S, R)
                for s in sigmas:
                    T_fib = [shapes.fiber(s, j) for j in range(shapes.target_size(S))]
                    for w in omegas:
                        ws = shapes.compose(w, s)
                        r = shapes.target_size(R)
                        S_fib = [shapes.fiber(w, i) for i in range(r)]
                        S_elems = [shapes.fiber_elements(w, i) for i in range(r)]
                        s_i = [shapes.restrict(s, w, i) for i in range(r)]
                        for x in value(R):
                            for ys in itertools.product(*[value(F) for F in S_fib]):
                                xy = mult(w, x, ys)
                                for zs in itertools.product(*[value(F) for F in T_fib]):
                                    work += 1
                                    if work > budget:
                                        raise SizeBudgetExceeded("associativity check over budget", work)
                                    left = mult(s, xy, zs)
                                    inner = tuple(
                                        mult(s_i[i], ys[i], tuple(zs[j] for j in S_elems[i])) for i in range(r)
                                    )
                                    right = mult(ws, x, inner)
                                    if left != right:
                                        raise AxiomFailure(
                                            "associativity fails",
                                            {"sigma": s, "omega": w, "x": x, "ys": ys, "zs": zs},
                                        )
    return work


def check_operad(A: NOperadAlg, check_carrier=True):
    """Validate an n-operad: unit, associativity, and agreement of the carrier
    action with multiplication by units."""
    shapes = OrdinalShapes(A.n, A.N, A.kind)
    if A.kind == "normal":
        if len(A.value(unit(A.n))) != 1:
            raise AxiomFailure("normal operads have a singleton unary value", A.value(unit(A.n)))
    check_axioms(shapes, A.value, A.unit, A.mult)
    if check_carrier:
        for T in shapes.objects():
            for S in shapes.objects():
                for s in quasibijections(T, S):
                    for x in A.value(S):
                        if A.carrier.act(s, x) != A.mult(s, x, (A.unit,) * S.k):
                            raise AxiomFailure("carrier action differs from unit multiplication", (s, x))
    return A


def check_sym_operad(B: SymOperad):
    shapes = FinSetShapes(B.N, B.kind)
    if B.kind == "normal" and len(B.value(1)) != 1:
        raise AxiomFailure("normal operads have a singleton unary value", B.value(1))
    check_axioms(shapes, B.value, B.unit, B.mult)
    return B


def unary_action(A: NOperadAlg):
    def act(s, x):
        return A.mult(s, x, (A.unit,) * s.target.k)

    return act


def make_operad(n, N, kind, values, unit_elem, mult, name=""):
    """Wrap raw data; the carrier action is multiplication by units."""
    mult = _memo(mult)
    coll = Collection(n, N, kind, values, lambda s, x: mult(s, x, (unit_elem,) * s.target.k))
    return NOperadAlg(coll, unit_elem, mult, name)


# -- standard examples ----------------------------------------------------------------


def ass(n, N=DEFAULT_ARITY, kind="normal"):
    values = {T: ["*"] for T in ordinals_in(n, N, kind)}
    return make_operad(n, N, kind, values, "*", lambda s, x, ys: "*", name=f"Ass_{n}")


def sym_com(N=DEFAULT_ARITY, kind="normal"):
    values = {k: ["*"] for k in arity_range(N, kind)}
    return SymOperad(N, kind, values, "*", lambda f, x, ys: "*", name="Com")


def _fibers(f):
    fib = [[] for _ in range(f.target)]
    for t, i in enumerate(f.fn):
        fib[i].append(t)
    return fib


def sym_ass(N=DEFAULT_ARITY, kind="normal"):
    """Linear orders on k, written as sequences; grafting concatenates blocks."""
    values = {k: list(itertools.permutations(range(k))) for k in arity_range(N, kind)}

    def mult(f, x, ys):
        fib = _fibers(f)
        return tuple(fib[i][t] for i in x for t in ys[i])

    return SymOperad(N, kind, values, (0,), mult, name="Ass")


def sym_perm(N=DEFAULT_ARITY, kind="normal"):
    """A marked input: m_f(i; y) marks the y_i-th element of the fiber over i."""
    values = {k: list(range(k)) for k in arity_range(N, kind) if k > 0}

    def mult(f, x, ys):
        return _fibers(f)[x][ys[x]]

    return SymOperad(N, kind, values, 0, mult, name="Perm")


def sym_product(B1: SymOperad, B2: SymOperad):
    values = {k: [(a, b) for a in B1.value(k) for b in B2.value(k)] for k in B1.values}

    def mult(f, x, ys):
        return (B1.mult(f, x[0], tuple(y[0] for y in ys)), B2.mult(f, x[1], tuple(y[1] for y in ys)))

    return SymOperad(B1.N, B1.kind, values, (B1.unit, B2.unit), mult, name=f"{B1.name}x{B2.name}")


def product(A1: NOperadAlg, A2: NOperadAlg):
    values = {T: [(a, b) for a in A1.value(T) for b in A2.value(T)] for T in A1.carrier.values}

    def mult(s, x, ys):
        return (A1.mult(s, x[0], tuple(y[0] for y in ys)), A2.mult(s, x[1], tuple(y[1] for y in ys)))

    return make_operad(A1.n, A1.N, A1.kind, values, (A1.unit, A2.unit), mult, name=f"{A1.name}x{A2.name}")


def desymmetrise(B: SymOperad, n):
    values = {T: list(B.value(T.k)) for T in ordinals_in(n, B.N, B.kind)}

    def mult(s, x, ys):
        return B.mult(FinMap(s.source.k, s.target.k, s.fn), x, ys)

    return make_operad(n, B.N, B.kind, values, B.unit, mult, name=f"des({B.name})")


def suspend_restrict(A: NOperadAlg, p):
    """Restrict a depth n+1 operad along the p-th suspension to depth n."""
    n = A.n - 1
    if n < 1:
        raise ValueError("need a depth of at least 2")
    values = {T: list(A.value(suspend(T, p))) for T in ordinals_in(n, A.N, A.kind)}

    def mult(s, x, ys):
        return A.mult(suspend_map(s, p), x, ys)

    return make_operad(n, A.N, A.kind, values, A.unit, mult, name=f"s{p}*{A.name}")


# -- materialised tables and JSON ---------------------------------------------------------


def ordinal_key(T: NOrdinal):
    from .ordinals import format_ordinal

    return format_ordinal(T)


def map_key(s: OrdinalMap):
    return f"{ordinal_key(s.source)}->{ordinal_key(s.target)}:{','.join(str(x + 1) for x in s.fn)}"


def to_dict(A: NOperadAlg):
    """Operad file: values by ordinal literal and the full multiplication table."""
    shapes = OrdinalShapes(A.n, A.N, A.kind)
    objs = shapes.objects()
    table = []
    for T in objs:
        for S in objs:
            for s in shapes.maps(T, S):
                fibs = [fiber(s, j) for j in range(S.k)]
                for x in A.value(S):
                    for ys in itertools.product(*[A.value(F) for F in fibs]):
                        table.append([map_key(s), _enc(x), [_enc(y) for y in ys], _enc(A.mult(s, x, ys))])
    return {
        "format": "noperads.operad",
        "version": 1,
        "name": A.name,
        "n": A.n,
        "N": A.N,
        "kind": A.kind,
        "values": {ordinal_key(T): [_enc(x) for x in A.value(T)] for T in objs},
        "unit": _enc(A.unit),
        "mult": table,
    }


def _enc(x):
    if isinstance(x, tuple):
        return {"t": [_enc(y) for y in x]}
    if isinstance(x, (NPlanarTree, NOrdinal)):
        return {"s": str(x)}
    return x


def _dec(x):
    if isinstance(x, dict) and "t" in x:
        return tuple(_dec(y) for y in x["t"])
    if isinstance(x, dict) and "s" in x:
        return x["s"]
    if isinstance(x, list):
        return tuple(_dec(y) for y in x)
    return x


def from_dict(d):
    from .ordinals import parse_ordinal

    n, N, kind = d["n"], d["N"], d["kind"]
    values = {parse_ordinal(k): [_dec(x) for x in v] for k, v in d["values"].items()}
    table = {}
    for key, x, ys, r in d["mult"]:
        table[(key, _dec(x), tuple(_dec(y) for y in ys))] = _dec(r)

    def mult(s, x, ys):
        key = (map_key(s), x, tuple(ys))
        if key not in table:
            raise AxiomFailure("multiplication table has no entry", key)
        return table[key]

    for T in ordinals_in(n, N, kind):
        values.setdefault(T, [])
    return make_operad(n, N, kind, values, _dec(d["unit"]), mult, name=d.get("name", ""))


def redirect(A: NOperadAlg, sigma, x, ys, new):
    """Copy of A with a single multiplication entry changed (for negative tests)."""
    base = A.mult

    def mult(s, x2, ys2):
        if s == sigma and x2 == x and tuple(ys2) == tuple(ys):
            return new
        return base(s, x2, ys2)

    return NOperadAlg(A.carrier, A.unit, mult, name=f"{A.name}*")


# -- free operads ------------------------------------------------------------------------------


def representable(n, N, T0: NOrdinal, kind="normal"):
    """y(T0): value at T is the set of quasibijections T -> T0, acting by precomposition."""
    values = {T: [q.fn for q in quasibijections(T, T0)] for T in ordinals_in(n, N, kind)}
    if kind == "normal":
        values[unit(n)] = []

    def act(s, x):
        return tuple(x[i] for i in s.fn)

    return Collection(n, N, kind, values, act)


def terminal_at(n, N, sizes, kind="normal"):
    values = {T: (["*"] if T.k in sizes else []) for T in ordinals_in(n, N, kind)}
    return Collection(n, N, kind, values, lambda s, x: x)


def coproduct(collections):
    first = collections[0]
    values = {}
    for T in ordinals_in(first.n, first.N, first.kind):
        values[T] = [(c, x) for c, X in enumerate(collections) for x in X.value(T)]

    def act(s, x):
        return (x[0], collections[x[0]].act(s, x[1]))

    return Collection(first.n, first.N, first.kind, values, act)


def empty_collection(n, N, kind="normal"):
    return Collection(n, N, kind, {T: [] for T in ordinals_in(n, N, kind)}, lambda s, x: x)


def _tag(node, counter, prefix):
    if isinstance(node, Leaf):
        return node
    idx = counter[0]
    counter[0] += 1
    return Vertex(node.deco, tuple(_tag(c, counter, prefix) for c in node.children), node.colour, tag=(prefix, idx))


def _preorder_tags(node):
    if isinstance(node, Vertex):
        yield node.tag
        for c in node.children:
            yield from _preorder_tags(c)


def _strip(node):
    if isinstance(node, Leaf):
        return node
    return Vertex(node.deco, tuple(_strip(c) for c in node.children), node.colour)


def free_operad(X: Collection, max_elements=10**6):
    """Free n-operad on a collection whose values live in sizes >= 2.

    Elements are classes of labelled trees (tree, (x_v)) under the relation
    generated by moving a quasibijection between a vertex decoration and
    its label.  Each class is represented by its first member in the
    deterministic enumeration order.
    """
    n, N, kind = X.n, X.N, X.kind
    low = [T for T in X.values if T.k < 2 and X.value(T)]
    if low:
        raise TruncationRequired("free operad on unary or nullary generators is infinite", [str(T) for T in low])
    members = {}
    classes = {}
    for S in ordinals_in(n, N, kind):
        elems = []
        if S.k == 1:
            elems.append((unit_tree(n), ()))
        else:
            for v in range(1, S.k):
                for prof in _profiles(n, S.k, v, N):
                    if any(not X.value(T) for T in prof):
                        continue
                    for t in enumerate_trees(n, prof, S, "normal"):
                        for xs in itertools.product(*[X.value(T) for T in prof]):
                            elems.append((t, xs))
        if len(elems) > max_elements:
            raise SizeBudgetExceeded("free operad value too large", (str(S), len(elems)))
        pos = {e: i for i, e in enumerate(elems)}
        uf = UnionFind(len(elems))
        for i, (t, xs) in enumerate(elems):
            for v, T1 in enumerate(t.profile()):
                for T2 in enumerate_ordinals(n, T1.k):
                    for q in quasibijections(T1, T2):
                        inv = [0] * T1.k
                        for a, b in enumerate(q.fn):
                            inv[b] = a
                        c = corolla(T2, inv, out=T1, kind=t.kind)
                        inners = [None] * len(xs)
                        inners[v] = c
                        t2, prov = substitute_all(t, inners)
                        for x in X.value(T2):
                            new = dict(enumerate(xs))
                            new[v] = x
                            xs2 = tuple(new[ov] for ov, _ in prov)
                            xs1 = xs[:v] + (X.act(q, x),) + xs[v + 1 :]
                            uf.union(pos[(t2, xs2)], pos[(t, xs1)])
        cls = uf.classes()
        members[S] = elems
        classes[S] = (pos, uf, cls)
    values = {S: [members[S][r] for r in sorted(classes[S][2])] for S in members}

    def canon(S, e):
        pos, uf, cls = classes[S]
        return members[S][uf.find(pos[e])]

    def mult(s, x, ys):
        t, xs = x
        T = s.source
        parts, relabel = [], []
        for j in range(s.target.k):
            elems = fiber_elements(s, j)
            y = ys[j]
            parts.append(None if y[0].is_unit() else y[0])
            relabel.append(elems)
        outer_root = _tag(t.root, [0], "a")
        part_roots = [None if p is None else _tag(p.root, [0], ("b", j)) for j, p in enumerate(parts)]

        def walk(node):
            if isinstance(node, Leaf):
                j = node.label
                if part_roots[j] is None:
                    return Leaf(relabel[j][0])
                return _relabel_tagged(part_roots[j], relabel[j])
            return Vertex(node.deco, tuple(walk(c) for c in node.children), node.colour, tag=node.tag)

        root = walk(outer_root)
        tree = unit_tree(n) if isinstance(root, Leaf) else NPlanarTree(_strip(root), T, "normal")
        labels = []
        for tg in _preorder_tags(root):
            if tg[0] == "a":
                labels.append(xs[tg[1]])
            else:
                labels.append(ys[tg[0][1]][1][tg[1]])
        return canon(T, (tree, tuple(labels)))

    unit_elem = (unit_tree(n), ())
    op = make_operad(n, N, kind, values, unit_elem, mult, name="free")
    op.generators = X
    return op


def _relabel_tagged(node, f):
    if isinstance(node, Leaf):
        return Leaf(f[node.label])
    return Vertex(node.deco, tuple(_relabel_tagged(c, f) for c in node.children), node.colour, tag=node.tag)


def _profiles(n, leaves, v, N):
    """Profiles of v vertices, arities 2..N, producing the given number of leaves."""
    for ks in itertools.product(range(2, N + 1), repeat=v):
        if sum(ks) - v + 1 != leaves:
            continue
        yield from itertools.product(*[enumerate_ordinals(n, k) for k in ks])


# -- symmetrisation ---------------------------------------------------------------------------------


@dataclass
class SymCollection:
    """values[k] lists class representatives (ordinal, permutation, element);
    action[k][g] maps class index to class index for the right action of g."""

    N: int
    values: dict
    action: dict
    lookup: Callable = None  # (T, perm, x) -> class index in values[k]

    def size(self, k):
        return len(self.values.get(k, []))


def _inverse(p):
    inv = [0] * len(p)
    for a, b in enumerate(p):
        inv[b] = a
    return tuple(inv)


def _compose_perm(g, f):
    return tuple(g[x] for x in f)


def symmetrise_collection(A: Collection):
    """Colimit over J_n(k)^op of (T, pi) -> A(T), arity by arity."""
    values, action, finders = {}, {}, {}
    for k in arity_range(A.N, A.kind):
        J = milgram_poset(A.n, k)
        Q = quasibijection_category(A.n, k)
        Sk = symmetric_group_category(k)
        objs = [(Q.objects[a], underlying_perm(Sk, f)) for a, f in J.objects]
        vals = [A.value(T) for T, p in objs]
        Jop = J.op()

        def act(m, i, J=J, Q=Q, vals=vals):
            # m: (T, pi) -> (T', pi') in J, labelled by a quasibijection T -> T'
            s = OrdinalMap(Q.objects[Q.src[J.labels[m]]], Q.objects[Q.tgt[J.labels[m]]], _qfn(Q, J.labels[m]))
            x = vals[J.tgt[m]][i]
            return A.index(s.source)[A.act(s, x)]

        X = SetPresheaf.from_function(Jop, vals, act)
        C = colim(X)
        opos = {o: i for i, o in enumerate(objs)}
        reps = [(objs[a][0], objs[a][1], vals[a][i]) for a, i in C.classes]
        values[k] = reps

        def find(T, p, x, C=C, opos=opos):
            a = opos[(T, tuple(p))]
            return C.cocone[a][A.index(T)[x]]

        finders[k] = find
        acts = {}
        for g in itertools.permutations(range(k)):
            ginv = _inverse(g)
            acts[g] = tuple(find(T, _compose_perm(ginv, p), x) for T, p, x in reps)
        action[k] = acts
    sc = SymCollection(A.N, values, action)
    sc.lookup = lambda T, p, x: finders[T.k](T, p, x)
    return sc


def _qfn(Q, m):
    lab = Q.labels[m]
    if isinstance(lab, tuple) and lab and lab[0] == "id":
        return tuple(range(Q.objects[Q.src[m]].k))
    return lab


def symmetrise_operad(A: NOperadAlg, check=True):
    """Symmetric operad on the symmetrisation of A.

    The carrier is recomputed here from the unit multiplications of A (not
    from the carrier action), and products are evaluated on representatives
    via lexicographic substitution; when ``check`` is set, every product is
    recomputed with each argument replaced by every other representative.
    """
    n, N, kind = A.n, A.N, A.kind
    perms = {k: list(itertools.permutations(range(k))) for k in arity_range(N, kind)}
    elems, find, reps = {}, {}, {}
    for k in arity_range(N, kind):
        objs = enumerate_ordinals(n, k)
        es = [(T, p, x) for T in objs for p in perms[k] for x in A.value(T)]
        pos = {e: i for i, e in enumerate(es)}
        uf = UnionFind(len(es))
        for T in objs:
            for T2 in objs:
                for q in quasibijections(T, T2):
                    for p2 in perms[k]:
                        p = _compose_perm(p2, q.fn)
                        for x2 in A.value(T2):
                            x = A.mult(q, x2, (A.unit,) * k)
                            uf.union(pos[(T, p, x)], pos[(T2, p2, x2)])
        cls = uf.classes()
        elems[k] = es
        reps[k] = [es[r] for r in sorted(cls)]
        members = {}
        for i, e in enumerate(es):
            members.setdefault(cls[uf.find(i)], []).append(e)
        find[k] = (pos, uf, cls, members)

    def klass(e):
        k = e[0].k
        pos, uf, cls, _ = find[k]
        return cls[uf.find(pos[e])]

    def raw_mult(f, c, cs):
        T0, pi, x = c
        parts = [None] * T0.k
        args = [None] * T0.k
        for s in range(T0.k):
            i = pi[s]
            parts[s] = cs[i][0]
            args[s] = cs[i][2]
        T, sigma, pairs = lex_substitute(T0, parts)
        y = A.mult(sigma, x, tuple(args))
        fib = _fibers(f)
        rho = tuple(fib[pi[s]][cs[pi[s]][1][t]] for s, t in pairs)
        return klass((T, rho, y))

    def mult(f, c, cs):
        k = f.target
        rc = reps[k][c]
        rcs = tuple(reps[len(_fibers(f)[i])][cs[i]] for i in range(k))
        r = raw_mult(f, rc, rcs)
        if check:
            _, _, _, mem = find[k]
            for alt in mem[c]:
                if raw_mult(f, alt, rcs) != r:
                    raise RepresentativeDependence("product depends on the outer representative", (f, rc, alt))
            for i in range(k):
                _, _, _, memi = find[len(_fibers(f)[i])]
                for alt in memi[cs[i]]:
                    args = rcs[:i] + (alt,) + rcs[i + 1 :]
                    if raw_mult(f, rc, args) != r:
                        raise RepresentativeDependence("product depends on an inner representative", (f, i, alt))
        return r

    values = {k: list(range(len(reps[k]))) for k in reps}
    unit_cls = klass((unit(n), (0,), A.unit)) if 1 in reps else None
    B = SymOperad(N, kind, values, unit_cls, _memo_sym(mult), name=f"sym({A.name})")
    B.representatives = reps
    B.klass = klass
    return B


def _memo_sym(fn):
    cache = {}

    def wrapped(f, x, ys):
        key = (f, x, ys)
        r = cache.get(key)
        if r is None:
            r = fn(f, x, ys)
            cache[key] = r
        return r

    return wrapped


@dataclass
class BeckChevalleyReport:
    name: str
    ok: bool
    sizes: dict
    failure: object = None


def beck_chevalley(A: NOperadAlg, check_axioms_too=False):
    """Compare symmetrise_operad(A) with symmetrise_collection(carrier of A).

    Builds the map between the two class sets through shared triples
    (T, pi, x), checks it is a bijection in every arity, and checks that it
    intertwines the permutation actions.
    """
    B = symmetrise_operad(A)
    C = symmetrise_collection(A.carrier)
    sizes = {}
    for k in C.values:
        mapping = {}
        for T in enumerate_ordinals(A.n, k):
            for p in itertools.permutations(range(k)):
                for x in A.value(T):
                    b = B.klass((T, p, x))
                    c = C.lookup(T, p, x)
                    if mapping.setdefault(b, c) != c:
                        return BeckChevalleyReport(A.name, False, sizes, ("not a function", k, b))
        if len(mapping) != len(B.value(k)) or len(set(mapping.values())) != len(C.values[k]) or len(
            mapping
        ) != len(C.values[k]):
            return BeckChevalleyReport(A.name, False, sizes, ("not a bijection", k))
        for g, table in C.action[k].items():
            for b, c in mapping.items():
                if mapping[B.act(g, b)] != table[c]:
                    return BeckChevalleyReport(A.name, False, sizes, ("not equivariant", k, g, b))
        sizes[k] = len(mapping)
    if check_axioms_too:
        check_sym_operad(B)
    return BeckChevalleyReport(A.name, True, sizes)


# -- hom enumeration ----------------------------------------------------------------------------------


def _hom_count(shapes, objs_by_arity, value1, value2, unit1, unit2, mult1, mult2, budget=10**6):
    """Count operad maps by backtracking element by element.

    Every multiplication gives an equation between images; it is checked as
    soon as its last element is assigned, and when that element is the
    product itself its image is forced by the others."""
    elems = [(T, x) for m in sorted(objs_by_arity) for T in objs_by_arity[m] for x in value1(T)]
    pos = {e: i for i, e in enumerate(elems)}
    checks = [[] for _ in elems]
    forcing = [[] for _ in elems]
    work = 0
    for T in shapes.objects():
        for S in shapes.objects():
            for s in shapes.maps(T, S):
                fibs = [shapes.fiber(s, j) for j in range(shapes.target_size(S))]
                for x in value1(S):
                    for ys in itertools.product(*[value1(F) for F in fibs]):
                        work += 1
                        if work > budget:
                            raise SizeBudgetExceeded("hom enumeration over budget", work)
                        lhs = pos[(T, mult1(s, x, ys))]
                        rhs = [pos[(S, x)]] + [pos[(F, y)] for F, y in zip(fibs, ys)]
                        top = max(rhs)
                        if lhs > top:
                            forcing[lhs].append((s, rhs))
                        else:
                            checks[max(lhs, top)].append((lhs, s, rhs))
    U = shapes.unit_object()
    img = [None] * len(elems)

    def product_of(s, rhs):
        return mult2(s, img[rhs[0]], tuple(img[r] for r in rhs[1:]))

    def go(i):
        if i == len(elems):
            return 1
        T, x = elems[i]
        cands = list(value2(T))
        if T == U and x == unit1:
            cands = [unit2] if unit2 in cands else []
        for s, rhs in forcing[i]:
            v = product_of(s, rhs)
            cands = [c for c in cands if c == v]
        total = 0
        for v in cands:
            img[i] = v
            if all(img[lhs] == product_of(s, rhs) for lhs, s, rhs in checks[i]):
                total += go(i + 1)
        img[i] = None
        return total

    return go(0)


def hom_count_nop(A1: NOperadAlg, A2: NOperadAlg, budget=10**6):
    shapes = OrdinalShapes(A1.n, A1.N, A1.kind)
    by = {}
    for T in shapes.objects():
        by.setdefault(T.k, []).append(T)
    return _hom_count(shapes, by, A1.value, A2.value, A1.unit, A2.unit, A1.mult, A2.mult, budget)


def hom_count_sym(B1: SymOperad, B2: SymOperad, budget=10**6):
    shapes = FinSetShapes(B1.N, B1.kind)
    by = {k: [k] for k in shapes.objects()}
    return _hom_count(shapes, by, B1.value, B2.value, B1.unit, B2.unit, B1.mult, B2.mult, budget)


def hom_count_collections(X: Collection, A: Collection):
    """Maps of presheaves on Q_n^op, by backtracking per arity; each
    naturality square is checked once both of its elements are assigned."""
    total = 1
    for k in arity_range(X.N, X.kind):
        objs = enumerate_ordinals(X.n, k)
        elems = [(T, x) for T in objs for x in X.value(T)]
        pos = {e: i for i, e in enumerate(elems)}
        checks = [[] for _ in elems]
        for T in objs:
            for S in objs:
                for q in quasibijections(T, S):
                    for x in X.value(S):
                        a, b = pos[(S, x)], pos[(T, X.act(q, x))]
                        checks[max(a, b)].append((a, b, q))
        img = [None] * len(elems)

        def go(i):
            if i == len(elems):
                return 1
            count = 0
            for v in A.value(elems[i][0]):
                img[i] = v
                if all(img[b] == A.act(q, img[a]) for a, b, q in checks[i]):
                    count += go(i + 1)
            img[i] = None
            return count

        total *= go(0)
    return total


# -- generated instances --------------------------------------------------------------------------------


def random_collection(rng: random.Random, n, N, kind="normal"):
    """Coproduct of a few representables and terminal pieces in arities >= 2."""
    parts = []
    for k in range(2, N + 1):
        for T in enumerate_ordinals(n, k):
            if rng.random() < 0.25:
                parts.append(representable(n, N, T, kind))
        if rng.random() < 0.2:
            parts.append(terminal_at(n, N, {k}, kind))
    if not parts:
        parts.append(representable(n, N, enumerate_ordinals(n, 2)[rng.randrange(n)], kind))
    X = coproduct(parts)
    X.values[unit(n)] = []
    return X


def generated_operads(seed=0, n=2, N=3, count=20):
    """A deterministic family of normal n-operads used by the symmetrisation checks."""
    rng = random.Random(seed)
    out = [ass(n, N)]
    out.append(desymmetrise(sym_com(N), n))
    out.append(desymmetrise(sym_ass(N), n))
    out.append(desymmetrise(sym_perm(N), n))
    out.append(desymmetrise(sym_product(sym_ass(N), sym_perm(N)), n))
    out.append(product(ass(n, N), desymmetrise(sym_perm(N), n)))
    for p in range(n + 1):
        out.append(suspend_restrict(desymmetrise(sym_perm(N), n + 1), p))
    out.append(suspend_restrict(ass(n + 1, N), 0))
    a = enumerate_ordinals(n, 2)[0]
    b = enumerate_ordinals(n, 2)[-1]
    out.append(free_operad(representable(n, N, a)))
    out.append(free_operad(representable(n, N, b)))
    out.append(free_operad(terminal_at(n, N, {2})))
    i = 0
    while len(out) < count:
        X = random_collection(rng, n, N)
        F = free_operad(X)
        F.name = f"free(random {i})"
        out.append(F)
        i += 1
    for i, A in enumerate(out):
        if not A.name:
            A.name = f"op{i}"
    return out
