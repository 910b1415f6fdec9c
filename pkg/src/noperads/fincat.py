"""Finite categories, presheaves of finite sets, and the (co)limit kernel.

Everything here is exact and exhaustive.  A category is a pair of index
tables (objects, morphisms) plus a composition that is either an explicit
dict or a memoised callable; the callable form is what large generated
categories (classifiers, nerves of Q_n(k)) use.
"""
from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Sequence

from .errors import (
    BadIdentity,
    DanglingIndex,
    NonAssociative,
    NotAFunctor,
    SizeBudgetExceeded,
)

DEFAULT_CHECK_CAP = 10**4
JSON_FORMAT = "noperads.fincat"
JSON_VERSION = 1


class UnionFind:
    """Union-find whose class representative is always the least key."""

    def __init__(self, n=0):
        self.parent = list(range(n))

    def add(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if rx < ry:
            self.parent[ry] = rx
            return rx
        self.parent[rx] = ry
        return ry

    def classes(self):
        """Map each root (least member) to a dense class index, in root order."""
        roots = sorted({self.find(i) for i in range(len(self.parent))})
        return {r: i for i, r in enumerate(roots)}


class FinCategory:
    """A finite category given by index tables.

    ``compose`` is either a dict keyed by ``(g, f)`` (meaning g after f) or a
    callable ``compose(g, f) -> index``.  Identities are short-circuited, so
    the table only needs non-identity pairs.
    """

    def __init__(self, objects, src, tgt, labels, identities, compose, name=""):
        self.objects = list(objects)
        self.src = list(src)
        self.tgt = list(tgt)
        self.labels = list(labels)
        self.identities = list(identities)
        self.name = name
        self._is_id = [False] * len(self.src)
        for i in self.identities:
            if 0 <= i < len(self._is_id):
                self._is_id[i] = True
        if callable(compose):
            self._compose_fn = compose
            self._table = {}
        else:
            self._compose_fn = None
            self._table = dict(compose)
        self._hom = None
        self._out = None
        self._in = None

    # -- sizes and indices -------------------------------------------------
    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.src)

    def is_identity(self, m):
        return self._is_id[m]

    def _index(self):
        hom = defaultdict(list)
        out = [[] for _ in self.objects]
        inc = [[] for _ in self.objects]
        for m, (s, t) in enumerate(zip(self.src, self.tgt)):
            hom[(s, t)].append(m)
            out[s].append(m)
            inc[t].append(m)
        self._hom, self._out, self._in = dict(hom), out, inc

    def hom(self, a, b):
        if self._hom is None:
            self._index()
        return self._hom.get((a, b), [])

    def out_of(self, a):
        if self._out is None:
            self._index()
        return self._out[a]

    def into(self, b):
        if self._in is None:
            self._index()
        return self._in[b]

    def non_identity(self):
        return [m for m in range(self.n_morphisms) if not self._is_id[m]]

    # -- composition -------------------------------------------------------
    def compose(self, g, f):
        """g after f.  Raises DanglingIndex when the pair is not composable."""
        if self.tgt[f] != self.src[g]:
            raise DanglingIndex(f"morphisms {g} and {f} are not composable", (g, f))
        if self._is_id[f]:
            return g
        if self._is_id[g]:
            return f
        key = (g, f)
        h = self._table.get(key)
        if h is None:
            if self._compose_fn is None:
                raise DanglingIndex(f"no composite recorded for {key}", key)
            h = self._compose_fn(g, f)
            self._table[key] = h
        return h

    def compose_path(self, *ms):
        """Compose a path given in diagrammatic order (first morphism first)."""
        h = ms[0]
        for m in ms[1:]:
            h = self.compose(m, h)
        return h

    # -- derived categories ------------------------------------------------
    def op(self):
        return FinCategory(
            self.objects,
            self.tgt,
            self.src,
            self.labels,
            self.identities,
            lambda g, f: self.compose(f, g),
            name=f"{self.name}^op" if self.name else "",
        )

    def full_subcategory(self, objs):
        """Full subcategory on ``objs`` together with its inclusion functor."""
        objs = list(objs)
        pos = {a: i for i, a in enumerate(objs)}
        mors = [m for m in range(self.n_morphisms) if self.src[m] in pos and self.tgt[m] in pos]
        mpos = {m: i for i, m in enumerate(mors)}
        sub = FinCategory(
            [self.objects[a] for a in objs],
            [pos[self.src[m]] for m in mors],
            [pos[self.tgt[m]] for m in mors],
            [self.labels[m] for m in mors],
            [mpos[self.identities[a]] for a in objs],
            lambda g, f: mpos[self.compose(mors[g], mors[f])],
            name=f"{self.name}|sub" if self.name else "",
        )
        return sub, FinFunctor(sub, self, objs, mors)

    def subcategory(self, objs, mors):
        """Subcategory on ``objs`` with the given morphisms (closed under composition,
        identities added) together with its inclusion functor."""
        objs = list(objs)
        pos = {a: i for i, a in enumerate(objs)}
        mors = sorted(set(mors) | {self.identities[a] for a in objs})
        mpos = {m: i for i, m in enumerate(mors)}
        for m in mors:
            if self.src[m] not in pos or self.tgt[m] not in pos:
                raise DanglingIndex(f"morphism {m} leaves the object set", m)

        def comp(g, f):
            h = self.compose(mors[g], mors[f])
            if h not in mpos:
                raise DanglingIndex(f"composite of {(mors[g], mors[f])} is not in the subcategory", (g, f))
            return mpos[h]

        sub = FinCategory(
            [self.objects[a] for a in objs],
            [pos[self.src[m]] for m in mors],
            [pos[self.tgt[m]] for m in mors],
            [self.labels[m] for m in mors],
            [mpos[self.identities[a]] for a in objs],
            comp,
            name=f"{self.name}|sub" if self.name else "",
        )
        return sub, FinFunctor(sub, self, objs, mors)

    def __repr__(self):
        return f"FinCategory({self.name!r}, objects={self.n_objects}, morphisms={self.n_morphisms})"

    # -- construction helpers ----------------------------------------------
    @classmethod
    def from_labelled(cls, objects, morphisms, compose_label, name=""):
        """Build from ``morphisms = [(src, tgt, label), ...]``.

        The identity of object a must carry the label ``("id", a)``.
        ``compose_label(g_entry, f_entry)`` receives two (src, tgt, label)
        triples and returns the label of the composite, which is then looked
        up by (src, tgt, label).
        """
        index = {}
        src, tgt, labels = [], [], []
        for s, t, lab in morphisms:
            key = (s, t, lab)
            if key in index:
                raise DanglingIndex(f"duplicate morphism {key}", key)
            index[key] = len(src)
            src.append(s)
            tgt.append(t)
            labels.append(lab)
        ids = []
        for a in range(len(objects)):
            key = (a, a, ("id", a))
            if key not in index:
                raise BadIdentity(f"object {a} has no identity", a)
            ids.append(index[key])

        def comp(g, f):
            lab = compose_label((src[g], tgt[g], labels[g]), (src[f], tgt[f], labels[f]))
            key = (src[f], tgt[g], lab)
            if key not in index:
                raise DanglingIndex(f"composite {key} is not a listed morphism", (g, f))
            return index[key]

        cat = cls(objects, src, tgt, labels, ids, comp, name=name)
        cat.label_index = index
        return cat


def terminal_category():
    return FinCategory(["*"], [0], [0], [("id", 0)], [0], {}, name="1")


def discrete_category(objects):
    n = len(objects)
    return FinCategory(objects, range(n), range(n), [("id", a) for a in range(n)], range(n), {}, name="discrete")


def arrow_category():
    return FinCategory(["a", "b"], [0, 1, 0], [0, 1, 1], [("id", 0), ("id", 1), "f"], [0, 1], {}, name="arrow")


def product_category(cats):
    """Cartesian product of a sequence of categories (the empty product is 1)."""
    cats = list(cats)
    if not cats:
        return terminal_category()
    import itertools

    objs = list(itertools.product(*[range(c.n_objects) for c in cats]))
    mors = list(itertools.product(*[range(c.n_morphisms) for c in cats]))
    mpos = {m: i for i, m in enumerate(mors)}
    opos = {o: i for i, o in enumerate(objs)}
    src = [opos[tuple(c.src[x] for c, x in zip(cats, m))] for m in mors]
    tgt = [opos[tuple(c.tgt[x] for c, x in zip(cats, m))] for m in mors]
    ids = [mpos[tuple(c.identities[x] for c, x in zip(cats, o))] for o in objs]

    def comp(g, f):
        return mpos[tuple(c.compose(x, y) for c, x, y in zip(cats, mors[g], mors[f]))]

    cat = FinCategory(objs, src, tgt, mors, ids, comp, name="product")
    cat.object_index = opos
    cat.morphism_index = mpos
    return cat


# -- validation -------------------------------------------------------------


def check_category(raw, cap=DEFAULT_CHECK_CAP):
    """Validate a category exhaustively and return it.

    ``raw`` is either a FinCategory or a dict in the JSON layout.  The first
    violated axiom is raised with the offending indices as witness.
    """
    cat = from_dict(raw) if isinstance(raw, dict) else raw
    n_obj, n_mor = cat.n_objects, cat.n_morphisms
    if n_mor > cap:
        raise SizeBudgetExceeded(f"{n_mor} morphisms exceed the check cap {cap}", n_mor)
    for m in range(n_mor):
        if not (0 <= cat.src[m] < n_obj and 0 <= cat.tgt[m] < n_obj):
            raise DanglingIndex(f"morphism {m} has an endpoint outside the object table", m)
    if len(cat.identities) != n_obj:
        raise DanglingIndex("identity table length differs from object count", len(cat.identities))
    for a, i in enumerate(cat.identities):
        if not (0 <= i < n_mor) or cat.src[i] != a or cat.tgt[i] != a:
            raise BadIdentity(f"identity of object {a} is not an endomorphism of it", a)
    composite = {}
    for f in range(n_mor):
        for g in cat.out_of(cat.tgt[f]):
            h = cat.compose(g, f)
            if not (0 <= h < n_mor) or cat.src[h] != cat.src[f] or cat.tgt[h] != cat.tgt[g]:
                raise DanglingIndex(f"composite of {(g, f)} has wrong endpoints", (g, f))
            composite[(g, f)] = h
    for f in range(n_mor):
        a, b = cat.src[f], cat.tgt[f]
        if composite[(cat.identities[b], f)] != f or composite[(f, cat.identities[a])] != f:
            raise BadIdentity(f"identity law fails at morphism {f}", (a, b, f))
    for f in range(n_mor):
        for g in cat.out_of(cat.tgt[f]):
            gf = composite[(g, f)]
            for h in cat.out_of(cat.tgt[g]):
                if composite[(h, gf)] != composite[(composite[(h, g)], f)]:
                    raise NonAssociative(f"associativity fails on {(h, g, f)}", (h, g, f))
    return cat


@dataclass
class FinFunctor:
    source: FinCategory
    target: FinCategory
    obj_map: Sequence[int]
    mor_map: Sequence[int]

    def __call__(self, m):
        return self.mor_map[m]

    def on_object(self, a):
        return self.obj_map[a]


def identity_functor(cat):
    return FinFunctor(cat, cat, list(range(cat.n_objects)), list(range(cat.n_morphisms)))


def op_functor(F: FinFunctor):
    """The same functor between opposite categories."""
    return FinFunctor(F.source.op(), F.target.op(), F.obj_map, F.mor_map)


def check_functor(F: FinFunctor):
    S, T = F.source, F.target
    if len(F.obj_map) != S.n_objects or len(F.mor_map) != S.n_morphisms:
        raise NotAFunctor("map tables have the wrong length")
    for m in range(S.n_morphisms):
        fm = F.mor_map[m]
        if T.src[fm] != F.obj_map[S.src[m]] or T.tgt[fm] != F.obj_map[S.tgt[m]]:
            raise NotAFunctor(f"morphism {m} is sent to a morphism with wrong endpoints", m)
    for a in range(S.n_objects):
        if F.mor_map[S.identities[a]] != T.identities[F.obj_map[a]]:
            raise NotAFunctor(f"identity of {a} not preserved", a)
    for f in range(S.n_morphisms):
        for g in S.out_of(S.tgt[f]):
            if F.mor_map[S.compose(g, f)] != T.compose(F.mor_map[g], F.mor_map[f]):
                raise NotAFunctor(f"composite {(g, f)} not preserved", (g, f))
    return F


# -- presheaves and bimodules -------------------------------------------------


@dataclass
class SetPresheaf:
    """Covariant functor base -> FinSet.

    ``values[a]`` lists the elements of X(a); ``action[m]`` is a tuple sending
    an element index of X(src m) to an element index of X(tgt m).
    Contravariant presheaves are covariant ones on ``base.op()``.
    """

    base: FinCategory
    values: list
    action: list

    @classmethod
    def from_function(cls, base, values, act):
        """``act(m, i)`` returns the index of X(m)(values[src m][i])."""
        action = [tuple(act(m, i) for i in range(len(values[base.src[m]]))) for m in range(base.n_morphisms)]
        return cls(base, [list(v) for v in values], action)

    def size(self):
        return sum(len(v) for v in self.values)

    def pullback(self, F: FinFunctor):
        """Restriction F^* X along a functor into the base."""
        return SetPresheaf(
            F.source,
            [self.values[F.obj_map[a]] for a in range(F.source.n_objects)],
            [self.action[F.mor_map[m]] for m in range(F.source.n_morphisms)],
        )


def constant_presheaf(base, value=("*",)):
    vals = [list(value) for _ in range(base.n_objects)]
    return SetPresheaf(base, vals, [tuple(range(len(value))) for _ in range(base.n_morphisms)])


def check_presheaf(X: SetPresheaf):
    C = X.base
    for m in range(C.n_morphisms):
        act = X.action[m]
        if len(act) != len(X.values[C.src[m]]) or any(not 0 <= y < len(X.values[C.tgt[m]]) for y in act):
            raise NotAFunctor(f"action of morphism {m} has the wrong shape", m)
    for a in range(C.n_objects):
        act = X.action[C.identities[a]]
        if any(act[i] != i for i in range(len(act))):
            raise NotAFunctor(f"identity of {a} acts non-trivially", a)
    for f in range(C.n_morphisms):
        for g in C.out_of(C.tgt[f]):
            gf = X.action[C.compose(g, f)]
            af, ag = X.action[f], X.action[g]
            if any(gf[i] != ag[af[i]] for i in range(len(af))):
                raise NotAFunctor(f"composite {(g, f)} not preserved", (g, f))
    return X


@dataclass
class Bimodule:
    """F: B^op x A -> Set.

    ``left(phi, a, i)``: for phi: b -> b' in B, sends element i of F(b', a)
    to an element index of F(b, a).  ``right(psi, b, i)``: for psi: a -> a'
    in A, sends element i of F(b, a) to an element index of F(b, a').
    """

    left_cat: FinCategory
    right_cat: FinCategory
    values: dict
    left: Callable
    right: Callable

    def value(self, b, a):
        return self.values.get((b, a), [])


def hom_bimodule(u: FinFunctor):
    """F(b, a) = Hom_B(b, u a) for u: A -> B."""
    B, A = u.target, u.source
    values = {}
    pos = {}
    for b in range(B.n_objects):
        for a in range(A.n_objects):
            ms = B.hom(b, u.obj_map[a])
            values[(b, a)] = list(ms)
            pos[(b, a)] = {m: i for i, m in enumerate(ms)}

    def left(phi, a, i):
        b = B.src[phi]
        m = values[(B.tgt[phi], a)][i]
        return pos[(b, a)][B.compose(m, phi)]

    def right(psi, b, i):
        m = values[(b, A.src[psi])][i]
        return pos[(b, A.tgt[psi])][B.compose(u.mor_map[psi], m)]

    return Bimodule(B, A, values, left, right)


def check_bimodule(F: Bimodule):
    B, A = F.left_cat, F.right_cat
    for (b, a), vals in F.values.items():
        for i in range(len(vals)):
            for psi in A.out_of(a):
                for phi in B.into(b):
                    # phi: b0 -> b; both routes land in F(b0, a')
                    r1 = F.left(phi, A.tgt[psi], F.right(psi, b, i))
                    r2 = F.right(psi, B.src[phi], F.left(phi, a, i))
                    if r1 != r2:
                        raise NotAFunctor(f"actions do not commute at {(b, a, i, phi, psi)}", (b, a, i, phi, psi))
    return F


@dataclass
class Grothendieck:
    category: FinCategory
    p: FinFunctor  # to B
    pi: FinFunctor  # to A


def grothendieck(F: Bimodule, budget=2 * 10**6):
    """Two-sided Grothendieck construction of a bimodule.

    Objects are (b, a, i) with i an element of F(b, a); a morphism
    (b, a, i) -> (b', a', j) is a pair (phi: b -> b', psi: a -> a') with
    right(psi)(i) = left(phi)(j) in F(b, a').
    """
    B, A = F.left_cat, F.right_cat
    objects = []
    opos = {}
    for b in range(B.n_objects):
        for a in range(A.n_objects):
            for i in range(len(F.value(b, a))):
                opos[(b, a, i)] = len(objects)
                objects.append((b, a, i))
    # preimage tables for the left action: (phi, a') -> {y: [j, ...]}
    pre_cache = {}

    def preimage(phi, a2):
        key = (phi, a2)
        if key not in pre_cache:
            d = defaultdict(list)
            for j in range(len(F.value(B.tgt[phi], a2))):
                d[F.left(phi, a2, j)].append(j)
            pre_cache[key] = d
        return pre_cache[key]

    src, tgt, labels = [], [], []
    mpos = {}
    for o, (b, a, i) in enumerate(objects):
        for psi in A.out_of(a):
            a2 = A.tgt[psi]
            y = F.right(psi, b, i)
            for phi in B.out_of(b):
                b2 = B.tgt[phi]
                for j in preimage(phi, a2).get(y, ()):
                    t = opos[(b2, a2, j)]
                    mpos[(o, t, phi, psi)] = len(src)
                    src.append(o)
                    tgt.append(t)
                    labels.append((phi, psi))
                    if len(src) > budget:
                        raise SizeBudgetExceeded("Grothendieck construction too large", len(src))
    ids = [mpos[(o, o, B.identities[b], A.identities[a])] for o, (b, a, i) in enumerate(objects)]

    def comp(g, f):
        phi = B.compose(labels[g][0], labels[f][0])
        psi = A.compose(labels[g][1], labels[f][1])
        return mpos[(src[f], tgt[g], phi, psi)]

    cat = FinCategory(objects, src, tgt, labels, ids, comp, name="grothendieck")
    cat.object_index = opos
    p = FinFunctor(cat, B, [b for b, a, i in objects], [lab[0] for lab in labels])
    pi = FinFunctor(cat, A, [a for b, a, i in objects], [lab[1] for lab in labels])
    return Grothendieck(cat, p, pi)


# -- colimits, limits, Kan extensions ------------------------------------------


@dataclass
class Colimit:
    """Quotient set with cocone.  ``classes[c]`` is the least (object, element)
    pair of class c; ``cocone[a][i]`` is the class of element i of X(a)."""

    classes: list
    cocone: list

    def __len__(self):
        return len(self.classes)


def _element_offsets(values):
    offsets = []
    total = 0
    for v in values:
        offsets.append(total)
        total += len(v)
    return offsets, total


def colim(X: SetPresheaf) -> Colimit:
    C = X.base
    offsets, total = _element_offsets(X.values)
    uf = UnionFind(total)
    for m in range(C.n_morphisms):
        if C.is_identity(m):
            continue
        so, to = offsets[C.src[m]], offsets[C.tgt[m]]
        for i, j in enumerate(X.action[m]):
            uf.union(so + i, to + j)
    return _colimit_from_uf(X.values, offsets, uf)


def _colimit_from_uf(values, offsets, uf):
    cls = uf.classes()
    owner = []
    for a, v in enumerate(values):
        owner.extend((a, i) for i in range(len(v)))
    classes = [owner[r] for r in sorted(cls)]
    cocone = [[cls[uf.find(offsets[a] + i)] for i in range(len(v))] for a, v in enumerate(values)]
    return Colimit(classes, cocone)


def lim(X: SetPresheaf, budget=10**6):
    """Compatible families, returned as tuples of element indices per object."""
    C = X.base
    n = C.n_objects
    constraints = defaultdict(list)  # later object -> [(earlier object, morphism, direction)]
    for m in range(C.n_morphisms):
        if C.is_identity(m):
            continue
        s, t = C.src[m], C.tgt[m]
        constraints[max(s, t)].append(m)
    result = []
    family = [None] * n

    def ok(a):
        for m in constraints[a]:
            if X.action[m][family[C.src[m]]] != family[C.tgt[m]]:
                return False
        return True

    def extend(a):
        if a == n:
            result.append(tuple(family))
            if len(result) > budget:
                raise SizeBudgetExceeded("limit too large", len(result))
            return
        for i in range(len(X.values[a])):
            family[a] = i
            if ok(a):
                extend(a + 1)
        family[a] = None

    extend(0)
    return result


def comma(F: FinFunctor, d: int):
    """Comma category F/d: objects (a, f: F a -> d); returns (category, projection)."""
    A, T = F.source, F.target
    objects = [(a, f) for a in range(A.n_objects) for f in T.hom(F.obj_map[a], d)]
    opos = {o: i for i, o in enumerate(objects)}
    src, tgt, labels, mpos = [], [], [], {}
    for t_idx, (a2, f2) in enumerate(objects):
        for g in A.into(a2):
            f = T.compose(f2, F.mor_map[g])
            s_idx = opos[(A.src[g], f)]
            mpos[(s_idx, t_idx, g)] = len(src)
            src.append(s_idx)
            tgt.append(t_idx)
            labels.append(g)
    ids = [mpos[(i, i, A.identities[a])] for i, (a, f) in enumerate(objects)]

    def comp(g, f):
        return mpos[(src[f], tgt[g], A.compose(labels[g], labels[f]))]

    cat = FinCategory(objects, src, tgt, labels, ids, comp, name="comma")
    cat.object_index = opos
    proj = FinFunctor(cat, A, [a for a, f in objects], list(labels))
    return cat, proj


def under(d: int, F: FinFunctor):
    """Comma category d/F: objects (a, f: d -> F a); returns (category, projection)."""
    A, T = F.source, F.target
    objects = [(a, f) for a in range(A.n_objects) for f in T.hom(d, F.obj_map[a])]
    opos = {o: i for i, o in enumerate(objects)}
    src, tgt, labels, mpos = [], [], [], {}
    for s_idx, (a, f) in enumerate(objects):
        for g in A.out_of(a):
            t_idx = opos[(A.tgt[g], T.compose(F.mor_map[g], f))]
            mpos[(s_idx, t_idx, g)] = len(src)
            src.append(s_idx)
            tgt.append(t_idx)
            labels.append(g)
    ids = [mpos[(i, i, A.identities[a])] for i, (a, f) in enumerate(objects)]

    def comp(g, f):
        return mpos[(src[f], tgt[g], A.compose(labels[g], labels[f]))]

    cat = FinCategory(objects, src, tgt, labels, ids, comp, name="under")
    cat.object_index = opos
    return cat, FinFunctor(cat, A, [a for a, f in objects], list(labels))


def left_kan(u: FinFunctor, X: SetPresheaf) -> SetPresheaf:
    """Pointwise left Kan extension u_! X.

    The value at b is the colimit of X over u/b, realised as classes of
    triples (a, f: u a -> b, x).  Element labels are the least triple of each
    class, so results are canonical.
    """
    A, B = u.source, u.target
    values, reps = [], []
    for b in range(B.n_objects):
        triples = []
        tpos = {}
        for a in range(A.n_objects):
            for f in B.hom(u.obj_map[a], b):
                for i in range(len(X.values[a])):
                    tpos[(a, f, i)] = len(triples)
                    triples.append((a, f, i))
        uf = UnionFind(len(triples))
        for a2 in range(A.n_objects):
            for f2 in B.hom(u.obj_map[a2], b):
                for g in A.into(a2):
                    if A.is_identity(g):
                        continue
                    a = A.src[g]
                    f = B.compose(f2, u.mor_map[g])
                    act = X.action[g]
                    for i in range(len(X.values[a])):
                        uf.union(tpos[(a, f, i)], tpos[(a2, f2, act[i])])
        cls = uf.classes()
        values.append([triples[r] for r in sorted(cls)])
        reps.append((tpos, uf, cls))

    def act(h, c):
        b, b2 = B.src[h], B.tgt[h]
        a, f, i = values[b][c]
        tpos2, uf2, cls2 = reps[b2]
        return cls2[uf2.find(tpos2[(a, B.compose(h, f), i)])]

    return SetPresheaf.from_function(B, values, act)


# -- connectivity and finality ------------------------------------------------


def components(n, edges):
    uf = UnionFind(n)
    for s, t in edges:
        uf.union(s, t)
    cls = uf.classes()
    return [cls[uf.find(i)] for i in range(n)], len(cls)


def connected_components(C: FinCategory):
    return components(C.n_objects, zip(C.src, C.tgt))


def is_connected(C: FinCategory):
    return C.n_objects > 0 and connected_components(C)[1] == 1


@dataclass
class FinalityCertificate:
    final: bool
    witnesses: dict = field(default_factory=dict)  # b -> a witness object (a, m) of b/u
    failure: Any = None  # (b, number of components, component sizes)

    def __bool__(self):
        return self.final


def under_components(u: FinFunctor, b: int):
    """Connected components of b/u without materialising the category.

    Returns (objects, component index per object, component count)."""
    A, B = u.source, u.target
    objects = []
    pos = {}
    for a in range(A.n_objects):
        for m in B.hom(b, u.obj_map[a]):
            pos[(a, m)] = len(objects)
            objects.append((a, m))
    uf = UnionFind(len(objects))
    for k, (a, m) in enumerate(objects):
        for g in A.out_of(a):
            if A.is_identity(g):
                continue
            uf.union(k, pos[(A.tgt[g], B.compose(u.mor_map[g], m))])
    cls = uf.classes()
    return objects, [cls[uf.find(k)] for k in range(len(objects))], len(cls)


def is_final(u: FinFunctor) -> FinalityCertificate:
    """u is final iff every b/u is nonempty and connected."""
    B = u.target
    cert = FinalityCertificate(True)
    for b in range(B.n_objects):
        objects, comp, count = under_components(u, b)
        if count != 1:
            sizes = [comp.count(c) for c in range(count)]
            return FinalityCertificate(False, cert.witnesses, (b, count, sizes))
        cert.witnesses[b] = objects[0]
    return cert


def _over_data(u: FinFunctor, b: int):
    A, B = u.source, u.target
    objects = [(a, f) for a in range(A.n_objects) for f in B.hom(u.obj_map[a], b)]
    pos = {o: i for i, o in enumerate(objects)}
    arrows = defaultdict(int)  # (s, t) -> number of morphisms in u/b
    for t_idx, (a2, f2) in enumerate(objects):
        for g in A.into(a2):
            s_idx = pos[(A.src[g], B.compose(f2, u.mor_map[g]))]
            arrows[(s_idx, t_idx)] += 1
    return objects, pos, arrows


def is_disconnected_functor(u: FinFunctor):
    """Every u/b has a terminal object in each connected component."""
    for b in range(u.target.n_objects):
        objects, pos, arrows = _over_data(u, b)
        comp, count = components(len(objects), arrows.keys())
        for c in range(count):
            members = [i for i in range(len(objects)) if comp[i] == c]
            if not any(all(arrows.get((s, t), 0) == 1 for s in members) for t in members):
                return False
    return True


def is_constantly_disconnected(u: FinFunctor):
    if not is_disconnected_functor(u):
        return False
    B = u.target
    data = {}
    for b in range(B.n_objects):
        objects, pos, arrows = _over_data(u, b)
        comp, count = components(len(objects), arrows.keys())
        data[b] = (objects, pos, comp, count)
    for h in range(B.n_morphisms):
        b, b2 = B.src[h], B.tgt[h]
        objects, pos, comp, count = data[b]
        objects2, pos2, comp2, count2 = data[b2]
        image = {}
        for k, (a, f) in enumerate(objects):
            image[comp[k]] = comp2[pos2[(a, B.compose(h, f))]]
        if count != count2 or len(set(image.values())) != count2:
            return False
    return True


# -- JSON ----------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    if isinstance(x, (list, dict, str, int, float, bool)) or x is None:
        return x
    return str(x)


def to_dict(C: FinCategory):
    table = [[None] * C.n_morphisms for _ in range(C.n_morphisms)]
    for f in range(C.n_morphisms):
        for g in C.out_of(C.tgt[f]):
            table[g][f] = C.compose(g, f)
    return {
        "format": JSON_FORMAT,
        "version": JSON_VERSION,
        "name": C.name,
        "objects": [_jsonable(o) for o in C.objects],
        "morphisms": [
            {"src": s, "tgt": t, "label": _jsonable(lab)} for s, t, lab in zip(C.src, C.tgt, C.labels)
        ],
        "compose": table,
        "identities": list(C.identities),
    }


def from_dict(d):
    if d.get("format", JSON_FORMAT) != JSON_FORMAT or d.get("version", JSON_VERSION) != JSON_VERSION:
        raise DanglingIndex("unsupported category document version", (d.get("format"), d.get("version")))
    mors = d["morphisms"]
    table = {}
    for g, row in enumerate(d["compose"]):
        for f, h in enumerate(row):
            if h is not None:
                table[(g, f)] = h
    n = len(mors)

    def comp(g, f):
        if (g, f) not in table:
            raise DanglingIndex(f"no composite recorded for {(g, f)}", (g, f))
        return table[(g, f)]

    cat = FinCategory(
        [_hashable(o) for o in d["objects"]],
        [m["src"] for m in mors],
        [m["tgt"] for m in mors],
        [_hashable(m.get("label")) for m in mors],
        d["identities"],
        comp,
        name=d.get("name", ""),
    )
    # identities are short-circuited by compose(); the explicit table still
    # has to agree with them, so expose it for check_category
    cat._raw_table = table
    if n and any(not isinstance(row, list) or len(row) != n for row in d["compose"]):
        raise DanglingIndex("compose table is not square in the morphism count")
    for (g, f), h in table.items():
        if cat.is_identity(f) and h != g or cat.is_identity(g) and h != f:
            raise BadIdentity(f"identity law fails in the table at {(g, f)}", (g, f))
    return cat


def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(y) for y in x)
    return x


def dumps(C: FinCategory):
    return json.dumps(to_dict(C), sort_keys=True)


def loads(text):
    return check_category(json.loads(text))


# -- concrete micro categories ---------------------------------------------------------


def concrete_category(sizes, generators, name="concrete", budget=10**4):
    """The category of finite sets range(sizes[a]) generated by the given
    functions (a, b, tuple) under composition.  Composition of functions is
    associative, so the result is always a valid category."""
    mors = {}
    order = []

    def add(a, b, fn):
        key = (a, b, tuple(fn))
        if key not in mors:
            if len(order) >= budget:
                raise SizeBudgetExceeded("concrete category too large", len(order))
            mors[key] = len(order)
            order.append(key)
            return True
        return False

    for a, s in enumerate(sizes):
        add(a, a, range(s))
    frontier = []
    for a, b, fn in generators:
        if len(fn) != sizes[a] or any(not 0 <= y < sizes[b] for y in fn):
            raise NotAFunctor("a generator is not a function between the given sets", (a, b))
        if add(a, b, fn):
            frontier.append(order[-1])
    gens = [(a, b, tuple(fn)) for a, b, fn in generators]
    # close under post-composition with generators; every composite is a word in them
    while frontier:
        nxt = []
        for a, b, fn in frontier:
            for c, d, g in gens:
                if c == b and add(a, d, tuple(g[x] for x in fn)):
                    nxt.append(order[-1])
        frontier = nxt
    ids = [mors[(a, a, tuple(range(s)))] for a, s in enumerate(sizes)]

    def comp(g, f):
        a, _, fn = order[f]
        _, d, gn = order[g]
        return mors[(a, d, tuple(gn[x] for x in fn))]

    cat = FinCategory(
        [f"S{a}" for a in range(len(sizes))],
        [k[0] for k in order],
        [k[1] for k in order],
        [k[2] for k in order],
        ids,
        comp,
        name=name,
    )
    cat.sizes = list(sizes)
    return cat


def random_concrete_category(rng, max_objects=6, max_size=2, max_generators=6):
    """A random concrete category with at most max_objects objects."""
    n = rng.randint(1, max_objects)
    sizes = [rng.randint(1, max_size) for _ in range(n)]
    gens = []
    for _ in range(rng.randint(0, max_generators)):
        a, b = rng.randrange(n), rng.randrange(n)
        gens.append((a, b, tuple(rng.randrange(sizes[b]) for _ in range(sizes[a]))))
    return concrete_category(sizes, gens, name=f"random({n})")


def tautological_presheaf(C: FinCategory):
    """For a concrete category: each object goes to its set, each morphism to its function."""
    return SetPresheaf(C, [list(range(s)) for s in C.sizes], [tuple(lab) for lab in C.labels])


def representable_presheaf(C: FinCategory, c):
    """C(c, -) with post-composition."""
    values = [list(C.hom(c, b)) for b in range(C.n_objects)]
    pos = [{m: i for i, m in enumerate(v)} for v in values]
    return SetPresheaf.from_function(C, values, lambda h, i: pos[C.tgt[h]][C.compose(h, values[C.src[h]][i])])


def presheaf_coproduct(Xs):
    """Objectwise disjoint union, elements tagged by summand."""
    C = Xs[0].base
    values = [[(j, x) for j, X in enumerate(Xs) for x in X.values[a]] for a in range(C.n_objects)]
    pos = [{v: i for i, v in enumerate(vals)} for vals in values]

    def act(m, i):
        j, x = values[C.src[m]][i]
        X = Xs[j]
        y = X.values[C.tgt[m]][X.action[m][X.values[C.src[m]].index(x)]]
        return pos[C.tgt[m]][(j, y)]

    return SetPresheaf.from_function(C, values, act)
