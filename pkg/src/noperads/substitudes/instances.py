"""Concrete substitudes: monoidal categories, n-operad trees, bare categories."""
from __future__ import annotations

from dataclasses import replace
from functools import lru_cache

from ..errors import NotStrictMonoidal, ProfileMismatch
from ..fincat import FinCategory, terminal_category
from ..optrees import MIN_CHILDREN, _enumerate_trees, corolla, substitute_all, unit_tree
from ..ordinals import enumerate_ordinals, quasibijections
from .base import Substitude


# -- P_C for a strict monoidal category ---------------------------------------------


class MonoidalSubstitude(Substitude):
    """P_C(a_1..a_k; a) = C(a_1 (x) ... (x) a_k, a); operations are morphism indices."""

    def __init__(self, C: FinCategory, tensor_obj, tensor_mor, unit_obj, name="P_C"):
        self.colours = C
        self.tensor_obj = tensor_obj
        self.tensor_mor = tensor_mor
        self.unit_obj = unit_obj
        self.name = name

    def tensor(self, profile):
        a = self.unit_obj
        for b in profile:
            a = self.tensor_obj(a, b)
        return a

    def tensor_all(self, ms):
        C = self.colours
        m = C.identities[self.unit_obj]
        for x in ms:
            m = self.tensor_mor(m, x)
        return m

    def ops(self, profile, out):
        return list(self.colours.hom(self.tensor(profile), out))

    def compose(self, profile, out, op, subs):
        prof2 = tuple(a for p, _ in subs for a in p)
        inner = self.tensor_all([o for _, o in subs])
        return prof2, self.colours.compose(op, inner), tuple(range(len(prof2)))

    def unit(self, m):
        return m


def monoidal_substitude(C: FinCategory, tensor_obj, tensor_mor, unit_obj, name="P_C"):
    """Validate strictness on the supplied tables and build P_C."""
    n = C.n_objects
    for a in range(n):
        if tensor_obj(unit_obj, a) != a or tensor_obj(a, unit_obj) != a:
            raise NotStrictMonoidal("unit object is not a strict unit", (unit_obj, a))
        for b in range(n):
            for c in range(n):
                if tensor_obj(tensor_obj(a, b), c) != tensor_obj(a, tensor_obj(b, c)):
                    raise NotStrictMonoidal("tensor of objects is not associative", (a, b, c))
    e = C.identities[unit_obj]
    for f in range(C.n_morphisms):
        if tensor_mor(e, f) != f or tensor_mor(f, e) != f:
            raise NotStrictMonoidal("unit identity is not a strict unit on morphisms", (f,))
        for g in range(C.n_morphisms):
            h = tensor_mor(f, g)
            if C.src[h] != tensor_obj(C.src[f], C.src[g]) or C.tgt[h] != tensor_obj(C.tgt[f], C.tgt[g]):
                raise NotStrictMonoidal("tensor of morphisms has wrong endpoints", (f, g))
    for a in range(n):
        for b in range(n):
            if tensor_mor(C.identities[a], C.identities[b]) != C.identities[tensor_obj(a, b)]:
                raise NotStrictMonoidal("tensor does not preserve identities", (a, b))
    for f in range(C.n_morphisms):
        for g in range(C.n_morphisms):
            for h in range(C.n_morphisms):
                if tensor_mor(tensor_mor(f, g), h) != tensor_mor(f, tensor_mor(g, h)):
                    raise NotStrictMonoidal("tensor of morphisms is not associative", (f, g, h))
    for f1 in range(C.n_morphisms):
        for g1 in C.out_of(C.tgt[f1]):
            for f2 in range(C.n_morphisms):
                for g2 in C.out_of(C.tgt[f2]):
                    lhs = C.compose(tensor_mor(g1, g2), tensor_mor(f1, f2))
                    if lhs != tensor_mor(C.compose(g1, f1), C.compose(g2, f2)):
                        raise NotStrictMonoidal("interchange law fails", (g1, f1, g2, f2))
    return MonoidalSubstitude(C, tensor_obj, tensor_mor, unit_obj, name)


def monoid_substitude():
    """P_1: one colour, one operation in each arity; algebras are monoids."""
    C = terminal_category()
    return monoidal_substitude(C, lambda a, b: 0, lambda f, g: 0, 0, name="monoid")


def poset_category(n, leq, name="poset"):
    mors = []
    for a in range(n):
        for b in range(n):
            if leq(a, b):
                mors.append((a, b, ("id", a) if a == b else "le"))
    return FinCategory.from_labelled(list(range(n)), mors, lambda g, f: ("id", f[0]) if f[0] == g[1] else "le", name=name)


def capped_addition(cap=2):
    """The poset {0..cap} with a (+) b = min(a + b, cap) as a strict monoidal category."""
    C = poset_category(cap + 1, lambda a, b: a <= b, name=f"capped({cap})")

    def tobj(a, b):
        return min(a + b, cap)

    def tmor(f, g):
        return C.hom(tobj(C.src[f], C.src[g]), tobj(C.tgt[f], C.tgt[g]))[0]

    return monoidal_substitude(C, tobj, tmor, 0, name=f"capped_addition({cap})")


# -- n-operads ------------------------------------------------------------------------

KIND_NAMES = {"normal": "NO", "constant_free": "CFO", "general": "O"}


@lru_cache(maxsize=None)
def qop_category(n, sizes):
    """Q_n^op on the ordinals of the given sizes.

    A morphism T -> T' is a quasibijection q: T' -> T, labelled by q's
    underlying function (identities by ("id", a)).
    """
    objs = [T for k in sizes for T in enumerate_ordinals(n, k)]
    mors = []
    for a, T in enumerate(objs):
        for b, T2 in enumerate(objs):
            if T.k != T2.k:
                continue
            for q in quasibijections(T2, T):
                ident = q.fn == tuple(range(T.k))
                mors.append((a, b, ("id", a) if a == b and ident else q.fn))

    def fn_of(entry):
        lab = entry[2]
        return tuple(range(objs[entry[0]].k)) if lab[0] == "id" else lab

    def comp(g, f):
        # f: a -> b is q_f: b -> a, g: b -> c is q_g: c -> b; the composite is q_f o q_g
        qf, qg = fn_of(f), fn_of(g)
        p = tuple(qf[x] for x in qg)
        a = f[0]
        return ("id", a) if a == g[1] and p == tuple(range(len(p))) else p

    cat = FinCategory.from_labelled(objs, mors, comp, name=f"Q_{n}^op")
    cat.object_index = {T: i for i, T in enumerate(objs)}
    return cat


class NOSubstitude(Substitude):
    """Operations are n-planar trees; inputs are the vertices in clockwise order."""

    def __init__(self, n, N=3, kind="normal"):
        self.n, self.N, self.kind = n, N, kind
        # colours are the ordinals that can decorate a vertex of this kind
        low = MIN_CHILDREN[kind]
        self.colours = qop_category(n, tuple(range(low, N + 1)))
        self.index = self.colours.object_index
        self.name = f"{KIND_NAMES[kind]}^({n})"
        self.unit_op = replace(unit_tree(n), kind=kind)
        self._ops = {}

    def ordinal(self, a):
        return self.colours.objects[a]

    def ops(self, profile, out):
        key = (tuple(profile), out)
        res = self._ops.get(key)
        if res is None:
            S = self.ordinal(out)
            prof = tuple(self.ordinal(a) for a in profile)
            if not prof:
                res = [self.unit_op] if S.k == 1 else []
            else:
                res = list(_enumerate_trees(prof, S, self.kind))
            self._ops[key] = res
        return res

    def unit(self, m):
        A = self.colours
        T, T2 = self.ordinal(A.src[m]), self.ordinal(A.tgt[m])
        lab = A.labels[m]
        q = tuple(range(T.k)) if lab[0] == "id" else lab
        inv = [0] * T.k
        for j, i in enumerate(q):
            inv[i] = j
        return corolla(T, inv, out=T2, kind=self.kind)

    def compose(self, profile, out, op, subs):
        if len(subs) != len(profile):
            raise ProfileMismatch("one substituend per vertex is needed", (len(subs), len(profile)))
        if not subs:
            return (), op, ()
        inners = []
        for (p, o), a in zip(subs, profile):
            if o.out != self.ordinal(a):
                raise ProfileMismatch("substituend output differs from the vertex decoration", a)
            inners.append(o)
        tree, prov = substitute_all(op, inners, check=False)
        tree = replace(tree, kind=self.kind)
        offs = []
        pos = 0
        for p, _ in subs:
            offs.append(pos)
            pos += len(p)
        perm = tuple(offs[i] + w for i, w in prov)
        prof2 = tuple(self.index[T] for T in tree.profile())
        if tree.n_vertices() == 0:
            tree = self.unit_op
        return prof2, tree, perm


# -- a category as a substitude --------------------------------------------------------------


class CategorySubstitude(Substitude):
    """Only unary operations: d(a; b) = C(a, b); the unit is the identity on morphisms."""

    max_arity = 1

    def __init__(self, C: FinCategory, name=None):
        self.colours = C
        self.name = name or f"category({C.name})"

    def ops(self, profile, out):
        if len(profile) != 1:
            return []
        return list(self.colours.hom(profile[0], out))

    def compose(self, profile, out, op, subs):
        (p, o), = subs
        return p, self.colours.compose(op, o), (0,)

    def unit(self, m):
        return m
