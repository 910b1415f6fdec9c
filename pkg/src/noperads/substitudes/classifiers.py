"""Truncated classifiers for semifree coproducts and free extensions.

An object is (out, profile, op, cols): an operation whose inputs are
coloured X (algebra edges), K or L (presheaf edges).  A morphism a -> b is
a tuple of choices, one per input of b, with a = b o choices:

    X input: an operation into that colour whose inputs are coloured X, or X
             and K when K-edges may turn into X-edges (G-generators);
    K input: a unary eta(m) coloured K;
    L input: a unary eta(m) coloured K (an F-generator) or L.

Each choice is (profile, op, cols).  Truncations keep a finite object set;
a morphism is kept when both ends are in it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import DanglingIndex, NotFoundAtTruncation, SizeBudgetExceeded
from ..fincat import FinalityCertificate, FinCategory, UnionFind
from .base import Substitude
from .instances import CategorySubstitude, MonoidalSubstitude, NOSubstitude

X, K, L = "X", "K", "L"
DEFAULT_MORPHISM_BUDGET = 3 * 10**6


@dataclass
class ClassifierCat:
    substitude: Substitude
    category: FinCategory
    colours: tuple
    truncation: dict
    perms: list  # per morphism: input j of the source is input perms[j] of the concatenated choices
    provenance: list  # per morphism: frozenset of generator tags X, F, G, A
    unary: list  # per morphism: every choice is eta of an A-morphism, colour kept
    nullary: list  # per morphism: some choice has no inputs
    marked: list = field(default_factory=list)
    marked_name: str = ""

    @property
    def objects(self):
        return self.category.objects

    def index(self, obj):
        return self.category.object_index[obj]

    def degree(self, a):
        cols = self.category.objects[a][3]
        return sum(c != X for c in cols)

    def type_of(self, a):
        cols = self.category.objects[a][3]
        return (cols.count(K), cols.count(L))

    def mark(self, predicate, name):
        self.marked = [a for a, o in enumerate(self.category.objects) if predicate(o)]
        self.marked_name = name
        return self

    def marked_morphisms(self):
        ms = set(self.marked)
        C = self.category
        return [m for m in range(C.n_morphisms) if self.unary[m] and C.src[m] in ms and C.tgt[m] in ms]

    def marked_subcategory(self):
        return self.category.subcategory(self.marked, self.marked_morphisms())

    def finality(self):
        return marked_finality(self)


# -- building --------------------------------------------------------------------------


def _identity_choice(P, c, col):
    return ((c,), P.identity_op(c), (col,))


def compose_choice(P, choice, out, inner):
    """Substitute choices into a choice; colours follow the inputs."""
    prof, op, cols = choice
    prof2, op2, perm = P.compose(prof, out, op, [(p, o) for p, o, _ in inner])
    concat = [c for _, _, cs in inner for c in cs]
    return prof2, op2, tuple(concat[perm[j]] for j in range(len(prof2)))


def build_classifier(P: Substitude, objects, colours, truncation, budget=DEFAULT_MORPHISM_BUDGET):
    """All choice-morphisms between the given objects."""
    A = P.colours
    objects = list(objects)
    index = {o: i for i, o in enumerate(objects)}
    if len(index) != len(objects):
        raise DanglingIndex("duplicate classifier objects")
    max_len = max((len(o[1]) for o in objects), default=0)
    max_count = {c: max((o[3].count(c) for o in objects), default=0) for c in colours}
    allow_g = L in colours
    x_cols = (X, K) if allow_g else (X,)

    eta = {}
    unary_into = {}
    for c in range(A.n_objects):
        unary_into[c] = [((A.src[m],), P.unit(m)) for m in A.into(c)]
        for p, o in unary_into[c]:
            eta.setdefault((p[0], c), set()).add(o)
    x_ops = {c: P.ops_into(c, max_len) for c in range(A.n_objects)}

    def options(c, col):
        if col == K:
            return [(p, o, (K,)) for p, o in unary_into[c]]
        if col == L:
            return [(p, o, (cc,)) for p, o in unary_into[c] for cc in (K, L)]
        res = []
        for p, o in x_ops[c]:
            for cs in itertools.product(x_cols, repeat=len(p)):
                res.append((p, o, cs))
        return res

    opt_cache = {}

    def opts(c, col):
        key = (c, col)
        if key not in opt_cache:
            opt_cache[key] = sorted(options(c, col), key=lambda ch: len(ch[0]))
        return opt_cache[key]

    src, tgt, labels, perms, prov, unary, nullary = [], [], [], [], [], [], []
    lookup = {}
    identities = [None] * len(objects)
    for b, (out, prof, op, cols) in enumerate(objects):
        lists = [opts(c, col) for c, col in zip(prof, cols)]
        ident = tuple(_identity_choice(P, c, col) for c, col in zip(prof, cols))
        # prune by the colour counts of the source; K and L inputs keep one edge each
        n_in = len(prof)
        rest = [0] * (n_in + 1)
        for i in range(n_in - 1, -1, -1):
            rest[i] = rest[i + 1] + (cols[i] != X)

        def rec(i, chosen, counts):
            if i == n_in:
                yield tuple(chosen)
                return
            used = sum(counts.values()) + rest[i + 1]
            for ch in lists[i]:
                if used + len(ch[0]) > max_len:
                    break
                new = dict(counts)
                for c in ch[2]:
                    new[c] += 1
                if any(new[c] > max_count[c] for c in colours):
                    continue
                chosen.append(ch)
                yield from rec(i + 1, chosen, new)
                chosen.pop()

        for choices in rec(0, [], {c: 0 for c in colours}):
            prof2, op2, perm = P.compose(prof, out, op, [(p, o) for p, o, _ in choices])
            concat = [c for _, _, cs in choices for c in cs]
            cols2 = tuple(concat[perm[j]] for j in range(len(prof2)))
            a = index.get((out, prof2, op2, cols2))
            if a is None:
                continue
            m = len(src)
            if m >= budget:
                raise SizeBudgetExceeded("classifier has too many morphisms", m)
            src.append(a)
            tgt.append(b)
            labels.append(choices)
            perms.append(perm)
            lookup[(a, b, choices)] = m
            tags, is_unary, has_nullary = set(), True, False
            for ch, c, col in zip(choices, prof, cols):
                p, o, cs = ch
                if not p:
                    has_nullary = True
                u = len(p) == 1 and cs == (col,) and o in eta.get((p[0], c), ())
                if not u:
                    is_unary = False
                if ch == _identity_choice(P, c, col):
                    continue
                if col == X:
                    tags.add("A" if u else "X")
                    if K in cs:
                        tags.add("G")
                elif col == L and cs == (K,):
                    tags.add("F")
                    if o != P.identity_op(c):
                        tags.add("A")
                else:
                    tags.add("A")
            prov.append(frozenset(tags))
            unary.append(is_unary)
            nullary.append(has_nullary)
            if choices == ident:
                identities[b] = m
    if any(i is None for i in identities):
        raise DanglingIndex("an object has no identity morphism")

    def comp(g, f):
        # f: a -> b with choices cf, g: b -> d with choices cg
        cf, cg, pg = labels[f], labels[g], perms[g]
        d_prof = objects[tgt[g]][1]
        inv = [0] * len(pg)
        for j, q in enumerate(pg):
            inv[q] = j
        new, pos = [], 0
        for ch, c in zip(cg, d_prof):
            block = [cf[inv[q]] for q in range(pos, pos + len(ch[0]))]
            pos += len(ch[0])
            new.append(compose_choice(P, ch, c, block))
        key = (src[f], tgt[g], tuple(new))
        if key not in lookup:
            raise DanglingIndex("composite of classifier morphisms is missing", key)
        return lookup[key]

    cat = FinCategory(objects, src, tgt, labels, identities, comp, name=f"classifier({P.name})")
    cat.object_index = index
    cat.label_index = lookup
    return ClassifierCat(P, cat, tuple(colours), dict(truncation), perms, prov, unary, nullary)


# -- object sets -------------------------------------------------------------------------


def _objects(P, max_len, colourings, keep=None):
    A = P.colours
    out = []
    for a in range(A.n_objects):
        for k in range(max_len + 1):
            if P.max_arity is not None and k > P.max_arity:
                break
            for prof in P.profiles(k):
                ops = P.ops(prof, a)
                if not ops:
                    continue
                for cols in colourings(k):
                    for op in ops:
                        obj = (a, prof, op, cols)
                        if keep is None or keep(obj):
                            out.append(obj)
    return out


def words(k, colours, max_counts):
    """Colour words of length k with at most max_counts[c] letters c."""
    for cols in itertools.product(colours, repeat=k):
        if all(cols.count(c) <= max_counts.get(c, k) for c in colours):
            yield cols


def is_alternating(cols):
    """X (K X)^j for some j >= 0."""
    return len(cols) % 2 == 1 and all(c == (X if i % 2 == 0 else K) for i, c in enumerate(cols))


# -- P_C classifiers ------------------------------------------------------------------------


def classifier_pc(P: Substitude, x_cap=3, k_cap=None, budget=DEFAULT_MORPHISM_BUDGET):
    """The semifree coproduct classifier truncated to at most x_cap X-edges and
    k_cap K-edges (default x_cap - 1), with tau = alternating strings marked.

    With k_cap = x_cap - 1 every alternating target of an object is in the
    truncation, so the comma categories used by finality are exact."""
    if k_cap is None:
        k_cap = max(x_cap - 1, 0)
    caps = {X: x_cap, K: k_cap}
    objs = _objects(P, x_cap + k_cap, lambda k: words(k, (X, K), caps))
    C = build_classifier(P, objs, (X, K), {"x_cap": x_cap, "k_cap": k_cap}, budget)
    return C.mark(lambda o: is_alternating(o[3]), "alternating")


def tau_factorization(C: ClassifierCat, b):
    """The terminal object of b/lambda: returns (target index, morphism index).
    Raises NotFoundAtTruncation when b/lambda has no terminal object."""
    cat = C.category
    marked = set(C.marked)
    mm = C.marked_morphisms()
    out_marked = {}
    for m in mm:
        out_marked.setdefault(cat.src[m], []).append(m)
    objs = [(cat.tgt[m], m) for m in cat.out_of(b) if cat.tgt[m] in marked]
    pos = {o: i for i, o in enumerate(objs)}
    into = [[0] * len(objs) for _ in objs]
    for i, (t, m) in enumerate(objs):
        for g in out_marked.get(t, ()):
            j = pos[(cat.tgt[g], cat.compose(g, m))]
            into[j][i] += 1
    for j, (t, m) in enumerate(objs):
        if all(into[j][i] == 1 for i in range(len(objs))):
            return t, m
    raise NotFoundAtTruncation("no terminal object in the comma category", b)


# -- n-operad classifiers ------------------------------------------------------------------------


def tree_edges(tree):
    """(parent, child) vertex pairs in preorder numbering, and per vertex
    whether it has a leaf among its children."""
    from ..optrees import Leaf, Vertex

    edges, leafy = [], []
    counter = [0]

    def walk(node, parent):
        if isinstance(node, Leaf):
            return
        v = counter[0]
        counter[0] += 1
        leafy.append(any(isinstance(c, Leaf) for c in node.children))
        if parent is not None:
            edges.append((parent, v))
        for c in node.children:
            walk(c, v)

    walk(tree.root, None)
    return edges, leafy


def is_noncontractible_tree(obj):
    """No edge joins two X-vertices."""
    _, _, tree, cols = obj
    edges, _ = tree_edges(tree)
    return all(not (cols[p] == X and cols[c] == X) for p, c in edges)


def is_nr_tree(obj):
    """Noncontractible retract for trees with unary vertices: no X-X and no
    K-K edge, the root vertex is X, and every child of a K-vertex is an X-vertex."""
    _, _, tree, cols = obj
    if not cols or cols[0] != X:
        return False
    edges, leafy = tree_edges(tree)
    for p, c in edges:
        if cols[p] == cols[c]:
            return False
    return not any(cols[v] == K and leafy[v] for v in range(len(cols)))


NR_PREDICATES = {"normal": is_noncontractible_tree, "constant_free": is_nr_tree}


def classifier_nop(n=2, cap=3, kind="constant_free", k_cap=1, size_cap=None, budget=DEFAULT_MORPHISM_BUDGET):
    """The semifree coproduct classifier of the n-operad substitude, truncated to
    trees with at most ``cap`` vertices, ordinals of size <= size_cap (default
    cap - 1) and at most k_cap K-vertices, together with every marked tree
    having at most k_cap K-vertices.  Marked: the noncontractible retracts."""
    if kind not in NR_PREDICATES:
        raise NotFoundAtTruncation("no explicit noncontractible retracts for this kind", kind)
    size_cap = cap - 1 if size_cap is None else size_cap
    P = NOSubstitude(n, size_cap, kind)
    pred = NR_PREDICATES[kind]
    # marked trees have at most 1 + k (size + 1) vertices
    nr_len = 1 + k_cap * (size_cap + 1)
    max_len = max(cap, nr_len)

    def keep(o):
        return len(o[1]) <= cap or pred(o)

    objs = _objects(P, max_len, lambda k: words(k, (X, K), {K: k_cap}), keep)
    C = build_classifier(
        P, objs, (X, K), {"n": n, "vertex_cap": cap, "size_cap": size_cap, "k_cap": k_cap, "kind": kind}, budget
    )
    return C.mark(pred, "noncontractible retracts")


# -- free extension classifiers ------------------------------------------------------------------------


def classifier_pfg(P: Substitude, arity_cap=3, degree_cap=2, budget=DEFAULT_MORPHISM_BUDGET):
    """The free extension classifier on X, K, L truncated by the number of
    inputs and the degree (number of K- and L-edges)."""
    objs = _objects(
        P,
        arity_cap,
        lambda k: (cs for cs in itertools.product((X, K, L), repeat=k) if sum(c != X for c in cs) <= degree_cap),
    )
    return build_classifier(P, objs, (X, K, L), {"arity_cap": arity_cap, "degree_cap": degree_cap}, budget)


# -- finality of marked subcategories ------------------------------------------------------------------------


def marked_finality(C: ClassifierCat) -> FinalityCertificate:
    """For every object b, b/lambda is nonempty and connected; lambda has the
    marked objects and the unary morphisms between them."""
    cat = C.category
    marked = set(C.marked)
    out_marked = {}
    for m in C.marked_morphisms():
        out_marked.setdefault(cat.src[m], []).append(m)
    cert = FinalityCertificate(True)
    for b in range(cat.n_objects):
        objs = [(cat.tgt[m], m) for m in cat.out_of(b) if cat.tgt[m] in marked]
        pos = {o: i for i, o in enumerate(objs)}
        uf = UnionFind(len(objs))
        for i, (t, m) in enumerate(objs):
            for g in out_marked.get(t, ()):
                uf.union(i, pos[(cat.tgt[g], cat.compose(g, m))])
        count = len(uf.classes())
        if count != 1:
            comp = [uf.find(i) for i in range(len(objs))]
            sizes = sorted(comp.count(r) for r in set(comp))
            return FinalityCertificate(False, cert.witnesses, (b, count, sizes))
        cert.witnesses[b] = objs[0]
    return cert


# -- unary tameness ------------------------------------------------------------------------


def noncontractible_retracts(C: ClassifierCat):
    """Generic candidate: objects all of whose outgoing morphisms have choices of
    arity <= 1, such that every morphism with a nullary choice has a retraction."""
    cat = C.category
    res = []
    for c in range(cat.n_objects):
        ok = True
        for m in cat.out_of(c):
            if any(len(ch[0]) > 1 for ch in cat.labels[m]):
                ok = False
                break
        if not ok:
            continue
        for m in cat.out_of(c):
            if not C.nullary[m]:
                continue
            d = cat.tgt[m]
            if not any(cat.compose(psi, m) == cat.identities[c] for psi in cat.hom(d, c)):
                ok = False
                break
        if ok:
            res.append(c)
    return res


def action_pullback(C: ClassifierCat):
    """lambda is closed under the output action and reflects it: for an
    A-morphism alpha and an object c with alpha.c in the truncation,
    c in lambda iff alpha.c in lambda.  Returns (checked pairs, failures)."""
    P, cat = C.substitude, C.category
    A = P.colours
    marked = set(C.marked)
    checked, failures = 0, []
    for c, (out, prof, op, cols) in enumerate(cat.objects):
        for alpha in A.out_of(out):
            d = cat.object_index.get((A.tgt[alpha], prof, P.act_out(alpha, prof, op), cols))
            if d is None:
                continue
            checked += 1
            if (c in marked) != (d in marked):
                failures.append((c, alpha, d))
    return checked, failures


@dataclass
class TamenessCertificate:
    substitude: str
    candidate: str
    truncation: dict
    marked_objects: int
    objects: int
    morphisms: int
    finality: FinalityCertificate
    pullback_checked: int
    tried: list

    @property
    def ok(self):
        return bool(self.finality)


def _heuristic_classifier(P, cap):
    if isinstance(P, NOSubstitude):
        return classifier_nop(P.n, cap, P.kind)
    C = classifier_pc(P, cap)
    if isinstance(P, CategorySubstitude):
        return C.mark(lambda o: True, "whole classifier")
    return C


def check_unary_tame(P: Substitude, cap=3, classifier=None):
    """Search a levelwise final lambda inside the truncated classifier: the known
    candidate first (alternating strings, noncontractible retracts, or the whole
    classifier when there are only unary operations), then the generic
    noncontractible retracts.  Raises NotFoundAtTruncation otherwise."""
    C = classifier if classifier is not None else _heuristic_classifier(P, cap)
    tried = []
    candidates = [(C.marked_name, list(C.marked))]
    generic = noncontractible_retracts(C)
    if generic != candidates[0][1]:
        candidates.append(("generic noncontractible retracts", generic))
    for name, marked in candidates:
        C.marked, C.marked_name = marked, name
        cert = marked_finality(C)
        checked, failures = action_pullback(C)
        tried.append((name, bool(cert), len(failures)))
        if cert and not failures:
            cat = C.category
            return TamenessCertificate(
                P.name, name, C.truncation, len(marked), cat.n_objects, cat.n_morphisms, cert, checked, tried
            )
    raise NotFoundAtTruncation("no levelwise final lambda found at this truncation", tried)
