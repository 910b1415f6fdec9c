"""n-planar trees: the operations of the n-operad substitudes.

A tree is a nested structure of ``Vertex`` and ``Leaf`` nodes.  Each vertex
carries an n-ordinal decoration whose size is its number of children, so the
decoration's total order is the planar left-to-right order of the children.
Leaves carry labels in |S|, S being the output ordinal.  Vertices are
numbered by the clockwise walk from the root, i.e. preorder with children
visited left to right.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .errors import ProfileMismatch, SizeBudgetExceeded
from .ordinals import (
    ComplementaryRelation,
    NOrdinal,
    dominates,
    enumerate_ordinals,
    format_ordinal,
    parse_ordinal,
    unit,
)

KINDS = ("general", "constant_free", "normal")
MIN_CHILDREN = {"general": 0, "constant_free": 1, "normal": 2}


@dataclass(frozen=True)
class Leaf:
    label: int


@dataclass(frozen=True)
class Vertex:
    deco: NOrdinal
    children: tuple
    colour: str = None
    tag: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class NPlanarTree:
    root: object
    out: NOrdinal
    kind: str = "general"

    @property
    def n(self):
        return self.out.n

    def vertices(self):
        return list(_preorder(self.root))

    def profile(self):
        return tuple(v.deco for v in _preorder(self.root))

    def colours(self):
        return tuple(v.colour for v in _preorder(self.root))

    def n_vertices(self):
        return sum(1 for _ in _preorder(self.root))

    def leaf_labels(self):
        """Labels of the leaves in planar order."""
        return [lf.label for lf, _ in _leaves(self.root, ())]

    def is_unit(self):
        return isinstance(self.root, Leaf)

    def __str__(self):
        return format_tree(self)


def _preorder(node):
    if isinstance(node, Vertex):
        yield node
        for c in node.children:
            yield from _preorder(c)


def _leaves(node, path):
    if isinstance(node, Leaf):
        yield node, path
    else:
        for e, c in enumerate(node.children):
            yield from _leaves(c, path + (e,))


def _vertex_at(root, path):
    node = root
    for e in path:
        node = node.children[e]
    return node


def corolla(T: NOrdinal, labels=None, colour=None, out=None, kind="general"):
    labels = tuple(range(T.k)) if labels is None else tuple(labels)
    if out is None:
        out = T
    return NPlanarTree(Vertex(T, tuple(Leaf(x) for x in labels), colour), out, kind)


def unit_tree(n):
    return NPlanarTree(Leaf(0), unit(n), "general")


# -- relation and domination ----------------------------------------------------


def shape_relation(root, size):
    """Relation on leaf positions (planar order) induced by the meets of paths."""
    paths = [p for _, p in _leaves(root, ())]
    rel = {}
    for a in range(len(paths)):
        for b in range(a + 1, len(paths)):
            pa, pb = paths[a], paths[b]
            l = 0
            while pa[l] == pb[l]:
                l += 1
            v = _vertex_at(root, pa[:l])
            lev = v.deco.level(pa[l], pb[l])
            # planar order agrees with the ordering of the arrival edges
            rel[(a, b)] = lev
    return ComplementaryRelation(size, rel)


def complementary_relation(tree: NPlanarTree):
    labels = tree.leaf_labels()
    return shape_relation(tree.root, len(labels)).transport(labels)


def satisfies_domination(tree: NPlanarTree, S: NOrdinal = None):
    S = tree.out if S is None else S
    if S.k != len(tree.leaf_labels()):
        raise ProfileMismatch("output size differs from the number of leaves", (S.k,))
    return dominates(S.relation(), complementary_relation(tree))


def check_tree(tree: NPlanarTree):
    labels = tree.leaf_labels()
    if sorted(labels) != list(range(tree.out.k)):
        raise ProfileMismatch("leaf labels are not a bijection onto |S|", labels)
    lo = MIN_CHILDREN[tree.kind]
    for v in tree.vertices():
        if v.deco.k != len(v.children):
            raise ProfileMismatch("decoration size differs from the child count", v.deco.k)
        if v.deco.n != tree.n:
            raise ProfileMismatch("decoration depth differs from the output depth")
        if len(v.children) < lo:
            raise ProfileMismatch(f"vertex with {len(v.children)} children in the {tree.kind} class")
    if tree.is_unit() and tree.kind != "general":
        raise ProfileMismatch("the unit tree lies only in the general class")
    if not satisfies_domination(tree):
        raise ProfileMismatch("output does not dominate the tree relation", str(tree))
    return tree


# -- enumeration -------------------------------------------------------------------


def _shapes(profile, i):
    """Planar shapes whose preorder vertex sequence starts at profile[i].

    Yields (node, next index) with leaves as Leaf(-1) placeholders.
    """
    T = profile[i]

    def fill(slot, j):
        if slot == T.k:
            yield (), j
            return
        for rest, j2 in fill(slot + 1, j):
            yield (Leaf(-1),) + rest, j2
        if j < len(profile):
            for sub, j2 in _shapes(profile, j):
                for rest, j3 in fill(slot + 1, j2):
                    yield (sub,) + rest, j3

    for kids, j in fill(0, i + 1):
        yield Vertex(T, kids), j


def _label(node, labels, pos=None):
    pos = [0] if pos is None else pos
    if isinstance(node, Leaf):
        x = labels[pos[0]]
        pos[0] += 1
        return Leaf(x)
    return Vertex(node.deco, tuple(_label(c, labels, pos) for c in node.children), node.colour)


def shapes(profile):
    """All planar shapes using the profile exactly, in preorder."""
    profile = tuple(profile)
    if not profile:
        return [Leaf(-1)]
    # dedupe: the recursive filler can reach the same shape once per choice sequence
    seen = []
    for node, j in _shapes(profile, 0):
        if j == len(profile) and node not in seen:
            seen.append(node)
    return seen


@lru_cache(maxsize=None)
def _enumerate_trees(profile, S, kind):
    lo = MIN_CHILDREN[kind]
    if any(T.k < lo for T in profile):
        return ()
    if not profile:
        return (unit_tree(S.n),) if kind == "general" and S.k == 1 else ()
    leaves = sum(T.k for T in profile) - len(profile) + 1
    if leaves != S.k:
        return ()
    out = []
    Srel = S.relation()
    for shape in shapes(profile):
        rel = shape_relation(shape, S.k)
        for labels in itertools.permutations(range(S.k)):
            if dominates(Srel, rel.transport(labels)):
                out.append(NPlanarTree(_label(shape, labels), S, kind))
    return tuple(out)


def enumerate_trees(n, profile, S, kind="general", max_vertices=5, max_leaves=6):
    profile = tuple(profile)
    if len(profile) > max_vertices or S.k > max_leaves:
        raise SizeBudgetExceeded("tree enumeration over the budget", (len(profile), S.k))
    if any(T.n != n for T in profile) or S.n != n:
        raise ProfileMismatch("depths do not match")
    return list(_enumerate_trees(profile, S, kind))


def profiles_for(n, S_size, n_vertices, kind, max_arity):
    """All decoration sequences of a given length that can produce S_size leaves."""
    lo = MIN_CHILDREN[kind]
    sizes = range(lo, max_arity + 1)
    for ks in itertools.product(sizes, repeat=n_vertices):
        if sum(ks) - n_vertices + 1 != S_size:
            continue
        for prof in itertools.product(*[enumerate_ordinals(n, k) for k in ks]):
            yield prof


@lru_cache(maxsize=None)
def trees_into(S: NOrdinal, max_vertices, kind="general", max_arity=None):
    """Every tree with output S and at most ``max_vertices`` vertices."""
    max_arity = S.k if max_arity is None else max_arity
    out = []
    for v in range(max_vertices + 1):
        if v == 0:
            out.extend(_enumerate_trees((), S, kind))
            continue
        for prof in profiles_for(S.n, S.k, v, kind, max_arity):
            out.extend(_enumerate_trees(prof, S, kind))
    return tuple(out)


# -- substitution ---------------------------------------------------------------------


def _tag_inner(node, counter):
    if isinstance(node, Leaf):
        return node
    idx = counter[0]
    counter[0] += 1
    kids = tuple(_tag_inner(c, counter) for c in node.children)
    return Vertex(node.deco, kids, node.colour, tag=idx)


def substitute_all(outer: NPlanarTree, inners, check=True):
    """Substitute ``inners[i]`` (or keep the vertex when None) into vertex i.

    Returns (tree, provenance) where provenance[j] = (outer vertex, inner
    vertex) for the j-th vertex of the result in canonical order.
    """
    verts = outer.vertices()
    if len(inners) != len(verts):
        raise ProfileMismatch("need one entry per outer vertex", (len(inners), len(verts)))
    counter = [0]

    def rebuild(node):
        if isinstance(node, Leaf):
            return node
        i = counter[0]
        counter[0] += 1
        kids = tuple(rebuild(c) for c in node.children)
        inner = inners[i]
        if inner is None:
            return Vertex(node.deco, kids, node.colour, tag=(i, 0))
        if inner.out != node.deco:
            raise ProfileMismatch(f"inner output does not match the decoration of vertex {i}", i)
        if len(inner.leaf_labels()) != len(kids):
            raise ProfileMismatch("inner leaf count differs from the child count", i)
        return graft(_tag_inner(inner.root, [0]), kids, i)

    def graft(inode, kids, i):
        if isinstance(inode, Leaf):
            return kids[inode.label]
        return Vertex(inode.deco, tuple(graft(c, kids, i) for c in inode.children), inode.colour, tag=(i, inode.tag))

    root = rebuild(outer.root)
    prov = [v.tag for v in _preorder(root)]
    result = NPlanarTree(_strip(root), outer.out, outer.kind)
    if check and not satisfies_domination(result):
        raise ProfileMismatch("substitution broke domination", str(result))
    return result, prov


def _strip(node):
    if isinstance(node, Leaf):
        return node
    return Vertex(node.deco, tuple(_strip(c) for c in node.children), node.colour)


def substitute(outer: NPlanarTree, v: int, inner: NPlanarTree):
    inners = [None] * outer.n_vertices()
    inners[v] = inner
    return substitute_all(outer, inners)[0]


def graft_leaves(outer: NPlanarTree, parts, out: NOrdinal, relabel):
    """Graft ``parts[j]`` (a tree or None for a bare leaf) onto leaf label j.

    ``relabel[j][t]`` is the new label of leaf t of parts[j] (for a bare leaf,
    relabel[j][0]).  Returns the tree with output ``out``.
    """

    def walk(node):
        if isinstance(node, Leaf):
            j = node.label
            part = parts[j]
            if part is None:
                return Leaf(relabel[j][0])
            return _relabel(part.root, relabel[j])
        return Vertex(node.deco, tuple(walk(c) for c in node.children), node.colour)

    return NPlanarTree(walk(outer.root), out, outer.kind)


def _relabel(node, f):
    if isinstance(node, Leaf):
        return Leaf(f[node.label])
    return Vertex(node.deco, tuple(_relabel(c, f) for c in node.children), node.colour)


def relabel_leaves(tree: NPlanarTree, f, out=None):
    return NPlanarTree(_relabel(tree.root, f), tree.out if out is None else out, tree.kind)


def recolour(tree: NPlanarTree, colours):
    it = iter(colours)

    def walk(node):
        if isinstance(node, Leaf):
            return node
        c = next(it)
        return Vertex(node.deco, tuple(walk(ch) for ch in node.children), c)

    return replace(tree, root=walk(tree.root))


def with_kind(tree: NPlanarTree, kind):
    return replace(tree, kind=kind)


def vertex_order_action(tree: NPlanarTree, order, g):
    """Act by a permutation g of {0..k-1} on a vertex linear order.

    An operation of the symmetric substitude is a tree plus a bijection
    ``order`` from canonical vertex positions to {0..k-1}; g relabels it.
    """
    return tree, tuple(g[x] for x in order)


def is_sigma_free(trees):
    """The relabelling action is free on (tree, order) pairs: only the identity fixes one."""
    for t in trees:
        k = t.n_vertices()
        base = tuple(range(k))
        for g in itertools.permutations(range(k)):
            if g != base and vertex_order_action(t, base, g) == (t, base):
                return False
    return True


# -- literal syntax -----------------------------------------------------------------------


def _fmt(node):
    if isinstance(node, Leaf):
        return str(node.label + 1)
    col = node.colour or ""
    return f"{col}{{{format_ordinal(node.deco)}}}(" + ",".join(_fmt(c) for c in node.children) + ")"


def format_tree(tree: NPlanarTree):
    return f"kind={tree.kind}|out={{{format_ordinal(tree.out)}}}|{_fmt(tree.root)}"


_HEAD = re.compile(r"^kind=(\w+)\|out=\{([^}]*)\}\|(.*)$")


def parse_tree(text):
    m = _HEAD.match(text.strip())
    if not m:
        raise ValueError(f"not a tree literal: {text!r}")
    kind, out, body = m.group(1), parse_ordinal(m.group(2)), m.group(3)
    if kind not in KINDS:
        raise ValueError(f"unknown class {kind}")
    pos = [0]

    def node():
        s = body
        i = pos[0]
        if s[i].isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            pos[0] = j
            return Leaf(int(s[i:j]) - 1)
        j = s.index("{", i)
        colour = s[i:j] or None
        k = s.index("}", j)
        deco = parse_ordinal(s[j + 1 : k])
        if s[k + 1] != "(":
            raise ValueError("expected '(' after a decoration")
        pos[0] = k + 2
        kids = []
        if s[pos[0]] == ")":
            pos[0] += 1
            return Vertex(deco, (), colour)
        while True:
            kids.append(node())
            c = s[pos[0]]
            pos[0] += 1
            if c == ")":
                break
            if c != ",":
                raise ValueError(f"unexpected {c!r} in tree literal")
        return Vertex(deco, tuple(kids), colour)

    root = node()
    if pos[0] != len(body):
        raise ValueError("trailing characters in tree literal")
    return check_tree(NPlanarTree(root, out, kind))
