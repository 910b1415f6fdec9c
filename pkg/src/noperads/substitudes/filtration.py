"""Colimits over the free extension classifier, degree by degree.

An object of type (p, q) has p K-edges and q L-edges; its degree is p + q.
With X~ built from an algebra X, presheaves K, L and maps f: K -> L,
g: K -> X, the colimit over objects of degree <= k is S_k, and S_k is the
pushout of S_{k-1} <- Q_k -> L_k where Q_k is the colimit over degree-k
objects with a K-edge and L_k the colimit over degree-k objects with only
L-edges.  Every stage is executed in Set and compared with the direct colimit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NotAMorphism, StageMismatch
from ..fincat import SetPresheaf, UnionFind
from .base import Substitude
from .classifiers import ClassifierCat, classifier_pfg
from .convolution import AlgebraInSet
from .coproducts import presheaf_act, tilde_functor


def check_presheaf_map(Y: SetPresheaf, Z: SetPresheaf, h, name="map"):
    """h(c, y) lands in Z(c) and commutes with the actions."""
    A = Y.base
    for c in range(A.n_objects):
        for y in Y.values[c]:
            if h(c, y) not in Z.values[c]:
                raise NotAMorphism(f"{name} leaves its target", (c, y))
    for m in range(A.n_morphisms):
        s, t = A.src[m], A.tgt[m]
        for y in Y.values[s]:
            if h(t, presheaf_act(Y, m, y)) != presheaf_act(Z, m, h(s, y)):
                raise NotAMorphism(f"{name} is not natural", (m, y))


class _Restricted:
    """Colimit of a presheaf on a category restricted to a full subcategory."""

    def __init__(self, Xt: SetPresheaf, objs, arrows):
        cat = Xt.base
        self.objs = set(objs)
        self.offset = {}
        n = 0
        for o in sorted(self.objs):
            self.offset[o] = n
            n += len(Xt.values[o])
        uf = UnionFind(n)
        for m in arrows:
            a, b = cat.src[m], cat.tgt[m]
            if a in self.objs and b in self.objs:
                so, to = self.offset[a], self.offset[b]
                for i, j in enumerate(Xt.action[m]):
                    uf.union(so + i, to + j)
        cls = uf.classes()
        self.size = len(set(cls))
        self.cls = cls
        self.uf = uf
        self.members = {}
        for o in sorted(self.objs):
            for i in range(len(Xt.values[o])):
                self.members.setdefault(self.of(o, i), []).append((o, i))

    def of(self, o, i):
        return self.cls[self.uf.find(self.offset[o] + i)]

    def __len__(self):
        return self.size


@dataclass
class Stage:
    k: int
    previous: int  # |S_{k-1}|
    q: int  # |Q_k|
    l: int  # |L_k|
    size: int  # |S_k| from the pushout
    direct: int  # |colim over degree <= k|
    injective: bool  # S_{k-1} -> S_k is injective


@dataclass
class FiltrationResult:
    substitude: str
    truncation: dict
    stages: list
    direct: int
    type_counts: dict
    checks: dict = field(default_factory=dict)

    @property
    def staged(self):
        return self.stages[-1].size

    @property
    def monotone(self):
        return all(s.injective for s in self.stages[1:])


def _bijection(src, dst, image, what):
    """image(c) for every class c of src; checks it is a bijection onto dst."""
    seen = {}
    for c in src:
        d = image(c)
        if d in seen and seen[d] != c:
            raise StageMismatch(f"{what} is not injective", (c, seen[d]))
        seen[d] = c
    if len(seen) != len(dst):
        raise StageMismatch(f"{what} is not surjective", (len(seen), len(dst)))
    return seen


def filtration_colimit(
    P: Substitude,
    Xa: AlgebraInSet,
    Kp: SetPresheaf,
    Lp: SetPresheaf,
    f,
    g,
    arity_cap=3,
    D=2,
    classifier: ClassifierCat = None,
) -> FiltrationResult:
    """Stages S_0 .. S_D as pushouts in Set; raises StageMismatch if a
    reflection, a pushout or the final comparison fails to be a bijection."""
    check_presheaf_map(Kp, Lp, f, "f")
    check_presheaf_map(Kp, Xa.carrier, g, "g")
    C = classifier if classifier is not None else classifier_pfg(P, arity_cap, D)
    cat = C.category
    Xt = tilde_functor(C, Xa, Kp, Lp, f, g)
    arrows = [m for m in range(cat.n_morphisms) if not cat.is_identity(m)]

    types = [C.type_of(o) for o in range(cat.n_objects)]
    type_counts = {}
    for t in types:
        type_counts[t] = type_counts.get(t, 0) + 1

    def objs_where(pred):
        return [o for o in range(cat.n_objects) if pred(*types[o])]

    everything = _Restricted(Xt, range(cat.n_objects), arrows)
    s_prev = _Restricted(Xt, objs_where(lambda p, q: p + q == 0), arrows)
    stages = [Stage(0, 0, 0, 0, len(s_prev), len(s_prev), True)]
    checks = {"reflections": 0, "pushout_classes": 0}
    for k in range(1, D + 1):
        p_k = _Restricted(Xt, objs_where(lambda p, q: p + q <= k), arrows)
        q_k = _Restricted(Xt, objs_where(lambda p, q: p + q == k and p != 0), arrows)
        l_k = _Restricted(Xt, objs_where(lambda p, q: p == 0 and q == k), arrows)
        w_k = _Restricted(Xt, objs_where(lambda p, q: p + q == k), arrows)
        qbar = _Restricted(Xt, objs_where(lambda p, q: p + q <= k and not (p == 0 and q == k)), arrows)

        # the reflections make S_{k-1} -> colim qbar and L_k -> colim w bijective
        to_qbar = _bijection(
            list(s_prev.members), list(qbar.members), lambda c: qbar.of(*s_prev.members[c][0]), "S_(k-1) -> colim qbar"
        )
        to_w = _bijection(list(l_k.members), list(w_k.members), lambda c: w_k.of(*l_k.members[c][0]), "L_k -> colim w")
        checks["reflections"] += 2

        # pushout of S_{k-1} <- Q_k -> L_k in Set; elements are ("S", class) and ("L", class)
        elems = [("S", c) for c in s_prev.members] + [("L", c) for c in l_k.members]
        pos = {e: n for n, e in enumerate(elems)}
        uf = UnionFind(len(elems))
        for mem in q_k.members.values():
            o, i = mem[0]
            uf.union(pos[("S", to_qbar[qbar.of(o, i)])], pos[("L", to_w[w_k.of(o, i)])])
        roots = uf.classes()
        blocks = {}
        for e, n in pos.items():
            blocks.setdefault(roots[uf.find(n)], []).append(e)
        checks["pushout_classes"] += len(blocks)

        def image(e, target):
            side, c = e
            rep = s_prev.members[c][0] if side == "S" else l_k.members[c][0]
            return target.of(*rep)

        def block_image(r, target, what):
            imgs = {image(e, target) for e in blocks[r]}
            if len(imgs) != 1:
                raise StageMismatch(f"a pushout class meets several classes of the {what}", (k, blocks[r]))
            return imgs.pop()

        # the pushout maps bijectively onto the colimit over degree <= k and into the direct colimit
        _bijection(list(blocks), list(p_k.members), lambda r: block_image(r, p_k, "stage colimit"), f"pushout at degree {k}")
        for r in blocks:
            block_image(r, everything, "direct colimit")
        injective = len({roots[uf.find(pos[("S", c)])] for c in s_prev.members}) == len(s_prev)
        stages.append(Stage(k, len(s_prev), len(q_k), len(l_k), len(blocks), len(p_k), injective))
        s_prev = p_k

    # the last stage maps bijectively onto the direct colimit
    _bijection(list(s_prev.members), list(everything.members), lambda c: everything.of(*s_prev.members[c][0]), "S_D -> direct colimit")
    return FiltrationResult(P.name, dict(C.truncation), stages, len(everything), type_counts, checks)


# -- shipped micro instances -------------------------------------------------------------------


def micro_instances():
    """(name, substitude, algebra, K, L, f, g, arity cap, degree cap) for the
    small free extensions used by the test suite and the harness."""
    from ..fincat import arrow_category, constant_presheaf
    from .convolution import capped_sum_algebra, cyclic_monoid_algebra, presheaf_algebra
    from .instances import CategorySubstitude, capped_addition, monoid_substitude

    res = []
    P = monoid_substitude()
    A = P.colours
    Z2 = cyclic_monoid_algebra(P, 2)
    point = constant_presheaf(A)
    two = constant_presheaf(A, ("l0", "l1"))
    res.append(("monoid Z/2, one cell", P, Z2, point, two, lambda c, k: "l0", lambda c, k: 1, 3, 2))
    res.append(("monoid Z/2, degree 1", P, Z2, point, two, lambda c, k: "l0", lambda c, k: 1, 3, 1))
    res.append(("monoid Z/2, unit attaching map", P, Z2, point, two, lambda c, k: "l1", lambda c, k: 0, 2, 2))

    P = capped_addition(2)
    A = P.colours
    K = SetPresheaf.from_function(A, [[], ["k"], ["k"]], lambda m, i: 0)
    L = SetPresheaf.from_function(A, [[], ["k", "l"], ["k", "l"]], lambda m, i: i)
    res.append(("capped addition, representable cell", P, capped_sum_algebra(P), K, L, lambda c, k: k, lambda c, k: 1, 3, 2))

    P = CategorySubstitude(arrow_category())
    A = P.colours
    Y = SetPresheaf.from_function(A, [["a"], ["a", "b"]], lambda m, i: i)
    K = SetPresheaf.from_function(A, [[], ["k"]], lambda m, i: 0)
    L = SetPresheaf.from_function(A, [["l"], ["k", "l"]], lambda m, i: i if A.is_identity(m) else 1)
    res.append(("arrow category presheaves", P, presheaf_algebra(P, Y), K, L, lambda c, k: k, lambda c, k: "b", 1, 1))
    return res
