"""Fibers of the input projection of the operation category.

For a profile b the strict fiber has the operations with inputs b (any
output) as objects and output actions as morphisms.  It is coreflective in
the comma category b/p of the input projection p, so both have the same
components and the same initial objects; ``comma_cross_check`` compares them
on small instances.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..fincat import (
    FinCategory,
    FinFunctor,
    components,
    grothendieck,
    is_constantly_disconnected,
    op_functor,
    under,
)
from ..ordinals import is_poset
from .base import Substitude, operation_bimodule


def strict_fiber(P: Substitude, profile):
    """Objects (out, op); a morphism (out, op) -> (out', op') is psi: out -> out'
    with psi . op = op'."""
    A = P.colours
    objects = [(a, op) for a in range(A.n_objects) for op in P.ops(profile, a)]
    pos = {o: i for i, o in enumerate(objects)}
    src, tgt, labels, mpos = [], [], [], {}
    for i, (a, op) in enumerate(objects):
        for psi in A.out_of(a):
            j = pos[(A.tgt[psi], P.act_out(psi, profile, op))]
            mpos[(i, psi)] = len(src)
            src.append(i)
            tgt.append(j)
            labels.append(psi)
    ids = [mpos[(i, A.identities[a])] for i, (a, op) in enumerate(objects)]

    def comp(g, f):
        return mpos[(src[f], A.compose(labels[g], labels[f]))]

    cat = FinCategory(objects, src, tgt, labels, ids, comp, name=f"fiber{tuple(profile)}")
    cat.object_index = pos
    return cat


def initial_objects(C: FinCategory, members):
    """Members with exactly one morphism to every member."""
    res = []
    for s in members:
        if all(len(C.hom(s, t)) == 1 for t in members):
            res.append(s)
    return res


@dataclass
class FiberComponent:
    category: FinCategory
    members: list
    poset: bool
    initial: list


def fibers_of_p_prime(P: Substitude, profile):
    """The connected components of the fiber over a profile, each as a
    FinCategory, with poset and initial-object data attached."""
    C = strict_fiber(P, tuple(profile))
    comp, count = components(C.n_objects, zip(C.src, C.tgt))
    out = []
    for c in range(count):
        members = [i for i in range(C.n_objects) if comp[i] == c]
        sub, _ = C.full_subcategory(members)
        sub.fiber_members = members
        sub.is_poset_component = is_poset(sub)
        sub.initial_objects = initial_objects(sub, list(range(sub.n_objects)))
        out.append(sub)
    return out


def component_map(P: Substitude, ms, profile):
    """pi_0 map from the fiber over ``profile`` to the fiber over the sources of ms,
    induced by the input action (ms[i]: b_i -> profile[i])."""
    A = P.colours
    prof2 = tuple(A.src[m] for m in ms)
    C, C2 = strict_fiber(P, profile), strict_fiber(P, prof2)
    comp, count = components(C.n_objects, zip(C.src, C.tgt))
    comp2, count2 = components(C2.n_objects, zip(C2.src, C2.tgt))
    image = {}
    for i, (a, op) in enumerate(C.objects):
        j = C2.object_index[(a, P.act_in(ms, profile, op, a))]
        if image.setdefault(comp[i], comp2[j]) != comp2[j]:
            raise ValueError("input action does not respect components")
    return image, count, count2


@dataclass
class FiberReport:
    profiles: int = 0
    components: int = 0
    non_posets: list = field(default_factory=list)
    bad_initial: list = field(default_factory=list)
    maps_checked: int = 0
    non_bijective: list = field(default_factory=list)
    noncontractible: list = field(default_factory=list)

    @property
    def ok(self):
        return not (self.non_posets or self.bad_initial or self.non_bijective)

    @property
    def contractible_ok(self):
        """The weaker homotopical statement: acyclic components and pi_0 bijections."""
        return not (self.noncontractible or self.non_bijective)


def is_acyclic(C: FinCategory):
    """Rational Betti numbers (1, 0, 0, ...) and torsion-free trivial H_1, through
    the full nerve of a finite poset."""
    from ..homotopy import betti, h1_integral, nerve

    dim = max(2, C.n_objects)
    N = nerve(C, dim)
    b = betti(N).betti
    h1 = h1_integral(N)
    return b[0] == 1 and all(x == 0 for x in b[1:]) and h1.rank == 0 and not h1.torsion


def constant_disconnection_report(P: Substitude, profiles):
    """Every component of every fiber is a poset with one initial object, and
    every profile morphism between the listed profiles induces a bijection
    of components."""
    A = P.colours
    rep = FiberReport()
    profiles = [tuple(p) for p in profiles]
    listed = set(profiles)
    for prof in profiles:
        rep.profiles += 1
        for comp in fibers_of_p_prime(P, prof):
            rep.components += 1
            if not comp.is_poset_component:
                rep.non_posets.append((prof, comp.fiber_members))
            if len(comp.initial_objects) != 1:
                rep.bad_initial.append((prof, comp.fiber_members, len(comp.initial_objects)))
                if comp.is_poset_component and not is_acyclic(comp):
                    rep.noncontractible.append((prof, comp.fiber_members))
        for ms in itertools.product(*[A.into(c) for c in prof]):
            prof2 = tuple(A.src[m] for m in ms)
            if prof2 not in listed:
                continue
            image, count, count2 = component_map(P, ms, prof)
            rep.maps_checked += 1
            if count != count2 or len(set(image.values())) != count2:
                rep.non_bijective.append((prof, ms))
    return rep


def profiles_up_to(P: Substitude, total_size, max_len):
    """Profiles of at most max_len colours whose ordinal sizes sum to at most total_size."""
    A = P.colours
    sizes = [P.ordinal(a).k for a in range(A.n_objects)]
    out = []
    for length in range(0, max_len + 1):
        for prof in itertools.product(range(A.n_objects), repeat=length):
            if sum(sizes[a] for a in prof) <= total_size:
                out.append(prof)
    return out


def comma_cross_check(P: Substitude, k):
    """Compare the strict fibers with the comma categories b/p of the
    projection p of the Grothendieck construction of the arity-k operations:
    same number of components per profile, and p^op constantly disconnected."""
    F = operation_bimodule(P, k)
    G = grothendieck(F)
    B = F.left_cat
    counts = []
    for b in range(B.n_objects):
        prof = tuple(B.objects[b]) if k else ()
        C = under(b, G.p)[0]
        c1 = components(C.n_objects, zip(C.src, C.tgt))[1]
        S = strict_fiber(P, prof)
        c2 = components(S.n_objects, zip(S.src, S.tgt))[1]
        counts.append((prof, c1, c2))
    return counts, is_constantly_disconnected(op_functor(G.p))
