"""Sigma-free substitudes in Set, given by their nonsymmetric operation data.

A substitude here is a colour category A together with operation sets
d(P)(a_1..a_k; a), a unit eta sending A-morphisms to unary operations, and
substitution.  Profiles are tuples of A-object indices.  Substitution

    compose(profile, out, op, subs) -> (profile2, op2, perm)

takes op in d(P)(profile; out) and subs[i] = (profile_i, op_i) with op_i in
d(P)(profile_i; profile[i]).  The symmetric composite is op2 with its inputs
permuted: input j of op2 is input perm[j] of the concatenated profiles.
"""
from __future__ import annotations

import itertools

from ..errors import AxiomFailure, SizeBudgetExceeded
from ..fincat import Bimodule, FinCategory, product_category

DEFAULT_AXIOM_BUDGET = 2 * 10**5


class Substitude:
    name = "substitude"
    colours: FinCategory
    max_arity = None  # None: operations of every arity may exist

    # -- to be provided --------------------------------------------------------
    def ops(self, profile, out):
        raise NotImplementedError

    def compose(self, profile, out, op, subs):
        raise NotImplementedError

    def unit(self, m):
        raise NotImplementedError

    # -- derived structure -----------------------------------------------------
    def identity_op(self, a):
        return self.unit(self.colours.identities[a])

    def act_out(self, m, profile, op):
        """Right action of an A-morphism on the output."""
        A = self.colours
        _, op2, _ = self.compose((A.src[m],), A.tgt[m], self.unit(m), [(profile, op)])
        return op2

    def act_in(self, ms, profile, op, out):
        """Left action: ms[i]: b_i -> profile[i]; returns the operation on (b_i)."""
        A = self.colours
        subs = [((A.src[m],), self.unit(m)) for m in ms]
        _, op2, _ = self.compose(profile, out, op, subs)
        return op2

    def arities(self, cap):
        top = cap if self.max_arity is None else min(cap, self.max_arity)
        return range(top + 1)

    def profiles(self, k):
        return itertools.product(range(self.colours.n_objects), repeat=k)

    def ops_into(self, out, max_arity):
        """All (profile, op) with the given output and arity <= max_arity."""
        res = []
        for k in self.arities(max_arity):
            for prof in self.profiles(k):
                for op in self.ops(prof, out):
                    res.append((prof, op))
        return res

    def unaries_into(self, a):
        """(source colour, A-morphism, unary op) for every A-morphism into a."""
        A = self.colours
        return [(A.src[m], m, self.unit(m)) for m in A.into(a)]

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def _index_of(values, x):
    try:
        return values.index(x)
    except ValueError:
        raise AxiomFailure("an action left the operation set", x) from None


def operation_bimodule(P: Substitude, k):
    """d(P) in arity k as a bimodule from A^k to A."""
    A = P.colours
    B = product_category([A] * k)
    values = {}
    for b in range(B.n_objects):
        prof = tuple(B.objects[b]) if k else ()
        for a in range(A.n_objects):
            values[(b, a)] = list(P.ops(prof, a))

    def left(phi, a, i):
        b = B.src[phi]
        prof2 = tuple(B.objects[B.tgt[phi]]) if k else ()
        op = values[(B.tgt[phi], a)][i]
        ms = tuple(B.labels[phi]) if k else ()
        return _index_of(values[(b, a)], P.act_in(ms, prof2, op, a))

    def right(psi, b, i):
        prof = tuple(B.objects[b]) if k else ()
        op = values[(b, A.src[psi])][i]
        return _index_of(values[(b, A.tgt[psi])], P.act_out(psi, prof, op))

    return Bimodule(B, A, values, left, right)


def check_substitude(P: Substitude, max_arity=2, inner_arity=1, budget=DEFAULT_AXIOM_BUDGET):
    """Unit laws, functoriality and faithfulness of eta, and associativity of
    substitution: op and subs of arity <= max_arity, subsubs of arity <= inner_arity."""
    A = P.colours
    seen = set()
    for m in range(A.n_morphisms):
        u = P.unit(m)
        if u not in P.ops((A.src[m],), A.tgt[m]):
            raise AxiomFailure("unit of a morphism is not a unary operation", m)
        key = (A.src[m], A.tgt[m], u)
        if key in seen:
            raise AxiomFailure("unit is not faithful", m)
        seen.add(key)
    for f in range(A.n_morphisms):
        for g in A.out_of(A.tgt[f]):
            prof, op, _ = P.compose((A.src[g],), A.tgt[g], P.unit(g), [((A.src[f],), P.unit(f))])
            if op != P.unit(A.compose(g, f)):
                raise AxiomFailure("unit is not functorial", (g, f))
    count = 0
    for out in range(A.n_objects):
        for prof, op in P.ops_into(out, max_arity):
            ids = [((a,), P.identity_op(a)) for a in prof]
            if P.compose(prof, out, op, ids) != (prof, op, tuple(range(len(prof)))):
                raise AxiomFailure("right unit law fails", (prof, out))
            if P.compose((out,), out, P.identity_op(out), [(prof, op)]) != (prof, op, tuple(range(len(prof)))):
                raise AxiomFailure("left unit law fails", (prof, out))
            for subs in itertools.product(*[P.ops_into(a, max_arity) for a in prof]):
                count += _check_assoc(P, prof, out, op, list(subs), inner_arity)
                if count > budget:
                    raise SizeBudgetExceeded("substitude axiom check over budget", count)
    return P


def _blocks(lengths):
    """Offsets of consecutive blocks of the given lengths."""
    offs, pos = [], 0
    for n in lengths:
        offs.append(pos)
        pos += n
    return offs


def _check_assoc(P, prof, out, op, subs, max_arity):
    """(op o subs) o subsubs == op o (subs o subsubs), including the input matching.
    Returns the number of cases checked."""
    n = 0
    prof2, op2, perm = P.compose(prof, out, op, subs)
    if op2 not in P.ops(prof2, out):
        raise AxiomFailure("substitution left the operation set", (prof, out, op))
    if sorted(perm) != list(range(len(prof2))):
        raise AxiomFailure("substitution does not permute the inputs", perm)
    concat = [a for p, _ in subs for a in p]
    starts = _blocks([len(p) for p, _ in subs])
    for ss in itertools.product(*[P.ops_into(a, max_arity) for a in concat]):
        n += 1
        grand = _blocks([len(q) for q, _ in ss])
        ss2 = [ss[perm[j]] for j in range(len(prof2))]
        prof3, op3, perm3 = P.compose(prof2, out, op2, ss2)
        offs2 = _blocks([len(q) for q, _ in ss2])
        left = []
        for x in perm3:
            j = max(i for i, o in enumerate(offs2) if o <= x and len(ss2[i][0]) > x - o)
            left.append(grand[perm[j]] + x - offs2[j])
        inner = []
        for i, (p, o) in enumerate(subs):
            block = list(ss[starts[i] : starts[i] + len(p)])
            inner.append(P.compose(p, prof[i], o, block))
        prof4, op4, perm4 = P.compose(prof, out, op, [(q, o) for q, o, _ in inner])
        offs4 = _blocks([len(q) for q, _, _ in inner])
        right = []
        for x in perm4:
            i = max(i for i, o in enumerate(offs4) if o <= x and len(inner[i][0]) > x - o)
            base = grand[starts[i]] if starts[i] < len(grand) else 0
            right.append(base + inner[i][2][x - offs4[i]])
        if (prof3, op3, left) != (prof4, op4, right):
            raise AxiomFailure("substitution is not associative", (prof, out, op))
    return n
