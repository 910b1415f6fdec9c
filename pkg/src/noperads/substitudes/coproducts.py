"""Semifree coproducts X + eta_!(K) and their shuffle presentation.

The coproduct is the colimit of X~ over a truncated classifier: an object
(out, profile, op, cols) carries the tuples of X- and K-values on its inputs
(L-values too for free extension classifiers), and a morphism multiplies the
X-blocks in the algebra and moves K-values along A-morphisms.

The shuffle object W is the sum, over all colour words in X and K, of the
convolution of U(X) and K in the order of the word.  The retraction W -> coproduct
sends a summand element to its class; the section picks the terminal factorization
through an alternating word (terminal when the colour category is discrete).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import RetractionFailure, TruncationRequired
from ..fincat import SetPresheaf, colim
from .base import Substitude
from .classifiers import K, L, X, ClassifierCat, classifier_pc, is_alternating, tau_factorization
from .convolution import AlgebraInSet, _class_lookup, convolution


def presheaf_act(Y: SetPresheaf, m, v):
    """Action of an A-morphism on an element value of a presheaf."""
    A = Y.base
    return Y.values[A.tgt[m]][Y.action[m][Y.values[A.src[m]].index(v)]]


def _eta_inverse(P: Substitude):
    """(source, target, unary op) -> the A-morphism it comes from."""
    A = P.colours
    return {(A.src[m], A.tgt[m], P.unit(m)): m for m in range(A.n_morphisms)}


def tilde_functor(C: ClassifierCat, Xa: AlgebraInSet, Kp: SetPresheaf, Lp: SetPresheaf = None, f=None, g=None):
    """X~ on the classifier.  f(c, k) sends K(c) to L(c) and g(c, k) sends K(c)
    to X(c); they are only needed when the classifier has L-edges."""
    P, cat = C.substitude, C.category
    eta = _eta_inverse(P)
    pres = {X: Xa.carrier, K: Kp, L: Lp}
    values = []
    for out, prof, op, cols in cat.objects:
        values.append(list(itertools.product(*[pres[col].values[c] for c, col in zip(prof, cols)])))
    pos = [{v: i for i, v in enumerate(vals)} for vals in values]

    def act(m, i):
        a, b = cat.src[m], cat.tgt[m]
        vals = values[a][i]
        perm = C.perms[m]
        concat = [None] * len(perm)
        for j, q in enumerate(perm):
            concat[q] = vals[j]
        _, prof_b, _, cols_b = cat.objects[b]
        res, p0 = [], 0
        for (p, o, cs), c, col in zip(cat.labels[m], prof_b, cols_b):
            block = concat[p0 : p0 + len(p)]
            p0 += len(p)
            if col == X:
                args = tuple(v if cc == X else g(cin, v) for v, cc, cin in zip(block, cs, p))
                y = Xa.mult(p, c, o, args)
                if y is None:
                    raise TruncationRequired("the algebra is truncated below the classifier", (m, args))
            else:
                alpha = eta[(p[0], c, o)]
                v = block[0]
                if col == L and cs == (K,):
                    v = f(p[0], v)
                y = presheaf_act(pres[col], alpha, v)
            res.append(y)
        return pos[b][tuple(res)]

    return SetPresheaf.from_function(cat, values, act)


@dataclass
class ShuffleCoproduct:
    """The coproduct, the shuffle object and the checked retraction data.

    coproduct.values[a] holds class representatives (object index, values);
    shuffle.values[a] holds (word, profile, op, xs); retraction[a] and
    section[a] are index maps between them."""

    substitude: str
    truncation: dict
    coproduct: SetPresheaf
    shuffle: SetPresheaf
    alternating: list  # per colour: indices of shuffle elements on alternating words
    retraction: list
    section: list
    checks: dict = field(default_factory=dict)

    def coproduct_count(self):
        return self.coproduct.size()

    def alternating_count(self):
        return sum(len(a) for a in self.alternating)

    def shuffle_count(self):
        return self.shuffle.size()


def _shuffle_object(P, Xa, Kp, word_list):
    """Sum over words of the convolutions, with the per-word summands."""
    A = P.colours
    values = [[] for _ in range(A.n_objects)]
    offsets, convs = {}, {}
    for word in word_list:
        Xs = [Xa.carrier if c == X else Kp for c in word]
        Z = convolution(P, Xs)
        convs[word] = (Z, Xs)
        for a in range(A.n_objects):
            offsets[(word, a)] = len(values[a])
            values[a].extend((word,) + e for e in Z.values[a])
    action = []
    for m in range(A.n_morphisms):
        s, t = A.src[m], A.tgt[m]
        row = []
        for word in word_list:
            Z = convs[word][0]
            row.extend(offsets[(word, t)] + j for j in Z.action[m])
        action.append(tuple(row))
    return SetPresheaf(A, values, action), offsets, convs


def shuffle_coproduct(P: Substitude, Xa: AlgebraInSet, Kp: SetPresheaf, degree_cap=None, x_cap=None, classifier=None):
    """X + eta_!(K) up to degree_cap K-letters, presented as a retract of the
    shuffle object.  Raises RetractionFailure if the section followed by the
    retraction is not the identity, or if either map is not natural."""
    A = P.colours
    if degree_cap is None:
        if any(Kp.values) and any(Xa.carrier.values):
            raise TruncationRequired("the coproduct is infinite; supply a degree cap")
        degree_cap = 0
    if x_cap is None:
        x_cap = degree_cap + 1
    C = classifier if classifier is not None else classifier_pc(P, x_cap, degree_cap)
    cat = C.category
    Xt = tilde_functor(C, Xa, Kp)
    co = colim(Xt)

    # the coproduct as a presheaf on A
    cls_of = co.cocone
    per_colour = [[] for _ in range(A.n_objects)]
    cpos = {}
    for c, (o, i) in enumerate(co.classes):
        out = cat.objects[o][0]
        cpos[c] = (out, len(per_colour[out]))
        per_colour[out].append((o, Xt.values[o][i]))

    def co_act(m, i):
        o, vals = per_colour[A.src[m]][i]
        out, prof, op, cols = cat.objects[o]
        o2 = cat.object_index.get((A.tgt[m], prof, P.act_out(m, prof, op), cols))
        if o2 is None:
            raise TruncationRequired("the output action leaves the truncation", (m, o))
        return cpos[cls_of[o2][Xt.values[o2].index(vals)]][1]

    coproduct = SetPresheaf.from_function(A, per_colour, co_act)

    # the shuffle object over every colour word present in the classifier
    word_list = sorted({obj[3] for obj in cat.objects}, key=lambda w: (len(w), w))
    W, offsets, convs = _shuffle_object(P, Xa, Kp, word_list)
    lookups = {}

    def w_index(word, a, prof, op, xs):
        if word not in lookups:
            Z, Xs = convs[word]
            lookups[word] = _class_lookup(P, Xs, Z)
        return offsets[(word, a)] + lookups[word](a, prof, op, xs)

    # retraction, checked on every raw element of every word object
    retraction = [dict() for _ in range(A.n_objects)]
    raw_checked = 0
    for o, (out, prof, op, cols) in enumerate(cat.objects):
        for i, vals in enumerate(Xt.values[o]):
            w = w_index(cols, out, prof, op, vals)
            c = cpos[cls_of[o][i]][1]
            raw_checked += 1
            if retraction[out].setdefault(w, c) != c:
                raise RetractionFailure("the retraction depends on the representative", (o, vals))
    missing = [(a, w) for a in range(A.n_objects) for w in range(len(W.values[a])) if w not in retraction[a]]
    if missing:
        raise TruncationRequired("shuffle elements without a classifier object", missing[:3])

    # section through any factorization into an alternating word; finality makes
    # the choice irrelevant, which is checked on every element
    marked = set(C.marked)
    section = [dict() for _ in range(A.n_objects)]
    for o in range(cat.n_objects):
        out = cat.objects[o][0]
        m = next((m for m in cat.out_of(o) if cat.tgt[m] in marked), None)
        if m is None:
            raise TruncationRequired("an object has no alternating factorization in the truncation", o)
        t = cat.tgt[m]
        _, tprof, top, tcols = cat.objects[t]
        for i, vals in enumerate(Xt.values[o]):
            j = Xt.action[m][i]
            w = w_index(tcols, out, tprof, top, Xt.values[t][j])
            c = cpos[cls_of[o][i]][1]
            if section[out].setdefault(c, w) != w:
                raise RetractionFailure("the section depends on the representative", (o, vals))
    alternating = [
        sorted(w for w in range(len(W.values[a])) if is_alternating(W.values[a][w][0])) for a in range(A.n_objects)
    ]
    for a in range(A.n_objects):
        for c in range(len(per_colour[a])):
            if retraction[a][section[a][c]] != c:
                raise RetractionFailure("section followed by retraction is not the identity", (a, c))
    # the image of the section is exactly the alternating part
    for a in range(A.n_objects):
        if sorted(section[a].values()) != alternating[a]:
            raise RetractionFailure("the section does not land bijectively on alternating words", a)

    # naturality in A
    natural = 0
    for m in range(A.n_morphisms):
        s, t = A.src[m], A.tgt[m]
        for w in range(len(W.values[s])):
            natural += 1
            if retraction[t][W.action[m][w]] != coproduct.action[m][retraction[s][w]]:
                raise RetractionFailure("the retraction is not a map of presheaves", (m, w))
        for c in range(len(per_colour[s])):
            natural += 1
            if section[t][coproduct.action[m][c]] != W.action[m][section[s][c]]:
                raise RetractionFailure("the section is not a map of presheaves", (m, c))

    return ShuffleCoproduct(
        P.name,
        dict(C.truncation),
        coproduct,
        W,
        alternating,
        [tuple(r[w] for w in range(len(W.values[a]))) for a, r in enumerate(retraction)],
        [tuple(s[c] for c in range(len(per_colour[a]))) for a, s in enumerate(section)],
        {"raw_elements": raw_checked, "naturality": natural, "objects": cat.n_objects},
    )


def retract_word(C: ClassifierCat, Xt: SetPresheaf, obj, vals):
    """The alternating word and values that an element of a word object
    retracts to through the terminal factorization: (target object, values)."""
    o = C.index(obj)
    t, m = tau_factorization(C, o)
    return C.category.objects[t], Xt.values[t][Xt.action[m][Xt.values[o].index(tuple(vals))]]
