"""n-ordinals, their maps, quasibijection categories and Milgram posets.

Elements of an ordinal of size k are 0..k-1 internally; the literal syntax
and anything user-facing is 1-based.  An ordinal is stored by its full
pair-level vector, but it is determined by the k-1 levels between
neighbours since level(i, l) = min(level(i, j), level(j, l)).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotAMorphism, NotAPoset, SizeBudgetExceeded
from .fincat import FinCategory, FinFunctor, comma

DEFAULT_MAX_DEPTH = 5
DEFAULT_MAX_SIZE = 5


def _pairs(k):
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


@dataclass(frozen=True, order=True)
class NOrdinal:
    n: int
    k: int
    levels: tuple  # level of (i, j) for i < j, pairs in lexicographic order

    def level(self, i, j):
        if i > j:
            i, j = j, i
        # index of (i, j) in the lexicographic pair list
        return self.levels[i * self.k - i * (i + 1) // 2 + (j - i - 1)]

    def steps(self):
        return tuple(self.level(i, i + 1) for i in range(self.k - 1))

    def relation(self):
        return ComplementaryRelation(self.k, {(i, j): self.level(i, j) for i, j in _pairs(self.k)})

    def __str__(self):
        return format_ordinal(self)


def from_steps(n, steps):
    """The ordinal whose neighbour levels are ``steps``."""
    k = len(steps) + 1
    levels = tuple(min(steps[i:j]) for i, j in _pairs(k))
    for s in steps:
        if not 0 <= s < n:
            raise ValueError(f"level {s} outside 0..{n - 1}")
    return NOrdinal(n, k, levels)


def unit(n):
    """The terminal ordinal U_n."""
    return NOrdinal(n, 1, ())


def empty(n):
    return NOrdinal(n, 0, ())


def linear(n, k, level=0):
    return from_steps(n, [level] * (k - 1)) if k else empty(n)


def make_ordinal(n, k, levels: dict):
    """Build from a dict {(i, j): level} with 0-based i < j and validate."""
    vec = tuple(levels[p] for p in _pairs(k))
    T = NOrdinal(n, k, vec)
    check_ordinal(T)
    return T


def check_ordinal(T: NOrdinal):
    if len(T.levels) != T.k * (T.k - 1) // 2:
        raise ValueError("level vector has the wrong length")
    if any(not 0 <= x < T.n for x in T.levels):
        raise ValueError("level outside 0..n-1")
    for i, j, l in itertools.combinations(range(T.k), 3):
        if T.level(i, l) != min(T.level(i, j), T.level(j, l)):
            raise ValueError(f"min-identity fails on {(i + 1, j + 1, l + 1)}")
    return T


@lru_cache(maxsize=None)
def _enumerate(n, k):
    if k <= 1:
        return (NOrdinal(n, k, ()),)
    out = [from_steps(n, s) for s in itertools.product(range(n), repeat=k - 1)]
    return tuple(sorted(out, key=lambda T: T.levels))


def enumerate_ordinals(n, k, max_count=10**5):
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if k > 1 and n ** (k - 1) > max_count:
        raise SizeBudgetExceeded(f"{n}^{k - 1} ordinals exceed the budget", (n, k))
    return list(_enumerate(n, k))


# -- literal syntax ------------------------------------------------------------

_LIT = re.compile(r"^\s*n\s*=\s*(\d+)\s*;\s*k\s*=\s*(\d+)\s*;\s*levels\s*=\s*\[(.*)\]\s*$")
_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*:\s*(\d+)")


def format_ordinal(T: NOrdinal):
    body = ",".join(f"({i + 1},{j + 1}):{T.level(i, j)}" for i, j in _pairs(T.k))
    return f"n={T.n};k={T.k};levels=[{body}]"


def parse_ordinal(text):
    m = _LIT.match(text)
    if not m:
        raise ValueError(f"not an ordinal literal: {text!r}")
    n, k = int(m.group(1)), int(m.group(2))
    levels = {}
    for i, j, p in _PAIR.findall(m.group(3)):
        levels[(int(i) - 1, int(j) - 1)] = int(p)
    if set(levels) != set(_pairs(k)):
        raise ValueError("literal must list every pair exactly once")
    return make_ordinal(n, k, levels)


# -- complementary relations and domination --------------------------------------


@dataclass(frozen=True)
class ComplementaryRelation:
    """For each unordered pair exactly one entry (i, j) -> p meaning i <_p j."""

    size: int
    rel: dict

    def __post_init__(self):
        seen = set()
        for i, j in self.rel:
            key = (min(i, j), max(i, j))
            if i == j or key in seen:
                raise ValueError("pair related twice or reflexively")
            seen.add(key)
        if len(seen) != self.size * (self.size - 1) // 2:
            raise ValueError("some pair is unrelated")

    def lookup(self, i, j):
        """(+1, p) if i <_p j, (-1, p) if j <_p i."""
        if (i, j) in self.rel:
            return 1, self.rel[(i, j)]
        return -1, self.rel[(j, i)]

    def transport(self, f):
        """Relabel along a bijection given as a sequence i -> f[i]."""
        return ComplementaryRelation(self.size, {(f[i], f[j]): p for (i, j), p in self.rel.items()})


def dominates(X: ComplementaryRelation, Y: ComplementaryRelation):
    """Every i <_p j of X appears in Y as i <_r j with r >= p or j <_r i with r > p."""
    if X.size != Y.size:
        return False
    for (i, j), p in X.rel.items():
        d, r = Y.lookup(i, j)
        if not (r >= p if d > 0 else r > p):
            return False
    return True


# -- maps ----------------------------------------------------------------------


@dataclass(frozen=True)
class OrdinalMap:
    source: NOrdinal
    target: NOrdinal
    fn: tuple

    def __call__(self, i):
        return self.fn[i]

    def is_bijective(self):
        return self.source.k == self.target.k and len(set(self.fn)) == self.source.k

    def is_surjective(self):
        return set(self.fn) == set(range(self.target.k))


def violation(source, target, fn):
    """First pair (i, j, p) breaking the map clauses, or None."""
    for i, j in _pairs(source.k):
        p = source.level(i, j)
        a, b = fn[i], fn[j]
        if a == b:
            continue
        r = target.level(a, b)
        if a < b and r >= p or a > b and r > p:
            continue
        return (i, j, p)
    return None


def check_map(source, target, fn):
    fn = tuple(fn)
    if source.n != target.n:
        raise NotAMorphism("depths differ", (source.n, target.n))
    if len(fn) != source.k or any(not 0 <= x < target.k for x in fn):
        raise NotAMorphism("underlying function has the wrong shape", fn)
    bad = violation(source, target, fn)
    if bad is not None:
        i, j, p = bad
        raise NotAMorphism(f"pair {i + 1} <_{p} {j + 1} is not respected", (i + 1, j + 1, p))
    return OrdinalMap(source, target, fn)


def is_map(source, target, fn):
    return violation(source, target, fn) is None


def compose(tau: OrdinalMap, sigma: OrdinalMap):
    """tau after sigma."""
    if sigma.target != tau.source:
        raise NotAMorphism("maps are not composable")
    return OrdinalMap(sigma.source, tau.target, tuple(tau.fn[x] for x in sigma.fn))


def identity(T):
    return OrdinalMap(T, T, tuple(range(T.k)))


def to_unit(T):
    return OrdinalMap(T, unit(T.n), (0,) * T.k)


def fiber_elements(sigma: OrdinalMap, i):
    return [x for x in range(sigma.source.k) if sigma.fn[x] == i]


def restrict(T: NOrdinal, elems):
    """Sub-ordinal on the given increasing element list, renumbered."""
    elems = list(elems)
    m = len(elems)
    levels = tuple(T.level(elems[a], elems[b]) for a, b in _pairs(m))
    return NOrdinal(T.n, m, levels)


def fiber(sigma: OrdinalMap, i):
    if not 0 <= i < sigma.target.k:
        raise ValueError("fiber index outside the target")
    return restrict(sigma.source, fiber_elements(sigma, i))


def ordinal_maps(source, target, surjective=False):
    """All ordinal maps source -> target, lexicographic in the underlying function."""
    out = []
    for fn in itertools.product(range(target.k), repeat=source.k):
        if surjective and len(set(fn)) != target.k:
            continue
        if violation(source, target, fn) is None:
            out.append(OrdinalMap(source, target, fn))
    return out


def quasibijections(source, target):
    if source.k != target.k:
        return []
    return [
        OrdinalMap(source, target, p)
        for p in itertools.permutations(range(source.k))
        if violation(source, target, p) is None
    ]


def lex_substitute(S: NOrdinal, parts):
    """An ordinal T over S whose fiber over s is parts[s], with its projection.

    T lists the blocks in the order of S and is built from neighbour steps:
    inside a block the block's own steps, between two consecutive nonempty
    blocks the level of that pair in S.  Levels across blocks are therefore
    never above the level in S, so the projection is a map.
    """
    if len(parts) != S.k:
        raise ValueError("need one part per element of S")
    elems = [(s, t) for s in range(S.k) for t in range(parts[s].k)]
    steps = []
    prev = None
    for s in range(S.k):
        if parts[s].k == 0:
            continue
        if prev is not None:
            steps.append(S.level(prev, s))
        steps.extend(parts[s].steps())
        prev = s
    T = from_steps(S.n, steps) if elems else empty(S.n)
    return T, OrdinalMap(T, S, tuple(s for s, t in elems)), elems


# -- suspension ------------------------------------------------------------------


def suspend(T: NOrdinal, p):
    if not 0 <= p <= T.n:
        raise ValueError(f"suspension index {p} outside 0..{T.n}")
    return NOrdinal(T.n + 1, T.k, tuple(x if x < p else x + 1 for x in T.levels))


def suspend_map(sigma: OrdinalMap, p):
    return OrdinalMap(suspend(sigma.source, p), suspend(sigma.target, p), sigma.fn)


# -- categories --------------------------------------------------------------------


def _perm_compose(g, f):
    return tuple(g[x] for x in f)


@lru_cache(maxsize=None)
def quasibijection_category(n, k, max_size=DEFAULT_MAX_SIZE, max_depth=DEFAULT_MAX_DEPTH):
    """Q_n(k): ordinals of size k and all quasibijections between them.

    A morphism is labelled by its underlying permutation (as the tuple of
    images); identities carry the label ("id", a).
    """
    if k > max_size or n > max_depth:
        raise SizeBudgetExceeded(f"Q_{n}({k}) is over the budget", (n, k))
    objs = enumerate_ordinals(n, k)
    ident = tuple(range(k))
    mors = []
    for a, T in enumerate(objs):
        for b, S in enumerate(objs):
            for q in quasibijections(T, S):
                mors.append((a, b, ("id", a) if a == b and q.fn == ident else q.fn))

    def perm_of(entry):
        return ident if entry[2][0] == "id" else entry[2]

    def comp(g, f):
        p = _perm_compose(perm_of(g), perm_of(f))
        return ("id", f[0]) if f[0] == g[1] and p == ident else p

    cat = FinCategory.from_labelled(objs, mors, comp, name=f"Q_{n}({k})")
    return cat


def underlying_perm(cat, m):
    lab = cat.labels[m]
    if isinstance(lab, tuple) and lab and lab[0] == "id":
        obj = cat.objects[cat.src[m]]
        return tuple(range(obj if isinstance(obj, int) else obj.k))
    return lab


@lru_cache(maxsize=None)
def symmetric_group_category(k):
    perms = list(itertools.permutations(range(k)))
    ident = tuple(range(k))
    mors = [(0, 0, ("id", 0) if p == ident else p) for p in perms]

    def perm_of(entry):
        return ident if entry[2][0] == "id" else entry[2]

    def comp(g, f):
        p = _perm_compose(perm_of(g), perm_of(f))
        return ("id", 0) if p == ident else p

    return FinCategory.from_labelled([k], mors, comp, name=f"S({k})")


def perm_index(k, p):
    S = symmetric_group_category(k)
    ident = tuple(range(k))
    return S.label_index[(0, 0, ("id", 0) if tuple(p) == ident else tuple(p))]


@lru_cache(maxsize=None)
def total_order_functor(n, k):
    Q = quasibijection_category(n, k)
    S = symmetric_group_category(k)
    mor_map = [perm_index(k, underlying_perm(Q, m)) for m in range(Q.n_morphisms)]
    return FinFunctor(Q, S, [0] * Q.n_objects, mor_map)


def total_order(T: NOrdinal):
    """[T] as a plain finite ordinal."""
    return T.k


def is_poset(C: FinCategory):
    """At most one morphism between any two objects and none back except identities."""
    seen = set()
    for s, t in zip(C.src, C.tgt):
        if (s, t) in seen:
            return False
        seen.add((s, t))
    return all((t, s) not in seen for s, t in seen if s != t)


@lru_cache(maxsize=None)
def milgram_poset(n, k):
    """J_n(k) as the comma category [-]/k; objects are (ordinal index, permutation index)."""
    cat, _proj = comma(total_order_functor(n, k), 0)
    if not is_poset(cat):
        raise NotAPoset(f"J_{n}({k}) is not a poset", (n, k))
    cat.name = f"J_{n}({k})"
    return cat


def milgram_object(n, k, obj):
    """Decode a Milgram poset object into (ordinal, permutation)."""
    a, f = obj
    Q = quasibijection_category(n, k)
    S = symmetric_group_category(k)
    return Q.objects[a], underlying_perm(S, f)
