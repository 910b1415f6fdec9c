"""Nerves of finite categories and their exact homology invariants.

Chains are normalised: a d-simplex is a string of d composable
non-identity morphisms, and an inner face whose composite is an identity
is degenerate, hence zero in the normalised complex.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd

from .errors import NotConnected, SizeBudgetExceeded
from .fincat import FinCategory, is_connected

DEFAULT_DIM = 4
DEFAULT_SIMPLEX_BUDGET = 2 * 10**6


@dataclass
class TruncatedNerve:
    base: FinCategory
    dim: int
    simplices: list  # simplices[d] = list of chains (tuples of morphism indices); degree 0 holds objects
    index: list  # index[d] = {chain: position}
    has_higher: bool  # whether chains of length dim + 1 exist

    def counts(self):
        return [len(s) for s in self.simplices]

    def faces(self, d, chain):
        """Yield (sign, face index) pairs of the boundary of a d-simplex; degenerate faces skipped."""
        C = self.base
        if d == 1:
            f = chain[0]
            yield 1, C.tgt[f]
            yield -1, C.src[f]
            return
        idx = self.index[d - 1]
        yield 1, idx[chain[1:]]
        for i in range(1, d):
            h = C.compose(chain[i], chain[i - 1])
            if C.is_identity(h):
                continue
            yield (-1) ** i, idx[chain[: i - 1] + (h,) + chain[i + 1 :]]
        yield (-1) ** d, idx[chain[:-1]]


def nerve(C: FinCategory, dim=DEFAULT_DIM, budget=DEFAULT_SIMPLEX_BUDGET):
    if dim < 0:
        raise ValueError("dimension cap must be nonnegative")
    nonid_out = [[m for m in C.out_of(a) if not C.is_identity(m)] for a in range(C.n_objects)]
    simplices = [[(a,) for a in range(C.n_objects)]]
    level = [(m,) for m in C.non_identity()]
    total = C.n_objects
    has_higher = False
    for d in range(1, dim + 2):
        if d == dim + 1:
            has_higher = bool(level)
            break
        total += len(level)
        if total > budget:
            raise SizeBudgetExceeded(f"nerve of {C.name or 'category'} passes {budget} simplices", (d, total))
        simplices.append(level)
        level = [ch + (g,) for ch in level for g in nonid_out[C.tgt[ch[-1]]]]
    index = [{s: i for i, s in enumerate(ss)} for ss in simplices]
    # the degree-0 index is keyed by object number, not by tuple
    index[0] = {a: a for a in range(C.n_objects)}
    return TruncatedNerve(C, dim, simplices, index, has_higher)


def boundary_columns(N: TruncatedNerve, d):
    """Columns of the boundary map C_d -> C_{d-1} as {row: coefficient} dicts."""
    cols = []
    for ch in N.simplices[d]:
        col = {}
        for sign, r in N.faces(d, ch):
            v = col.get(r, 0) + sign
            if v:
                col[r] = v
            else:
                col.pop(r, None)
        cols.append(col)
    return cols


# -- exact ranks --------------------------------------------------------------


def rank_q(cols):
    """Rank over Q by fraction-free sparse elimination with content removal."""
    pivots = {}
    rank = 0
    for col in cols:
        v = dict(col)
        while v:
            r = max(v)
            p = pivots.get(r)
            if p is None:
                g = 0
                for x in v.values():
                    g = gcd(g, x)
                pivots[r] = {k: x // g for k, x in v.items()}
                rank += 1
                break
            a, b = p[r], v[r]
            w = {}
            for k, x in v.items():
                w[k] = x * a
            for k, x in p.items():
                y = w.get(k, 0) - x * b
                if y:
                    w[k] = y
                else:
                    w.pop(k, None)
            g = 0
            for x in w.values():
                g = gcd(g, x)
            v = {k: x // g for k, x in w.items()} if g > 1 else w
    return rank


def rank_f2(cols):
    """Rank over F2 with columns packed into Python integers."""
    pivots = {}
    rank = 0
    for col in cols:
        v = 0
        for r, x in col.items():
            if x & 1:
                v |= 1 << r
        while v:
            top = v.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = v
                rank += 1
                break
            v ^= p
    return rank


def smith_invariants(cols, nrows):
    """Nonzero invariant factors (d_1 | d_2 | ...) of an integer matrix given by columns."""
    cols = {c: dict(v) for c, v in enumerate(cols) if v}
    rows = {}
    for c, v in cols.items():
        for r in v:
            rows.setdefault(r, set()).add(c)
    units = 0
    # sparse phase: pivot on unit entries, which never change the other factors
    changed = True
    while changed:
        changed = False
        for c in sorted(cols):
            v = cols.get(c)
            if v is None:
                continue
            r = next((r for r in sorted(v) if abs(v[r]) == 1), None)
            if r is None:
                continue
            u = v[r]
            for c2 in sorted(rows[r] - {c}):
                w = cols[c2]
                t = w[r] * u  # w[r] / u since u = +-1
                for rr, x in v.items():
                    y = w.get(rr, 0) - t * x
                    if y:
                        if rr not in w:
                            rows.setdefault(rr, set()).add(c2)
                        w[rr] = y
                    else:
                        if rr in w:
                            del w[rr]
                            rows[rr].discard(c2)
                if not w:
                    del cols[c2]
            for rr in v:
                rows[rr].discard(c)
            del cols[c]
            # row r is now zero outside column c; drop it
            for c2 in rows.pop(r, set()):
                if c2 in cols:
                    cols[c2].pop(r, None)
                    if not cols[c2]:
                        del cols[c2]
            units += 1
            changed = True
    live_rows = sorted({r for v in cols.values() for r in v})
    live_cols = sorted(cols)
    rpos = {r: i for i, r in enumerate(live_rows)}
    M = [[0] * len(live_cols) for _ in live_rows]
    for j, c in enumerate(live_cols):
        for r, x in cols[c].items():
            M[rpos[r]][j] = x
    return [1] * units + _dense_smith(M)


def _dense_smith(M):
    M = [row[:] for row in M]
    m = len(M)
    n = len(M[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        while True:
            p = M[t][t]
            done = True
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // p
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                    if M[i][t]:
                        done = False
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // p
                    for row in M:
                        row[j] -= q * row[t]
                    if M[t][j]:
                        done = False
            if done:
                # pivot must divide the whole remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
                continue
            entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j] and (i == t or j == t)]
            _, i, j = min(entries)
            M[t], M[i] = M[i], M[t]
            for row in M:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(M[t][t]))
        t += 1
    return sorted(diag)


# -- reports --------------------------------------------------------------------


@dataclass
class BettiReport:
    field: str
    betti: tuple
    euler: int  # from simplex counts
    counts: tuple
    exact_through: int  # highest degree whose Betti number is exact

    def euler_from_betti(self):
        return sum((-1) ** i * b for i, b in enumerate(self.betti))


def betti(N: TruncatedNerve, field="q"):
    field = field.lower()
    rank = {"q": rank_q, "f2": rank_f2}[field]
    counts = N.counts()
    top = len(counts) - 1
    ranks = [0] * (top + 2)
    for d in range(1, top + 1):
        ranks[d] = rank(boundary_columns(N, d)) if counts[d] else 0
    b = tuple(counts[d] - ranks[d] - ranks[d + 1] for d in range(top + 1))
    euler = sum((-1) ** d * c for d, c in enumerate(counts))
    exact = top if not N.has_higher else top - 1
    return BettiReport(field, b, euler, tuple(counts), exact)


@dataclass
class H1Group:
    rank: int
    torsion: tuple

    def factors(self):
        """Invariant factors with 0 standing for a copy of Z."""
        return list(self.torsion) + [0] * self.rank

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"


def h1_integral(N: TruncatedNerve):
    if N.dim < 2:
        raise ValueError("integral H_1 needs the nerve to degree 2")
    counts = N.counts()
    d1 = boundary_columns(N, 1) if counts[1] else []
    r1 = rank_q(d1)
    d2 = boundary_columns(N, 2) if len(counts) > 2 and counts[2] else []
    inv = smith_invariants(d2, counts[1])
    return H1Group(counts[1] - r1 - len(inv), tuple(d for d in inv if d > 1))


@dataclass
class GroupPresentation:
    base: int
    generators: list  # morphism indices outside the spanning tree
    relations: list  # words: lists of (generator position, +-1)
    tree: list  # spanning tree morphisms
    abelianization: H1Group = field(default=None)


def pi1_presentation(C: FinCategory, base=None):
    if not is_connected(C):
        raise NotConnected("fundamental group needs a connected category", C.n_objects)
    base = 0 if base is None else base
    nonid = C.non_identity()
    adj = [[] for _ in range(C.n_objects)]
    for m in nonid:
        adj[C.src[m]].append((m, C.tgt[m]))
        adj[C.tgt[m]].append((m, C.src[m]))
    seen = {base}
    tree = []
    queue = deque([base])
    while queue:
        a = queue.popleft()
        for m, b in sorted(adj[a]):
            if b not in seen:
                seen.add(b)
                tree.append(m)
                queue.append(b)
    tree_set = set(tree)
    gens = [m for m in nonid if m not in tree_set]
    gpos = {m: i for i, m in enumerate(gens)}

    def word(m, sign):
        return [(gpos[m], sign)] if m in gpos else []

    relations = []
    for f in nonid:
        for g in C.out_of(C.tgt[f]):
            if C.is_identity(g):
                continue
            h = C.compose(g, f)
            w = word(f, 1) + word(g, 1)
            if not C.is_identity(h):
                w += word(h, -1)
            relations.append(w)
    cols = []
    for w in relations:
        v = {}
        for gi, s in w:
            v[gi] = v.get(gi, 0) + s
        v = {k: x for k, x in v.items() if x}
        if v:
            cols.append(v)
    inv = smith_invariants(cols, len(gens))
    ab = H1Group(len(gens) - len(inv), tuple(d for d in inv if d > 1))
    return GroupPresentation(base, gens, relations, tree, ab)


def homology_report(C: FinCategory, dim=DEFAULT_DIM, field="q"):
    """JSON-ready report used by the CLI."""
    N = nerve(C, max(dim, 2) if field == "z1" else dim)
    out = {"complex": N.counts(), "field": field}
    if field == "z1":
        h = h1_integral(N)
        out.update(betti=None, euler=None, h1_factors=h.factors())
    else:
        rep = betti(N, field)
        out.update(betti=list(rep.betti), euler=rep.euler, h1_factors=None, exact_through=rep.exact_through)
    return out
