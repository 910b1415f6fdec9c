"""Verification suite: named checks with parameters, verdicts and witnesses.

A check returns (passed, witness).  Budget overruns and truncation errors
turn into the verdict "inconclusive-at-truncation"; any other exception is
captured as a failure with its message and witness.  Reports are ordered by
the fixed check order below, never by completion time.
"""
from __future__ import annotations

import json
import os
import random
import signal
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .errors import (
    NoperadsError,
    NotFoundAtTruncation,
    SizeBudgetExceeded,
    TruncationRequired,
    UnknownCheck,
)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive-at-truncation"
CONFIG_VERSION = 1
BUDGET_ENV = "NOPERADS_BUDGET_SECONDS"


class BudgetExpired(Exception):
    pass


class ConfigError(NoperadsError):
    pass


@dataclass
class VerificationReport:
    id: str
    anchor: str
    params: dict
    verdict: str
    witness: dict
    wall_time: float = 0.0

    def to_dict(self, timings=False):
        d = {"id": self.id, "anchor": self.anchor, "params": self.params, "verdict": self.verdict, "witness": self.witness}
        if timings:
            d["wall_time"] = round(self.wall_time, 3)
        return d


@dataclass
class CheckEntry:
    id: str
    params: dict = field(default_factory=dict)
    budget_seconds: float = None


@dataclass
class SuiteConfig:
    version: int = CONFIG_VERSION
    seed: int = 0
    checks: list = field(default_factory=list)
    workers: int = 1


@dataclass
class Check:
    id: str
    anchor: str
    statement: str
    caveats: str
    defaults: dict
    fn: object


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=str)
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


# -- checks ---------------------------------------------------------------------------------


def _ordinals_count(p, rng):
    from .ordinals import enumerate_ordinals

    bad = []
    for n in range(1, p["n_max"] + 1):
        for k in range(0, p["k_max"] + 1):
            # levels of consecutive pairs are free, all others are their minima
            expected = 1 if k == 0 else n ** (k - 1)
            got = len(enumerate_ordinals(n, k))
            if got != expected:
                bad.append([n, k, got, expected])
    return not bad, {"mismatches": bad}


def _betti_of(cat, dim, field="q"):
    from .homotopy import betti, nerve

    return betti(nerve(cat, dim), field)


def _milgram_q22(p, rng):
    from .ordinals import quasibijection_category

    rep = _betti_of(quasibijection_category(2, 2), 2)
    got = list(rep.betti[:2])
    return got == [1, 1], {"betti_q": got, "expected": [1, 1], "counts": list(rep.counts)}


def _milgram_j22(p, rng):
    from .ordinals import milgram_poset

    rep = _betti_of(milgram_poset(2, 2), 2)
    got = list(rep.betti[:2])
    return got == [1, 1], {"betti_q": got, "expected": [1, 1], "counts": list(rep.counts)}


def configuration_betti(n, k):
    """Betti numbers of the ordered configuration space of k points in R^n:
    the coefficients of prod_{j < k} (1 + j t^(n-1))."""
    poly = [1]
    for j in range(1, k):
        nxt = poly + [0] * (n - 1)
        for d, c in enumerate(poly):
            nxt[d + n - 1] += j * c
        poly = nxt
    return poly


def _cells(p):
    cells = p.get("cells")
    return [[p["n"], p["k"]]] if cells is None else cells


def _milgram_poset(p, rng):
    from .ordinals import milgram_poset

    rows, ok = [], True
    for n, k in _cells(p):
        rep = _betti_of(milgram_poset(n, k), p["D"] + 1)
        top = min(p["D"], rep.exact_through)
        want = (configuration_betti(n, k) + [0] * (top + 1))[: top + 1]
        got = list(rep.betti[: top + 1])
        ok &= got == want
        rows.append({"n": n, "k": k, "betti_q": got, "expected": want})
    return ok, {"cells": rows, "D": p["D"]}


def _milgram_q32(p, rng):
    from .homotopy import h1_integral, nerve
    from .ordinals import quasibijection_category

    C = quasibijection_category(3, 2)
    N = nerve(C, 3)
    q = _betti_of(C, 3, "q")
    f2 = _betti_of(C, 3, "f2")
    h1 = h1_integral(N)
    w = {
        "betti_q": list(q.betti[:3]),
        "betti_f2": list(f2.betti[:3]),
        "h1": str(h1),
        "euler": q.euler,
        "counts": list(q.counts),
    }
    ok = w["betti_q"] == [1, 0, 0] and w["betti_f2"] == [1, 1, 1] and (h1.rank, h1.torsion) == (0, (2,)) and q.euler == 1
    return ok, w


def _pi1_abelian(p, rng):
    from .homotopy import h1_integral, nerve, pi1_presentation
    from .ordinals import quasibijection_category

    rows, ok = [], True
    for n, k in _cells(p):
        C = quasibijection_category(n, k)
        ab = pi1_presentation(C).abelianization
        h1 = h1_integral(nerve(C, 2))
        good = (ab.rank, ab.torsion) == (1, ()) and (ab.rank, ab.torsion) == (h1.rank, h1.torsion)
        ok &= good
        rows.append({"n": n, "k": k, "pi1_ab": str(ab), "h1": str(h1), "ok": good})
    return ok, {"cells": rows}


def _stability(p, rng):
    from .ordinals import quasibijection_category

    cells = _cells(p)
    D = p["D"]
    rows, ok = [], True
    for n, k in cells:
        # one more degree of the nerve makes the Betti numbers exact through D
        rep = _betti_of(quasibijection_category(n, k), D + 1)
        top = min(n - 2, D, rep.exact_through)
        ok &= rep.betti[0] == 1 and all(rep.betti[i] == 0 for i in range(1, top + 1))
        rows.append({"n": n, "k": k, "betti_q": list(rep.betti[: rep.exact_through + 1]), "checked_through": top})
    return ok, {"cells": rows, "D": D}


def _fiber_report(p):
    from .substitudes import NOSubstitude, constant_disconnection_report
    from .substitudes.fibers import profiles_up_to

    P = NOSubstitude(p["n"], p["total_size"], p["kind"])
    profiles = profiles_up_to(P, p["total_size"], p["max_vertices"])
    return constant_disconnection_report(P, profiles)


def _fiber_initial(p, rng):
    rep = _fiber_report(p)
    w = {
        "profiles": rep.profiles,
        "components": rep.components,
        "non_posets": rep.non_posets[:3],
        "without_unique_initial": rep.bad_initial[:3],
        "count_without_unique_initial": len(rep.bad_initial),
    }
    return not rep.non_posets and not rep.bad_initial, w


def _fiber_pi0(p, rng):
    rep = _fiber_report(p)
    w = {"maps_checked": rep.maps_checked, "non_bijective": rep.non_bijective[:3]}
    return not rep.non_bijective and rep.maps_checked > 0, w


def _fiber_contractible(p, rng):
    rep = _fiber_report(p)
    w = {"components": rep.components, "noncontractible": rep.noncontractible[:3], "non_posets": rep.non_posets[:3]}
    return not rep.noncontractible and not rep.non_posets, w


def _finality_pc(p, rng):
    from .substitudes import capped_addition, classifier_pc, marked_finality

    C = classifier_pc(capped_addition(p["cap"]), p["x_cap"], p["k_cap"])
    cert = marked_finality(C)
    cat = C.category
    return bool(cert), {
        "objects": cat.n_objects,
        "morphisms": cat.n_morphisms,
        "marked": len(C.marked),
        "failure": cert.failure,
    }


def _finality_nop(p, rng):
    from .substitudes import classifier_nop, marked_finality

    C = classifier_nop(p["n"], p["cap"], p["kind"], k_cap=p["k_cap"])
    cert = marked_finality(C)
    cat = C.category
    return bool(cert), {
        "objects": cat.n_objects,
        "morphisms": cat.n_morphisms,
        "marked": len(C.marked),
        "failure": cert.failure,
    }


def _unary_tame(p, rng):
    from .fincat import arrow_category
    from .substitudes import CategorySubstitude, check_unary_tame, monoid_substitude

    rows = []
    for name, P in [("monoid", monoid_substitude()), ("arrow category", CategorySubstitude(arrow_category()))]:
        cert = check_unary_tame(P, p["cap"])
        rows.append({"substitude": name, "candidate": cert.candidate, "objects": cert.objects, "ok": cert.ok})
    return all(r["ok"] for r in rows), {"certificates": rows}


def _shuffle_retract(p, rng):
    from .fincat import constant_presheaf
    from .substitudes import cyclic_monoid_algebra, monoid_substitude, shuffle_coproduct

    P = monoid_substitude()
    R = shuffle_coproduct(P, cyclic_monoid_algebra(P, p["order"]), constant_presheaf(P.colours), p["degree_cap"])
    expected = sum(p["order"] ** (j + 1) for j in range(p["degree_cap"] + 1))
    w = {
        "alternating": R.alternating_count(),
        "coproduct": R.coproduct_count(),
        "normal_forms": expected,
        "shuffle_object": R.shuffle_count(),
        "checks": R.checks,
    }
    return R.alternating_count() == R.coproduct_count() == expected, w


def _filtration(p, rng):
    from .substitudes import filtration_colimit, micro_instances

    rows = []
    for name, P, Xa, K, L, f, g, arity_cap, D in micro_instances():
        R = filtration_colimit(P, Xa, K, L, f, g, arity_cap, D)
        rows.append({"instance": name, "stages": [s.size for s in R.stages], "direct": R.direct, "monotone": R.monotone})
    return all(r["stages"][-1] == r["direct"] for r in rows), {"instances": rows}


def _beck_chevalley(p, rng):
    from .operads import ass, beck_chevalley, generated_operads, symmetrise_operad

    ops = generated_operads(p["seed"], p["n"], p["N"], p["count"])
    bad, sizes = [], {}
    for A in ops:
        rep = beck_chevalley(A)
        sizes[A.name] = rep.sizes
        if not rep.ok:
            bad.append([A.name, rep.failure])
    S = symmetrise_operad(ass(p["n"], p["N"]))
    com = {k: len(v) for k, v in sorted(S.values.items())}
    ok = not bad and len(ops) >= p["count"] and all(v == 1 for v in com.values())
    return ok, {"operads": len(ops), "failures": bad, "sym_ass_sizes": com}


def _kernel_instances(p, rng):
    from .fincat import (
        FinFunctor,
        constant_presheaf,
        presheaf_coproduct,
        random_concrete_category,
        representable_presheaf,
        tautological_presheaf,
        terminal_category,
    )

    for _ in range(p["count"]):
        C = random_concrete_category(rng, p["max_objects"], p["max_size"])
        Xs = [tautological_presheaf(C), representable_presheaf(C, rng.randrange(C.n_objects))]
        X = presheaf_coproduct(Xs) if rng.random() < 0.5 else Xs[rng.randrange(2)]
        # a full subcategory inclusion and the projection to the terminal category
        objs = sorted(rng.sample(range(C.n_objects), rng.randint(1, C.n_objects)))
        sub, inc = C.full_subcategory(objs)
        T = terminal_category()
        proj = FinFunctor(C, T, [0] * C.n_objects, [0] * C.n_morphisms)
        yield C, X, inc, proj, constant_presheaf(C)


def _kernel_final(p, rng):
    from .fincat import colim, is_final

    checked = final_seen = 0
    for C, X, inc, proj, one in _kernel_instances(p, rng):
        if inc is None:
            continue
        checked += 1
        if not is_final(inc):
            continue
        final_seen += 1
        full = colim(X)
        rest = colim(X.pullback(inc))
        # the comparison sends the class of (a, x) over the subcategory to the class of (inc a, x)
        image = {}
        for a in range(inc.source.n_objects):
            for i in range(len(X.values[inc.obj_map[a]])):
                c = rest.cocone[a][i]
                d = full.cocone[inc.obj_map[a]][i]
                if image.setdefault(c, d) != d:
                    return False, {"category": C.name, "reason": "comparison not a function"}
        if len(image) != len(rest) or len(set(image.values())) != len(full):
            return False, {"category": C.name, "sizes": [len(rest), len(full)], "morphisms": C.n_morphisms}
    return final_seen > 0, {"categories": checked, "final_inclusions": final_seen}


def naive_left_kan_classes(u, X, b):
    """Classes of (a, f: u a -> b, i) under the zig-zags generated by
    g: a -> a2 with f = f2 . u(g), by a direct search over all pairs."""
    A, B = u.source, u.target
    triples = [(a, f, i) for a in range(A.n_objects) for f in B.hom(u.obj_map[a], b) for i in range(len(X.values[a]))]
    parent = {t: t for t in triples}

    def find(t):
        while parent[t] != t:
            t = parent[t]
        return t

    for s in triples:
        for t in triples:
            a, f, i = s
            a2, f2, j = t
            for g in A.hom(a, a2):
                if B.compose(f2, u.mor_map[g]) == f and X.action[g][i] == j:
                    rs, rt = find(s), find(t)
                    if rs != rt:
                        parent[max(rs, rt)] = min(rs, rt)
    classes = {}
    for t in triples:
        classes.setdefault(find(t), []).append(t)
    return sorted(sorted(c) for c in classes.values())


def _kernel_kan(p, rng):
    from .fincat import identity_functor, left_kan

    checked = 0
    for C, X, inc, proj, one in _kernel_instances(p, rng):
        cases = [(proj, X), (proj, one), (identity_functor(C), X)]
        if inc is not None:
            cases.append((inc, X.pullback(inc)))
        for u, Y in cases:
            L = left_kan(u, Y)
            for b in range(u.target.n_objects):
                naive = naive_left_kan_classes(u, Y, b)
                if len(naive) != len(L.values[b]) or sorted(c[0] for c in naive) != sorted(L.values[b]):
                    return False, {"category": C.name, "object": b, "sizes": [len(L.values[b]), len(naive)]}
            checked += 1
    return True, {"extensions": checked}


def _substitude_axioms(p, rng):
    from .substitudes import CategorySubstitude, NOSubstitude, capped_addition, check_substitude, monoid_substitude
    from .fincat import arrow_category

    names = []
    for P in (monoid_substitude(), capped_addition(2), CategorySubstitude(arrow_category()), NOSubstitude(2, 3, "normal")):
        check_substitude(P, max_arity=2)
        names.append(P.name)
    return True, {"substitudes": names}


CHECKS = [
    Check(
        "ordinals-count",
        "n-ordinal enumeration",
        "The n-ordinals of size k >= 1 number n^(k-1): consecutive levels are free and the rest are minima.",
        "Exhaustive up to the given n and k.",
        {"n_max": 4, "k_max": 5},
        _ordinals_count,
    ),
    Check(
        "milgram-q22",
        "Milgram: Q_n(k) and unordered configurations",
        "The nerve of Q_2(2) has rational Betti numbers (1, 1), those of the unordered configuration space of "
        "2 points in the plane (a circle).",
        "Homology only; a homotopy equivalence is not certified.",
        {},
        _milgram_q22,
    ),
    Check(
        "milgram-j22",
        "Milgram: J_n(k) and ordered configurations",
        "The Milgram poset J_2(2), realised as the comma category of the total order functor, has the rational "
        "homology of a circle.",
        "Homology only.",
        {},
        _milgram_j22,
    ),
    Check(
        "milgram-poset",
        "Milgram: J_n(k) and ordered configurations",
        "The nerve of the Milgram poset J_n(k) has the rational Betti numbers of the ordered configuration "
        "space of k points in R^n, the coefficients of the product over j < k of (1 + j t^(n-1)).",
        "Homology only, through degree D.",
        {"cells": [[2, 3], [2, 4], [3, 3]], "D": 3},
        _milgram_poset,
    ),
    Check(
        "milgram-q32",
        "Milgram: Q_n(k) and unordered configurations",
        "The nerve of Q_3(2) has rational Betti (1, 0, 0), F2 Betti (1, 1, 1), integral H_1 = Z/2 and Euler "
        "characteristic 1, the homology of the projective plane, the unordered configuration space of 2 points "
        "in 3-space up to homotopy.",
        "Nerve truncated at degree 3; the nerve of Q_3(2) has no nondegenerate simplices above degree 2.",
        {},
        _milgram_q32,
    ),
    Check(
        "pi1-abelian",
        "Milgram: fundamental group of Q_2(k)",
        "The abelianised edge-path group of N(Q_2(k)) is Z for k = 2, 3 (the abelianised braid group) and agrees "
        "with integral H_1.",
        "Only the abelianisation is compared; the full fundamental group is not identified.",
        {"cells": [[2, 2], [2, 3]]},
        _pi1_abelian,
    ),
    Check(
        "stability",
        "Milgram: connectivity growing with n",
        "For each (n, k) the nerve of Q_n(k) is connected and its rational Betti numbers vanish in degrees "
        "1 .. n-2.",
        "Q_infinity is approximated by finite n; only degrees up to the cap D are computed, and homotopy groups "
        "beyond the abelianised fundamental group are out of reach.",
        {"cells": [[n, k] for k in (2, 3) for n in (2, 3, 4)], "D": 3},
        _stability,
    ),
    Check(
        "fiber-initial",
        "initial-object lemma",
        "Every connected component of every fiber of p' for d(NO^(2)), profiles of total size <= 4 and trees of "
        "<= 3 vertices, is a finite poset with exactly one initial object.",
        "Strict fibers over the profile; cross-checked against the comma categories of the Grothendieck "
        "projection.",
        {"n": 2, "kind": "normal", "total_size": 4, "max_vertices": 3},
        _fiber_initial,
    ),
    Check(
        "fiber-pi0",
        "initial-object lemma",
        "Profile morphisms induce bijections between the sets of components of the fibers of p'.",
        "Same truncation as fiber-initial.",
        {"n": 2, "kind": "normal", "total_size": 4, "max_vertices": 3},
        _fiber_pi0,
    ),
    Check(
        "fiber-contractible",
        "initial-object lemma",
        "Every component of every fiber of p' has the homology of a point (the homotopical consequence of an "
        "initial object).",
        "Rational and integral H_1 homology of the full nerve of each component.",
        {"n": 2, "kind": "normal", "total_size": 4, "max_vertices": 3},
        _fiber_contractible,
    ),
    Check(
        "finality-pc",
        "monoidal category example",
        "Alternating strings form a final subcategory of the semifree coproduct classifier of P_C for the "
        "capped-addition poset.",
        "Classifier truncated to at most x_cap X-edges and k_cap K-edges; verdicts hold at this truncation only.",
        {"cap": 2, "x_cap": 3, "k_cap": 2},
        _finality_pc,
    ),
    Check(
        "finality-nop",
        "noncontractible retracts",
        "Noncontractible retracts form a final subcategory of the truncated semifree coproduct classifier of "
        "the n-operad substitude.",
        "Trees with at most cap vertices, ordinals of size <= cap - 1 and at most k_cap K-vertices, plus all "
        "retracts in that range.",
        {"n": 2, "cap": 3, "kind": "constant_free", "k_cap": 2},
        _finality_nop,
    ),
    Check(
        "unary-tame",
        "unary tameness lemma",
        "A levelwise final subcategory of unary morphisms closed under the action exists for the monoid "
        "substitude and for a category seen as a substitude.",
        "Found at the given classifier cap only.",
        {"cap": 3},
        _unary_tame,
    ),
    Check(
        "shuffle-retract",
        "shuffle coproduct lemma and retract proposition",
        "For the monoid substitude, X = Z/order and K a point, the alternating shuffle formula, the coproduct "
        "computed as a colimit and the normal forms x_0 t x_1 ... t x_d all have the same size; the section "
        "followed by the retraction is the identity and both are natural.",
        "At most degree_cap free letters.",
        {"order": 2, "degree_cap": 2},
        _shuffle_retract,
    ),
    Check(
        "filtration",
        "filtration proposition",
        "On every shipped micro instance the staged pushouts S_0, ..., S_D agree with the direct colimit over "
        "the truncated free extension classifier.",
        "Classifier truncated by arity and degree; reflections are checked as bijections at each stage.",
        {},
        _filtration,
    ),
    Check(
        "beck-chevalley",
        "operadic stabilisation proposition",
        "For generated 2-operads the symmetrised operad has the symmetrised collection as its underlying "
        "collection, equivariantly; symmetrising Ass_2 gives singletons.",
        "Arity at most N.",
        {"seed": 0, "n": 2, "N": 3, "count": 20},
        _beck_chevalley,
    ),
    Check(
        "kernel-final",
        "final functors",
        "Restricting along a final full inclusion never changes a colimit: the comparison is a bijection.",
        "Random concrete categories with at most max_objects objects.",
        {"count": 200, "max_objects": 6, "max_size": 2},
        _kernel_final,
    ),
    Check(
        "kernel-kan",
        "left Kan extensions",
        "Left Kan extensions agree with a naive search over all pairs of comma objects.",
        "Random concrete categories with at most max_objects objects.",
        {"count": 200, "max_objects": 6, "max_size": 2},
        _kernel_kan,
    ),
    Check(
        "substitude-axioms",
        "substitudes",
        "Unit, functoriality and associativity of substitution hold for the shipped substitudes.",
        "Operations of arity <= 2 with unary substituends.",
        {},
        _substitude_axioms,
    ),
]
ORDER = {c.id: i for i, c in enumerate(CHECKS)}
BY_ID = {c.id: c for c in CHECKS}


# -- running ----------------------------------------------------------------------------------


def _alarm(signum, frame):
    raise BudgetExpired()


def run_check(entry: CheckEntry, seed=0) -> VerificationReport:
    if entry.id not in BY_ID:
        raise UnknownCheck("no such check", entry.id)
    chk = BY_ID[entry.id]
    params = dict(chk.defaults)
    params.update(entry.params or {})
    budget = entry.budget_seconds
    if os.environ.get(BUDGET_ENV):
        budget = float(os.environ[BUDGET_ENV])
    rng = random.Random(seed)
    start = time.perf_counter()
    use_alarm = budget is not None and hasattr(signal, "setitimer")
    if use_alarm:
        old = signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, budget)
    try:
        ok, witness = chk.fn(params, rng)
        verdict = PASS if ok else FAIL
    except BudgetExpired:
        verdict, witness = INCONCLUSIVE, {"reason": "time budget exhausted", "budget_seconds": budget}
    except (SizeBudgetExceeded, NotFoundAtTruncation, TruncationRequired) as e:
        verdict, witness = INCONCLUSIVE, {"reason": str(e), "error": type(e).__name__, "detail": e.witness}
    except Exception as e:  # captured, never aborts the suite
        detail = getattr(e, "witness", None)
        verdict, witness = FAIL, {"error": type(e).__name__, "message": str(e), "detail": detail}
    finally:
        if use_alarm:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)
    elapsed = time.perf_counter() - start
    return VerificationReport(chk.id, chk.anchor, _jsonable(params), verdict, _jsonable(witness), elapsed)


def _run_entry(args):
    entry, seed = args
    return run_check(entry, seed)


def run_suite(config: SuiteConfig):
    """Run the configured checks; reports come back in the fixed check order."""
    for e in config.checks:
        if e.id not in BY_ID:
            raise UnknownCheck("no such check", e.id)
    jobs = sorted(enumerate(config.checks), key=lambda ie: (ORDER[ie[1].id], ie[0]))
    entries = [e for _, e in jobs]
    if config.workers > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_run_entry, [(e, config.seed) for e in entries]))
    return [run_check(e, config.seed) for e in entries]


def default_config(seed=0):
    return SuiteConfig(CONFIG_VERSION, seed, [CheckEntry(c.id) for c in CHECKS])


def config_from_dict(d):
    if not isinstance(d, dict):
        raise ConfigError("a config is a JSON object")
    if d.get("version") != CONFIG_VERSION:
        raise ConfigError("unsupported config version", d.get("version"))
    if "seed" not in d:
        raise ConfigError("the config must fix a seed")
    checks = []
    for c in d.get("checks", []):
        if isinstance(c, str):
            c = {"id": c}
        checks.append(CheckEntry(c["id"], dict(c.get("params", {})), c.get("budget_seconds")))
    return SuiteConfig(d["version"], int(d["seed"]), checks, int(d.get("workers", 1)))


def load_config(path):
    with open(path) as fh:
        return config_from_dict(json.load(fh))


def reports_json(reports, timings=False):
    """Canonical JSON; without timings the text is identical across runs."""
    return json.dumps([r.to_dict(timings) for r in reports], sort_keys=True, indent=2)


def explain(check_id):
    if check_id not in BY_ID:
        raise UnknownCheck("no such check", check_id)
    c = BY_ID[check_id]
    defaults = json.dumps(c.defaults, sort_keys=True) if c.defaults else "none"
    return f"{c.id}\n  anchor: {c.anchor}\n  statement: {c.statement}\n  truncation: {c.caveats}\n  defaults: {defaults}\n"


def summary_line(r: VerificationReport):
    return f"{r.verdict.upper():<27} {r.id:<20} {r.wall_time:8.2f}s  {r.anchor}"
