"""The nine acceptance criteria, each at its stated tolerance and time limit.

Every criterion runs through the verification harness and then checks the
witness values exactly.  Results are printed as one line per criterion at
the end of the pytest run.
"""
import pytest

from noperads import harness
from noperads.fincat import connected_components
from noperads.ordinals import milgram_poset


def run(check_id, **params):
    return harness.run_check(harness.CheckEntry(check_id, params))


def test_criterion_1_milgram_homology(criterion):
    log = criterion(1, "Betti numbers of N(Q_2(2)), N(J_2(2)) and N(Q_3(2))", 1)
    q22, j22, q32 = run("milgram-q22"), run("milgram-j22"), run("milgram-q32")
    w = q32.witness
    ok = (
        q22.witness["betti_q"] == [1, 1]
        and j22.witness["betti_q"] == [1, 1]
        and w["betti_q"] == [1, 0, 0]
        and w["betti_f2"] == [1, 1, 1]
        and w["h1"] == "Z/2"
        and w["euler"] == 1
        and all(r.verdict == harness.PASS for r in (q22, j22, q32))
    )
    assert log.done(ok)


def test_criterion_2_fundamental_group(criterion):
    log = criterion(2, "abelianised edge-path groups of N(Q_2(2)), N(Q_2(3)) equal H_1 = Z", 5)
    r = run("pi1-abelian", cells=[[2, 2], [2, 3]])
    ok = r.verdict == harness.PASS and [(c["pi1_ab"], c["h1"]) for c in r.witness["cells"]] == [("Z", "Z")] * 2
    assert log.done(ok)


def test_criterion_3_stability(criterion):
    log = criterion(3, "b_i(N(Q_n(k))) = 0 for 1 <= i <= n-2, k in {2,3}, n in {2,3,4}, D = 3", 60)
    cells = [[n, k] for n in (2, 3, 4) for k in (2, 3)]
    r = run("stability", cells=cells, D=3)
    rows = r.witness["cells"]
    ok = r.verdict == harness.PASS and len(rows) == 6
    # the vanishing range must be checked in full, not cut short by the truncation
    ok &= all(row["checked_through"] == min(row["n"] - 2, 3) for row in rows)
    ok &= all(all(b == 0 for b in row["betti_q"][1 : row["n"] - 1]) for row in rows)
    assert log.done(ok)


ANALYSIS_4 = (
    "over the profile (level-1 ordinal, level-0 ordinal) both fiber components are posets "
    "without an initial object; they are acyclic and every induced pi_0 map is a bijection"
)


@pytest.mark.xfail(strict=True, reason="counterexample: " + ANALYSIS_4)
def test_criterion_4_fiber_initial_objects(criterion):
    log = criterion(4, "fibers of p' for NO^(2): posets with unique initial objects, pi_0 bijections", 60)
    params = dict(n=2, kind="normal", total_size=4, max_vertices=3)
    initial, pi0 = run("fiber-initial", **params), run("fiber-pi0", **params)
    contractible = run("fiber-contractible", **params)
    bad = initial.witness["without_unique_initial"]
    # the weaker homotopical form holds on the same instance
    assert pi0.verdict == harness.PASS and contractible.verdict == harness.PASS
    assert initial.witness["non_posets"] == []
    ok = initial.verdict == harness.PASS and pi0.verdict == harness.PASS
    note = "" if ok else f"{len(bad)} components without an initial object at profile {tuple(bad[0][0])}; {ANALYSIS_4}"
    assert log.done(ok, note)


def test_criterion_5_finality(criterion):
    log = criterion(5, "tau final in the P_C classifier; nr final in the n-operad classifier", 120)
    # the capped-addition poset read both ways: poset cap 2 with up to three
    # X-edges, and poset cap 3 with up to two
    pc2 = run("finality-pc", cap=2, x_cap=3, k_cap=2)
    pc3 = run("finality-pc", cap=3, x_cap=2, k_cap=1)
    nop = run("finality-nop", n=2, cap=3, kind="constant_free", k_cap=2)
    ok = all(r.verdict == harness.PASS for r in (pc2, pc3, nop))
    ok &= all(r.witness["failure"] is None and r.witness["marked"] > 0 for r in (pc2, pc3, nop))
    assert log.done(ok, f"objects {pc2.witness['objects']}, {pc3.witness['objects']}, {nop.witness['objects']}")


def test_criterion_6_shuffle_retract(criterion):
    log = criterion(6, "shuffle formula 14 = normal-form coproduct 14 with a checked retraction", 1)
    r = run("shuffle-retract", order=2, degree_cap=2)
    w = r.witness
    ok = r.verdict == harness.PASS and w["alternating"] == w["coproduct"] == w["normal_forms"] == 14
    ok &= w["checks"]["naturality"] > 0 and w["checks"]["raw_elements"] == w["shuffle_object"]
    assert log.done(ok)


def test_criterion_7_filtration(criterion):
    log = criterion(7, "staged pushouts S_D equal the direct colimit on every micro instance", 60)
    r = run("filtration")
    rows = r.witness["instances"]
    ok = r.verdict == harness.PASS and len(rows) >= 5
    ok &= all(row["stages"][-1] == row["direct"] and row["monotone"] for row in rows)
    assert log.done(ok)


def test_criterion_8_beck_chevalley(criterion):
    log = criterion(8, "sym of operads equals sym of collections on 20 operads; sym(Ass_2) = Com", 120)
    r = run("beck-chevalley", seed=0, n=2, N=3, count=20)
    w = r.witness
    ok = r.verdict == harness.PASS and w["operads"] >= 20 and w["failures"] == []
    ok &= w["sym_ass_sizes"] == {"1": 1, "2": 1, "3": 1}
    # singletons because every J_2(k) is connected
    ok &= all(connected_components(milgram_poset(2, k))[1] == 1 for k in (1, 2, 3))
    assert log.done(ok)


def test_criterion_9_kernel(criterion):
    log = criterion(9, "final restriction keeps colimits; left Kan extensions match the naive oracle", 60)
    fin = run("kernel-final", count=200, max_objects=6, max_size=2)
    kan = run("kernel-kan", count=200, max_objects=6, max_size=2)
    ok = fin.verdict == kan.verdict == harness.PASS
    ok &= fin.witness["categories"] >= 200 and fin.witness["final_inclusions"] > 0
    ok &= kan.witness["extensions"] >= 200
    assert log.done(ok, f"{fin.witness['final_inclusions']} final inclusions, {kan.witness['extensions']} extensions")
