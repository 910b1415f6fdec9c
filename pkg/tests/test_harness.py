import json
import time
from dataclasses import replace
from pathlib import Path

import pytest

from noperads import harness
from noperads.cli import main
from noperads.errors import SizeBudgetExceeded, UnknownCheck

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
QUICK = ["substitude-axioms", "milgram-q22", "ordinals-count"]


def quick_config(workers=1):
    return harness.config_from_dict({"version": 1, "seed": 0, "checks": QUICK, "workers": workers})


def with_check(monkeypatch, check_id, fn):
    monkeypatch.setitem(harness.BY_ID, check_id, replace(harness.BY_ID[check_id], fn=fn))


# -- configs ---------------------------------------------------------------------------


def test_empty_config_gives_no_reports():
    reports = harness.run_suite(harness.load_config(CONFIGS / "empty.json"))
    assert reports == [] and harness.reports_json(reports) == "[]"


def test_default_config_lists_every_check():
    cfg = harness.load_config(CONFIGS / "default.json")
    assert [e.id for e in cfg.checks] == [c.id for c in harness.CHECKS]
    assert all(e.params == harness.BY_ID[e.id].defaults for e in cfg.checks)


@pytest.mark.parametrize(
    "bad", [{"seed": 0}, {"version": 2, "seed": 0}, {"version": 1}, [1, 2]], ids=["no-version", "version", "seed", "list"]
)
def test_config_errors(bad):
    with pytest.raises(harness.ConfigError):
        harness.config_from_dict(bad)


def test_unknown_check_is_rejected():
    cfg = harness.config_from_dict({"version": 1, "seed": 0, "checks": ["no-such-check"]})
    with pytest.raises(UnknownCheck):
        harness.run_suite(cfg)
    with pytest.raises(UnknownCheck):
        harness.explain("no-such-check")


# -- running ----------------------------------------------------------------------------


def test_reports_follow_the_registry_order():
    reports = harness.run_suite(quick_config())
    assert [r.id for r in reports] == ["ordinals-count", "milgram-q22", "substitude-axioms"]
    assert all(r.verdict == harness.PASS for r in reports)


def test_json_is_identical_across_runs_and_workers():
    a = harness.reports_json(harness.run_suite(quick_config()))
    b = harness.reports_json(harness.run_suite(quick_config()))
    c = harness.reports_json(harness.run_suite(quick_config(workers=2)))
    assert a == b == c
    assert "wall_time" not in a
    assert "wall_time" in harness.reports_json(harness.run_suite(quick_config()), timings=True)


def test_budget_config_is_inconclusive_not_failing():
    reports = harness.run_suite(harness.load_config(CONFIGS / "budget_n2_k5.json"))
    verdicts = {r.id: r.verdict for r in reports}
    assert verdicts["milgram-poset"] == harness.INCONCLUSIVE
    assert harness.FAIL not in verdicts.values()


def test_exceptions_become_verdicts(monkeypatch):
    def boom(p, rng):
        raise ValueError("broken on purpose")

    def too_big(p, rng):
        raise SizeBudgetExceeded("too many simplices", 10**9)

    with_check(monkeypatch, "ordinals-count", boom)
    with_check(monkeypatch, "milgram-q22", too_big)
    reports = harness.run_suite(quick_config())
    r0, r1, r2 = reports
    assert r0.verdict == harness.FAIL and r0.witness["error"] == "ValueError"
    assert r1.verdict == harness.INCONCLUSIVE and r1.witness["detail"] == 10**9
    assert r2.verdict == harness.PASS


def test_budget_environment_override(monkeypatch):
    def slow(p, rng):
        time.sleep(5)
        return True, {}

    with_check(monkeypatch, "ordinals-count", slow)
    monkeypatch.setenv(harness.BUDGET_ENV, "0.2")
    start = time.perf_counter()
    r = harness.run_check(harness.CheckEntry("ordinals-count"))
    assert r.verdict == harness.INCONCLUSIVE and time.perf_counter() - start < 2


def test_parameters_override_defaults():
    r = harness.run_check(harness.CheckEntry("ordinals-count", {"n_max": 2}))
    assert r.params == {"n_max": 2, "k_max": 5}


def test_explain_mentions_every_part():
    for c in harness.CHECKS:
        text = harness.explain(c.id)
        assert c.anchor in text and "statement:" in text and "truncation:" in text


def test_configuration_betti():
    assert harness.configuration_betti(2, 3)[:3] == [1, 3, 2]
    assert harness.configuration_betti(2, 4)[:4] == [1, 6, 11, 6]
    assert harness.configuration_betti(3, 3)[:5] == [1, 0, 3, 0, 2]


# -- command line -------------------------------------------------------------------------


def test_cli_verify_writes_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--only", "ordinals-count", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [d["verdict"] for d in data] == ["pass"]
    assert "PASS" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path):
    assert main(["verify", "--only", "fiber-initial"]) == 1
    assert main(["verify", "--only", "no-such-check"]) == 2
    assert main(["explain", "no-such-check"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 7, "seed": 0}')
    assert main(["verify", "--config", str(bad)]) == 2
    assert main(["verify", "--config", str(CONFIGS / "budget_n2_k5.json")]) == 0


def test_cli_subcommands(capsys):
    assert main(["ordinals", "enum", "--n", "2", "--k", "3"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 4
    assert main(["milgram", "--n", "2", "--k", "3", "--dim", "2"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["betti_q"] == rep["configuration_betti"] == [1, 3, 2]
    assert main(["homology", "--category", "q", "--n", "3", "--k", "2", "--field", "z1"]) == 0
    assert json.loads(capsys.readouterr().out)["h1_factors"] == [2]
    assert main(["sym", "--operad", "ass", "--N", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["arity_sizes"] == {"1": 1, "2": 1, "3": 1}
    assert main(["classifier", "--kind", "monoid", "--x-cap", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["final"] is True


def test_cli_operad_files(tmp_path, capsys):
    path = tmp_path / "perm.json"
    assert main(["desym", "--operad", "perm", "--N", "3", "--out", str(path)]) == 0
    capsys.readouterr()
    assert main(["check-operad", str(path)]) == 0
    d = json.loads(path.read_text())
    # send one product to a different element
    d["mult"][-1][3] = (d["mult"][-1][3] + 1) % 3
    path.write_text(json.dumps(d))
    assert main(["check-operad", str(path)]) == 1
    assert "FAIL" in capsys.readouterr().out
    assert main(["free", "--generator", "n=2;k=2;levels=[(1,2):0]", "--N", "3"]) == 0
    sizes = json.loads(capsys.readouterr().out)["sizes"]
    assert sizes["n=2;k=3;levels=[(1,2):0,(1,3):0,(2,3):0]"] == 2
