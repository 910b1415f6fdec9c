"""Run a suite config and write the canonical JSON report next to a timed one.

    python3 scripts/run_suite.py [configs/default.json] [--out results]
"""
import argparse
from pathlib import Path

from noperads import harness

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?", default=str(ROOT / "configs" / "default.json"))
    ap.add_argument("--out", default=str(ROOT / "results"))
    ap.add_argument("--workers", type=int)
    args = ap.parse_args()

    config = harness.load_config(args.config)
    if args.workers:
        config.workers = args.workers
    reports = harness.run_suite(config)
    for r in reports:
        print(harness.summary_line(r))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(args.config).stem
    (out / f"{stem}.json").write_text(harness.reports_json(reports) + "\n")
    (out / f"{stem}.timed.json").write_text(harness.reports_json(reports, timings=True) + "\n")
    counts = {v: sum(r.verdict == v for r in reports) for v in (harness.PASS, harness.FAIL, harness.INCONCLUSIVE)}
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    return 1 if counts[harness.FAIL] else 0


if __name__ == "__main__":
    raise SystemExit(main())
