#!/usr/bin/env python3
"""Score the bundled suite with the reference agents and print the table
used to calibrate predicate budgets before freezing them."""

from __future__ import annotations

import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from coopkitchen.harness import load_suite, run_suite  # noqa: E402
from coopkitchen.policies import parse_agent_spec  # noqa: E402

AGENTS = ["tom:max_capability", "tom:mle_like", "scripted:random", "scripted:stationary"]


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    jobs = int(sys.argv[2]) if len(sys.argv) > 2 else 8
    suite, warnings = load_suite()
    for w in warnings:
        print(f"warning: {w}")
    reports = {}
    for spec in AGENTS:
        t0 = time.perf_counter()
        report = run_suite(suite, parse_agent_spec(spec), base_seed=seed, parallelism=jobs)
        dt = time.perf_counter() - t0
        reports[spec] = report
        means = report.category_means()
        print(f"\n== {spec}  ({dt:.1f}s)  SR={means['SR']:.3f} AR={means['AR']:.3f} AMR={means['AMR']:.3f}")
        for r in sorted(report.results, key=lambda r: (r.category, r.scenario_id)):
            flag = ""
            if spec == "tom:max_capability" and r.score < 0.55:
                flag = "  <-- LOW"
            if spec == "scripted:stationary" and r.score > 0:
                flag = "  <-- NONZERO"
            print(f"   {r.scenario_id:<40} {r.category:<4} {r.score:.2f}{flag}")

    print("\nordering check per category:")
    for cat in ("SR", "AR", "AMR"):
        vals = [reports[a].category_means()[cat] for a in AGENTS[:3]]
        ok = vals[0] > vals[1] > vals[2]
        print(f"  {cat}: max={vals[0]:.3f} mle={vals[1]:.3f} random={vals[2]:.3f}  {'OK' if ok else 'VIOLATED'}")
    sr = reports["tom:max_capability"].category_means()["SR"]
    print(f"  SR floor (>= 0.7): {sr:.3f}  {'OK' if sr >= 0.7 else 'VIOLATED'}")


if __name__ == "__main__":
    main()
