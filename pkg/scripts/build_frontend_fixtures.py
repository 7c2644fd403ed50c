#!/usr/bin/env python3
"""Regenerate the probe client's test fixtures: a seeded session transcript
(server records in order) and report files from small suite runs."""

from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from coopkitchen.core import bundled_layout  # noqa: E402
from coopkitchen.harness import load_suite, run_suite  # noqa: E402
from coopkitchen.policies import ToMHandle, parse_agent_spec  # noqa: E402
from coopkitchen.service.session import Session, SessionConfig  # noqa: E402

OUT = REPO / "frontend" / "test" / "fixtures"


def build_transcript():
    config = SessionConfig(
        layout=bundled_layout("room"),
        agent=ToMHandle(preset="mle_like"),
        human_slot=0,
        tick_rate=4.0,
        seed=2024,
    )
    session = Session(config)
    queue = session.subscribe()
    records = [session.layout_record(), session.state_record()]
    session.handle_pause()
    for _ in range(60):
        session.tick()
    while not queue.empty():
        records.append(queue.get_nowait())
    lines = [r.model_dump_json() for r in records]
    (OUT / "session_transcript.jsonl").write_text("\n".join(lines) + "\n")
    print(f"transcript: {len(lines)} records")


def build_reports():
    suite, _ = load_suite()
    keep = [s for s in suite if s.layout_name == "room"]
    keep = [replace(s, rollouts_per_variant=4) for s in keep]
    for tag, agent in (("strong", "tom:max_capability"), ("weak", "scripted:random")):
        report = run_suite(keep, parse_agent_spec(agent), base_seed=5, parallelism=1)
        (OUT / f"report_{tag}.json").write_text(report.to_json())
        print(f"report_{tag}: categories {report.category_means()}")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    build_transcript()
    build_reports()


if __name__ == "__main__":
    main()
