#!/usr/bin/env python3
"""Regenerate the bundled validation trajectories (replay stand-ins for the
imitation-learned half of the validation population)."""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from coopkitchen.core import bundled_layout, bundled_layout_names  # noqa: E402
from coopkitchen.policies import ToMHandle, Trajectory, record_rollout, verify_trajectory  # noqa: E402

OUT = REPO / "src" / "coopkitchen" / "data" / "validation"
HORIZON = 400


def main():
    for name in bundled_layout_names():
        layout = bundled_layout(name)
        out_dir = OUT / name
        out_dir.mkdir(parents=True, exist_ok=True)
        for old in out_dir.glob("*.traj"):
            old.unlink()
        for k in range(1, 11):
            # pair the human-like preset with a drifting partner preset so the
            # ten recordings differ in style, not just in seed
            partner_preset = f"v{((k - 1) % 10) + 1:02d}"
            traj = record_rollout(
                layout,
                ToMHandle(preset="mle_like"),
                ToMHandle(preset=partner_preset),
                horizon=HORIZON,
                seed=1000 + k,
            )
            traj.metadata["label"] = f"validation stand-in r{k:02d}"
            verify_trajectory(traj, layout)
            traj.save(out_dir / f"r{k:02d}.traj")
        total = sum(Trajectory.load(p).total_reward for p in sorted(out_dir.glob("*.traj")))
        print(f"{name}: 10 trajectories, combined reward {total}")


if __name__ == "__main__":
    main()
