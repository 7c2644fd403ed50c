"""Run a built-in agent behind the external line-delimited JSON protocol.

Reads records on stdin, writes replies on stdout, one JSON object per
line. The episode seed arrives in COOPKITCHEN_SEED. Useful both as a
reference implementation of the protocol and for wiring the in-process
agent through the subprocess bridge in tests.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from coopkitchen.core import Action, History, deserialize_state, parse_layout
from coopkitchen.tom import ToMState, load_params_file, preset_params, tom_act
from coopkitchen.tom.params import mle_like_params


def run_stdio_agent(preset: str | None, params_path: str | None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    seed = int(os.environ.get("COOPKITCHEN_SEED", "0"))

    def send(record: dict) -> None:
        stdout.write(json.dumps(record) + "\n")
        stdout.flush()

    layout = None
    agent_index = 0
    params = None
    tom_state = ToMState()
    history = History()
    prev_state = None
    rng = random.Random(seed)

    for line in stdin:
        line = line.strip()
        if not line:
            continue
        record = json.loads(line)
        kind = record.get("type")
        if kind == "hello":
            layout = parse_layout("\n".join(record["layout"]["grid"]), name=record["layout"]["name"])
            agent_index = int(record["agent_index"])
            if params_path:
                params = load_params_file(params_path)
            elif preset == "mle_like" or preset is None:
                params = mle_like_params(layout.name)
            else:
                params = preset_params(preset)
            send({"type": "ready"})
        elif kind == "obs":
            if layout is None:
                send({"type": "error", "message": "obs before hello"})
                return 1
            state = deserialize_state(record["state"], layout)
            last = record.get("last_joint_action")
            if prev_state is not None and last is not None:
                history.append(prev_state, (Action(last[0]), Action(last[1])))
            prev_state = state
            action, tom_state = tom_act(params, tom_state, history, layout, state, agent_index, rng)
            send({"type": "act", "action": action.value})
        elif kind == "end":
            return 0
        else:
            send({"type": "error", "message": f"unknown record type {kind!r}"})
            return 1
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--preset", default=None, help="agent preset name (default: mle_like)")
    parser.add_argument("--params-file", default=None, help="flat key/value parameter file")
    args = parser.parse_args(argv)
    return run_stdio_agent(args.preset, args.params_file)


if __name__ == "__main__":
    sys.exit(main())
