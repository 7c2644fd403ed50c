import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from coopkitchen.core import Action, SOUP, bundled_layout, deserialize_state, serialize_state
from coopkitchen.policies import ToMHandle
from coopkitchen.service.app import create_app
from coopkitchen.service.session import SessionConfig

from tests.support import make_state, seed_soup_in_hand

LAYOUT = bundled_layout("room")


def make_client(tmp_path, human_slot=0, tick_rate=0.5, agent=None):
    config = SessionConfig(
        layout=LAYOUT,
        agent=agent or ToMHandle(preset="mle_like"),
        human_slot=human_slot,
        tick_rate=tick_rate,  # slow timer; tests drive ticks via step
        seed=5,
        capture_dir=Path(tmp_path) / "captures",
    )
    return TestClient(create_app(config))


class TestHttpApi:
    client = TestClient(create_app())

    def test_health(self):
        r = self.client.get("/health")
        assert r.status_code == 200 and r.json()["status"] == "ok"

    def test_layouts(self):
        names = self.client.get("/layouts").json()
        assert names == ["bottleneck", "center_objects", "center_pots", "room"]
        info = self.client.get("/layouts/room").json()
        assert info["width"] == 9 and info["height"] == 7
        assert len(info["grid"]) == 7
        assert self.client.get("/layouts/nope").status_code == 404

    def test_record_endpoint(self):
        r = self.client.post(
            "/rollouts/record",
            json={"layout": "room", "agents": ["scripted:stationary", "scripted:stationary"],
                  "horizon": 5, "seed": 1},
        )
        assert r.status_code == 200
        traj = r.json()["trajectory"]
        assert len(traj["actions"]) == 5
        assert sum(traj["rewards"]) == 0

    def test_bad_agent_spec_422(self):
        r = self.client.post(
            "/rollouts/record",
            json={"layout": "room", "agents": ["warp:x", "scripted:stationary"], "horizon": 5},
        )
        assert r.status_code == 422

    def test_validate_endpoint(self):
        r = self.client.post(
            "/validate",
            json={"agent": "scripted:stationary", "layout": "bottleneck",
                  "episodes_per_member": 1, "horizon": 30, "seed": 2},
        )
        assert r.status_code == 200
        assert r.json()["report"]["mean"] == 0.0

    def test_suite_run_endpoint(self, tmp_path):
        from dataclasses import replace

        from coopkitchen.harness import load_suite

        suite, _ = load_suite()
        sc = replace(next(s for s in suite if s.id == "room-sr-counter-soup"), rollouts_per_variant=2)
        (tmp_path / f"{sc.id}.scenario").write_text(sc.to_json())
        r = self.client.post(
            "/suite/run",
            json={"agent": "scripted:stationary", "suite_path": str(tmp_path), "seed": 1},
        )
        assert r.status_code == 200
        assert r.json()["report"]["categories"]["SR"] == 0.0

    def test_session_socket_absent_without_config(self):
        with pytest.raises(Exception):
            with self.client.websocket_connect("/session"):
                pass


class TestSessionSocket:
    def test_connect_sends_layout_then_state(self, tmp_path):
        client = make_client(tmp_path)
        with client.websocket_connect("/session") as ws:
            layout_rec = ws.receive_json()
            assert layout_rec["type"] == "layout"
            assert layout_rec["name"] == "room"
            assert len(layout_rec["grid"]) == 7
            state_rec = ws.receive_json()
            assert state_rec["type"] == "state"
            assert state_rec["seq"] == 0 and state_rec["tick"] == 0
            deserialize_state(state_rec["state"], LAYOUT)

    def _drain_connect(self, ws):
        ws.receive_json()  # layout
        return ws.receive_json()  # initial state

    def test_pause_then_steps_advance_exactly_n_ticks(self, tmp_path):
        client = make_client(tmp_path)
        with client.websocket_connect("/session") as ws:
            first = self._drain_connect(ws)
            ws.send_text(json.dumps({"type": "pause"}))
            paused = ws.receive_json()
            assert paused["mode"] == "paused"
            start_tick, start_seq = paused["tick"], paused["seq"]
            ws.send_text(json.dumps({"type": "step", "n": 5}))
            seqs, ticks = [], []
            for _ in range(5):
                rec = ws.receive_json()
                assert rec["type"] == "state"
                seqs.append(rec["seq"])
                ticks.append(rec["tick"])
            assert ticks == [start_tick + i + 1 for i in range(5)]
            assert seqs == [start_seq + i + 1 for i in range(5)]

    def test_step_while_running_is_an_error(self, tmp_path):
        client = make_client(tmp_path)
        with client.websocket_connect("/session") as ws:
            self._drain_connect(ws)
            ws.send_text(json.dumps({"type": "step", "n": 1}))
            rec = ws.receive_json()
            assert rec["type"] == "error"

    def test_malformed_message_answered_with_error_and_session_continues(self, tmp_path):
        client = make_client(tmp_path)
        with client.websocket_connect("/session") as ws:
            self._drain_connect(ws)
            ws.send_text("{not json")
            rec = ws.receive_json()
            assert rec["type"] == "error"
            ws.send_text(json.dumps({"type": "act", "action": "TELEPORT"}))
            rec = ws.receive_json()
            assert rec["type"] == "error"
            # still alive
            ws.send_text(json.dumps({"type": "pause"}))
            assert ws.receive_json()["mode"] == "paused"

    def test_set_state_invalid_keeps_state(self, tmp_path):
        client = make_client(tmp_path)
        with client.websocket_connect("/session") as ws:
            initial = self._drain_connect(ws)
            ws.send_text(json.dumps({"type": "pause"}))
            paused = ws.receive_json()
            bad = initial["state"].replace('"tick":0', '"tick":-1')
            ws.send_text(json.dumps({"type": "set_state", "state": bad}))
            rec = ws.receive_json()
            assert rec["type"] == "error"
            ws.send_text(json.dumps({"type": "step", "n": 1}))
            after = ws.receive_json()
            assert after["tick"] == paused["tick"] + 1  # unchanged base state

    def test_human_delivers_soup_for_reward_20(self, tmp_path):
        client = make_client(tmp_path, human_slot=0, agent=ToMHandle(preset="mle_like"))
        with client.websocket_connect("/session") as ws:
            self._drain_connect(ws)
            ws.send_text(json.dumps({"type": "pause"}))
            ws.receive_json()
            # drop the human next to the serving window holding a soup
            staged = seed_soup_in_hand(LAYOUT, agent=0)
            ws.send_text(json.dumps({"type": "set_state", "state": serialize_state(staged)}))
            rec = ws.receive_json()
            assert rec["type"] == "state"
            ws.send_text(json.dumps({"type": "act", "action": "INTERACT"}))
            ws.send_text(json.dumps({"type": "step", "n": 1}))
            rec = ws.receive_json()
            assert rec["reward_total"] == 20
            assert any(e["kind"] == "soup_delivered" for e in rec["last_events"])

    def test_capture_requires_pause_and_round_trips(self, tmp_path):
        client = make_client(tmp_path)
        capture = {
            "type": "capture",
            "id": "live-probe-1",
            "category": "SR",
            "predicate": {"kind": "delivered_within", "ticks": 40},
            "partner": "scripted:stationary",
        }
        with client.websocket_connect("/session") as ws:
            self._drain_connect(ws)
            ws.send_text(json.dumps(capture))
            rec = ws.receive_json()
            assert rec["type"] == "error"  # not paused yet
            ws.send_text(json.dumps({"type": "pause"}))
            ws.receive_json()
            ws.send_text(json.dumps(capture))
            rec = ws.receive_json()
            assert rec["type"] == "captured", rec
            path = Path(rec["path"])
            assert path.exists()
            from coopkitchen.harness import load_suite

            suite, _ = load_suite(path.parent)
            assert suite[0].id == "live-probe-1"
            # duplicate id now errors
            ws.send_text(json.dumps(capture))
            assert ws.receive_json()["type"] == "error"

    def test_capture_budget_beyond_horizon_is_schema_error(self, tmp_path):
        client = make_client(tmp_path)
        with client.websocket_connect("/session") as ws:
            self._drain_connect(ws)
            ws.send_text(json.dumps({"type": "pause"}))
            ws.receive_json()
            ws.send_text(json.dumps({
                "type": "capture",
                "id": "bad-budget",
                "category": "SR",
                "predicate": {"kind": "delivered_within", "ticks": 50},
                "partner": "scripted:stationary",
                "horizon": 10,
            }))
            assert ws.receive_json()["type"] == "error"

    def test_running_mode_ticks_on_timer(self, tmp_path):
        client = make_client(tmp_path, tick_rate=50.0)
        with client.websocket_connect("/session") as ws:
            self._drain_connect(ws)
            seqs = []
            for _ in range(5):
                rec = ws.receive_json()
                if rec["type"] == "state":
                    seqs.append(rec["seq"])
            assert seqs == list(range(seqs[0], seqs[0] + len(seqs)))
