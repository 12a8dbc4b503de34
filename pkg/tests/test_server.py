"""Session protocol: barriers, fog across the wire, overrides, transcripts."""

import json

import pytest
from fastapi.testclient import TestClient

from airace.model import default_scenario, state_hash
from airace.replay import read_log, replay
from airace.server.app import create_app


@pytest.fixture
def client(tmp_path):
    app = create_app(data_dir=str(tmp_path / "sessions"))
    with TestClient(app) as c:
        c.data_dir = tmp_path / "sessions"
        yield c


def make_session(client, seed=42):
    r = client.post("/sessions", json={"seed": seed})
    assert r.status_code == 200, r.text
    body = r.json()
    sid, facilitator = body["session_id"], body["facilitator_token"]
    tokens = {}
    for team in body["teams"]:
        j = client.post(f"/sessions/{sid}/join", json={"team": team})
        tokens[team] = j.json()["token"]
    # facilitator starts the game (lobby -> awaiting orders)
    client.post(f"/sessions/{sid}/advance", params={"token": facilitator}, json={})
    return sid, facilitator, tokens


def idle_orders(team, turn):
    return {"team": team, "turn": turn, "actions": [], "rnd_allocation": {}}


def submit_all(client, sid, tokens, turn):
    for team, token in tokens.items():
        r = client.post(
            f"/sessions/{sid}/orders", params={"token": token}, json=idle_orders(team, turn)
        )
        assert r.status_code == 200, r.text


def test_create_join_view(client):
    sid, facilitator, tokens = make_session(client)
    r = client.get(f"/sessions/{sid}/view", params={"token": tokens["us"]})
    body = r.json()
    assert body["phase"] == "awaiting_orders"
    assert body["role"] == "us"
    assert body["view"]["viewer"] == "us"
    assert "scenario" in body
    # another team's capacities are not on the wire
    assert "talent" not in body["view"]["teams"]["apex"]["resources"]


def test_unknown_session_404(client):
    r = client.get("/sessions/nope/view", params={"token": "x"})
    assert r.status_code == 404


def test_bad_token_403(client):
    sid, _, _ = make_session(client)
    r = client.get(f"/sessions/{sid}/view", params={"token": "forged"})
    assert r.status_code == 403


def test_submit_ready_status_hides_orders(client):
    sid, facilitator, tokens = make_session(client)
    r = client.post(
        f"/sessions/{sid}/orders",
        params={"token": tokens["apex"]},
        json={
            "team": "apex",
            "turn": 1,
            "actions": [{"kind": "build_cyber", "params": {}, "visibility": "secret"}],
            "rnd_allocation": {"lm1": 10},
        },
    )
    assert r.status_code == 200
    assert r.json()["ready"]["submitted"] == ["apex"]
    # us sees apex is ready but never its orders
    view = client.get(f"/sessions/{sid}/view", params={"token": tokens["us"]}).json()
    assert view["ready"]["submitted"] == ["apex"]
    assert "sealed_orders" not in view
    assert "lm1" not in json.dumps(view["view"]["teams"]["apex"])
    # the facilitator does see the sealed orders
    fview = client.get(f"/sessions/{sid}/view", params={"token": facilitator}).json()
    assert "apex" in fview["sealed_orders"]


def test_orders_validated(client):
    sid, _, tokens = make_session(client)
    r = client.post(
        f"/sessions/{sid}/orders",
        params={"token": tokens["us"]},
        json={"team": "us", "turn": 1, "rnd_allocation": {"lm4": 500}},
    )
    assert r.status_code == 422
    assert any("locked" in v for v in r.json()["detail"])


def test_cannot_submit_for_another_team(client):
    sid, _, tokens = make_session(client)
    r = client.post(
        f"/sessions/{sid}/orders", params={"token": tokens["us"]}, json=idle_orders("prc", 1)
    )
    assert r.status_code == 403


def test_advance_blocked_until_all_submitted(client):
    sid, facilitator, tokens = make_session(client)
    r = client.post(f"/sessions/{sid}/advance", params={"token": facilitator}, json={})
    assert r.status_code == 409
    submit_all(client, sid, tokens, 1)
    r = client.post(f"/sessions/{sid}/advance", params={"token": facilitator}, json={})
    assert r.status_code == 200
    assert r.json()["turn"] == 1


def test_only_facilitator_advances(client):
    sid, _, tokens = make_session(client)
    submit_all(client, sid, tokens, 1)
    r = client.post(f"/sessions/{sid}/advance", params={"token": tokens["us"]}, json={})
    assert r.status_code == 403


def test_force_advance_fills_missing_orders(client):
    sid, facilitator, tokens = make_session(client)
    client.post(
        f"/sessions/{sid}/orders", params={"token": tokens["us"]}, json=idle_orders("us", 1)
    )
    r = client.post(
        f"/sessions/{sid}/advance", params={"token": facilitator}, json={"force": True}
    )
    assert r.status_code == 200
    assert r.json()["turn"] == 1


def test_orders_sealed_once_everyone_submitted(client):
    sid, facilitator, tokens = make_session(client)
    submit_all(client, sid, tokens, 1)
    r = client.post(
        f"/sessions/{sid}/orders", params={"token": tokens["us"]}, json=idle_orders("us", 1)
    )
    assert r.status_code == 409  # reveal barrier


def test_resubmission_allowed_before_barrier(client):
    sid, _, tokens = make_session(client)
    for _ in range(2):
        r = client.post(
            f"/sessions/{sid}/orders", params={"token": tokens["us"]}, json=idle_orders("us", 1)
        )
        assert r.status_code == 200


def test_override_2d6_hits_next_safety_roll(client):
    sid, facilitator, tokens = make_session(client)
    # fast-forward apex to a ready deployment via direct state surgery
    app_session = client.app.state.manager.get(sid)
    for nid in ("lm1", "lm2", "lm3", "lm4", "cais"):
        entry = app_session.state.progress["apex"][nid]
        entry.points = app_session.state.scenario.node(nid).cost
        entry.completed = True
    client.post(
        f"/sessions/{sid}/override",
        params={"token": facilitator},
        json={"dice": {"kind": "2d6", "value": 12}},
    )
    for team, token in tokens.items():
        orders = idle_orders(team, 1)
        if team == "apex":
            orders["deploy"] = {"project": "cais", "decline_pause": True}
        client.post(f"/sessions/{sid}/orders", params={"token": token}, json=orders)
    r = client.post(f"/sessions/{sid}/advance", params={"token": facilitator}, json={})
    events = r.json()["events"]
    rolled = next(e for e in events if e["kind"] == "safety_rolled")
    assert rolled["payload"]["roll"] == 12
    assert rolled["payload"]["aligned"]  # threshold 11 at s=0, roll 12


def test_override_requires_facilitator(client):
    sid, _, tokens = make_session(client)
    r = client.post(
        f"/sessions/{sid}/override",
        params={"token": tokens["us"]},
        json={"dice": {"kind": "d6", "value": 6}},
    )
    assert r.status_code == 403


def test_shock_injection(client):
    sid, facilitator, tokens = make_session(client)
    client.post(
        f"/sessions/{sid}/override",
        params={"token": facilitator},
        json={"shock": "shock_backlash"},
    )
    submit_all(client, sid, tokens, 1)
    r = client.post(f"/sessions/{sid}/advance", params={"token": facilitator}, json={})
    shocks = [e for e in r.json()["events"] if e["kind"] == "shock_drawn"]
    assert shocks and shocks[0]["payload"]["id"] == "shock_backlash"
    assert shocks[0]["payload"]["injected"]


def test_turn_events_filtered_per_seat(client):
    sid, facilitator, tokens = make_session(client)
    for team, token in tokens.items():
        orders = idle_orders(team, 1)
        if team == "prc":
            orders["actions"] = [
                {"kind": "cyber_op",
                 "params": {"target": "apex", "mode": "monitor", "node": "lm1"},
                 "visibility": "secret"}
            ]
        client.post(f"/sessions/{sid}/orders", params={"token": token}, json=orders)
    client.post(f"/sessions/{sid}/advance", params={"token": facilitator}, json={})
    view_us = client.get(f"/sessions/{sid}/view", params={"token": tokens["us"]}).json()
    assert "cyber_op_resolved" not in [e["kind"] for e in view_us["view"]["events"]]
    view_prc = client.get(f"/sessions/{sid}/view", params={"token": tokens["prc"]}).json()
    assert "cyber_op_resolved" in [e["kind"] for e in view_prc["view"]["events"]]


def test_websocket_channel_flow(client):
    sid, facilitator, tokens = make_session(client)
    with client.websocket_connect(f"/sessions/{sid}/channel?token={tokens['us']}") as ws:
        hello = json.loads(ws.receive_text())
        assert hello["type"] == "hello"
        assert hello["payload"]["role"] == "us"
        view = json.loads(ws.receive_text())
        assert view["type"] == "view"
        # chat relays opaquely
        ws.send_text(json.dumps({"type": "chat", "payload": {"to": "all", "text": "hi"}}))
        msg = json.loads(ws.receive_text())
        assert msg["type"] == "chat"
        assert msg["payload"]["text"] == "hi"
        # ready push when someone submits
        client.post(
            f"/sessions/{sid}/orders", params={"token": tokens["prc"]}, json=idle_orders("prc", 1)
        )
        msg = json.loads(ws.receive_text())
        assert msg["type"] == "ready_status"
        assert msg["payload"]["submitted"] == ["prc"]


def test_websocket_turn_resolved_push(client):
    sid, facilitator, tokens = make_session(client)
    with client.websocket_connect(f"/sessions/{sid}/channel?token={tokens['us']}") as ws:
        ws.receive_text()  # hello
        ws.receive_text()  # view
        submit_all(client, sid, tokens, 1)
        for _ in range(4):
            ws.receive_text()  # ready pushes
        client.post(f"/sessions/{sid}/advance", params={"token": facilitator}, json={})
        msg = json.loads(ws.receive_text())
        assert msg["type"] == "turn_resolved"
        assert msg["payload"]["turn"] == 1
        assert msg["payload"]["view"]["viewer"] == "us"


def test_session_transcript_replays_to_server_hash(client):
    sid, facilitator, tokens = make_session(client, seed=7)
    for turn in (1, 2, 3):
        submit_all(client, sid, tokens, turn)
        r = client.post(f"/sessions/{sid}/advance", params={"token": facilitator}, json={})
        assert r.status_code == 200
    server_hash = client.get(
        f"/sessions/{sid}/view", params={"token": facilitator}
    ).json()["state_hash"]
    log_path = client.data_dir / f"{sid}.irlog"
    assert log_path.exists()
    state = replay(read_log(log_path), default_scenario())
    assert state_hash(state) == server_hash
    assert state.turn == 3
