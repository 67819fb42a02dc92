import json

import pytest
from fastapi.testclient import TestClient

from accord.core.metrics import disagreement, format_ratio6
from accord.session.config import ServiceConfig
from accord.session.messages import MessageKind, decode_line, encode_line, WireMessage
from accord.session.service import create_app

CAMPS = {"c1": "conservative", "c2": "conservative", "c3": "conservative",
         "l1": "liberal", "l2": "liberal", "l3": "liberal"}
TRIADS = [["c1", "c2", "l1"], ["l2", "l3", "c3"]]


@pytest.fixture
def client(tmp_path, fixture_dir):
    app = create_app(ServiceConfig(data_dir=tmp_path / "data"))
    with TestClient(app) as client:
        response = client.post(
            "/api/baselines",
            json={"text": (fixture_dir / "federal_baseline.csv").read_text()},
        )
        assert response.status_code == 200
        yield client


def make_session(client, session_id="s1", users=("alice", "bob")):
    response = client.post(
        "/api/sessions",
        json={"baseline_id": "toy-federal", "participants": list(users), "session_id": session_id},
    )
    assert response.status_code == 200, response.text
    return response.json()


def hello(session_id, sender):
    return encode_line(WireMessage(
        kind=MessageKind.HELLO, session_id=session_id, sender=sender, seq=None, payload={},
    ))


def adjust_line(session_id, sender, category, amount):
    return encode_line(WireMessage(
        kind=MessageKind.ADJUST, session_id=session_id, sender=sender, seq=None,
        payload={"category": category, "amount": amount},
    ))


def test_healthz(client):
    assert client.get("/healthz").json() == {"status": "ok"}


def test_baseline_endpoints(client, federal_baseline):
    assert client.get("/api/baselines").json() == ["toy-federal"]
    body = client.get("/api/baselines/toy-federal").json()
    assert body["amounts"] == federal_baseline.amounts
    assert body["deficit"] == 1400
    assert client.get("/api/baselines/nope").status_code == 404
    bad = client.post("/api/baselines", json={"text": "garbage"})
    assert bad.status_code == 422


def test_session_create_and_get(client, federal_baseline):
    created = make_session(client)
    assert created["seq"] == 0
    assert created["budgets"]["alice"]["amounts"] == federal_baseline.amounts
    assert created["disagreement"]["raw_text"] == "0.000000"
    fetched = client.get("/api/sessions/s1").json()
    assert fetched == created
    assert client.get("/api/sessions/ghost").status_code == 404


def test_rest_message_apply_and_events(client):
    make_session(client)
    response = client.post(
        "/api/sessions/s1/messages",
        json={"kind": "Adjust", "sender": "alice",
              "payload": {"category": "Defense", "amount": -800}},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["seq"] == 1
    applied = decode_line(body["broadcasts"][0])
    assert applied.seq == 1
    update = decode_line(body["broadcasts"][1])
    assert update.kind is MessageKind.DISAGREEMENT_UPDATE

    events = client.get("/api/sessions/s1/events").json()
    assert [decode_line(e).kind for e in events] == [MessageKind.ADJUST]

    rejected = client.post(
        "/api/sessions/s1/messages",
        json={"kind": "Adjust", "sender": "mallory",
              "payload": {"category": "Defense", "amount": -800}},
    )
    assert rejected.status_code == 409
    assert rejected.json()["detail"]["code"] == "not-participant"
    error_line = decode_line(rejected.json()["detail"]["detail"])
    assert error_line.kind is MessageKind.ERROR
    assert error_line.seq == 1  # seq unchanged by the rejection


def test_websocket_hello_snapshot_and_fanout(client, federal_baseline):
    make_session(client)
    with client.websocket_connect("/ws/sessions/s1?user=alice") as alice, \
         client.websocket_connect("/ws/sessions/s1?user=bob") as bob:
        alice.send_text(hello("s1", "alice"))
        snapshot = decode_line(alice.receive_text())
        assert snapshot.kind is MessageKind.SNAPSHOT
        assert snapshot.payload["baseline"]["amounts"] == federal_baseline.amounts
        assert snapshot.payload["budgets"]["bob"]["amounts"] == federal_baseline.amounts

        alice.send_text(adjust_line("s1", "alice", "Defense", -800))
        echo_alice = decode_line(alice.receive_text())
        update_alice = decode_line(alice.receive_text())
        echo_bob = decode_line(bob.receive_text())
        update_bob = decode_line(bob.receive_text())
        assert echo_alice == echo_bob
        assert echo_alice.seq == 1
        assert update_alice == update_bob
        assert update_alice.kind is MessageKind.DISAGREEMENT_UPDATE

        # meter value equals a fresh engine computation
        store = client.app.state.store
        session = store.get_session("s1")
        report = disagreement(session.resolved("alice"), session.resolved("bob"))
        assert update_alice.payload["raw"] == format_ratio6(
            2 * report.delta_total, report.magnitude_total
        )

        # a rejection goes only to the offender, with state untouched
        bob.send_text(adjust_line("s1", "bob", "Defense", 800))
        error = decode_line(bob.receive_text())
        assert error.kind is MessageKind.ERROR
        assert error.payload["code"] == "sign-convention"

        # resync after the fact sees seq 1
        bob.send_text(hello("s1", "bob"))
        resynced = decode_line(bob.receive_text())
        assert resynced.seq == 1
        assert resynced.payload["budgets"]["alice"]["amounts"]["Defense"] == -800


def test_websocket_rejects_garbage_lines(client):
    make_session(client)
    with client.websocket_connect("/ws/sessions/s1?user=alice") as alice:
        alice.send_text("this is not a protocol line")
        error = decode_line(alice.receive_text())
        assert error.kind is MessageKind.ERROR
        assert error.payload["code"] == "protocol"


def test_suggestions_ranked_by_usage(client):
    make_session(client)
    for sender, amount in (("alice", -800), ("bob", -800), ("alice", -850)):
        client.post(
            "/api/sessions/s1/messages",
            json={"kind": "Adjust", "sender": sender,
                  "payload": {"category": "Defense", "amount": amount}},
        )
    ranked = client.get("/api/sessions/s1/suggestions/Defense").json()
    # -850 is alice's current pick, -800 bob's; the shared -800 proposal leads on usage 1..
    assert len(ranked) == 2
    assert {r["target_amount"] for r in ranked} == {-800, -850}
    assert ranked[0]["usage"] == 1 and ranked[1]["usage"] == 1
    assert client.get("/api/sessions/s1/suggestions/Ghost").status_code == 404


def test_trial_flow_over_rest(client):
    response = client.post(
        "/api/trials",
        json={"baseline_id": "toy-federal", "camps": CAMPS, "triads": TRIADS,
              "session_id": "t1"},
    )
    assert response.status_code == 200, response.text
    body = response.json()
    assert body["phase"] == "setup"
    assert body["goal"] == 700

    assert client.post("/api/trials/t1/advance").json()["phase"] == "round1"
    assert client.post("/api/trials/t1/advance").json()["phase"] == "round2"

    blocked = client.post("/api/trials/t1/advance")
    assert blocked.status_code == 409

    for voter, chosen in (
        ("c1", "c2"), ("c2", "c1"), ("l1", "c2"),
        ("l2", "l3"), ("l3", "l2"), ("c3", "l2"),
    ):
        response = client.post("/api/trials/t1/ballots", json={"voter": voter, "chosen": chosen})
        assert response.status_code == 200, response.text

    advanced = client.post("/api/trials/t1/advance").json()
    assert advanced["phase"] == "round3"
    assert advanced["classifications"] == {
        "c1": "SC", "c2": "MC", "l1": "minority",
        "l2": "ML", "l3": "SL", "c3": "minority",
    }
    assert advanced["pairs"] == [["c1", "l3"], ["c2", "l2"], ["c3", "l1"]]
    assert advanced["pair_sessions"] == ["t1-pair1", "t1-pair2", "t1-pair3"]

    pair = client.get("/api/sessions/t1-pair1").json()
    assert pair["participants"] == ["c1", "l3"]
    assert pair["goal"] == 700
    assert pair["consensus"]["state"] == "open"

    # self-ballot rejected
    dup = client.post("/api/trials/t1/ballots", json={"voter": "c1", "chosen": "c1"})
    assert dup.status_code == 409


def test_simulate_endpoint(client):
    response = client.post(
        "/api/simulate",
        json={"scheme": "triadic", "trials": 50_000, "bins": 25, "seed": 9},
    )
    body = response.json()
    assert body["within_tolerance"] is True
    assert body["l1"] <= 0.02
    assert body["analytic_variance"] == 0.05
    bad = client.post("/api/simulate", json={"scheme": "triadic", "trials": 5, "bins": 50})
    assert bad.status_code == 422


def test_disagreement_endpoint(client):
    response = client.post(
        "/api/disagreement",
        json={"a": {"D": -700, "H": -800, "T": 1200}, "b": {"D": -600, "H": -800, "T": 1400}},
    )
    body = response.json()
    assert body["raw_text"] == "0.109091"
    assert body["display"] == ">10%"
    assert body["deltas"] == {"D": -100, "H": 0, "T": -200}
    mismatched = client.post("/api/disagreement", json={"a": {"D": 1}, "b": {"E": 1}})
    assert mismatched.status_code == 422


def test_restart_resumes_sessions(tmp_path, fixture_dir):
    config = ServiceConfig(data_dir=tmp_path / "data")
    app = create_app(config)
    with TestClient(app) as client:
        client.post("/api/baselines",
                    json={"text": (fixture_dir / "federal_baseline.csv").read_text()})
        make_session(client)
        client.post(
            "/api/sessions/s1/messages",
            json={"kind": "Adjust", "sender": "alice",
                  "payload": {"category": "Medicare", "amount": -500}},
        )
        before = client.get("/api/sessions/s1").json()

    with TestClient(create_app(ServiceConfig(data_dir=tmp_path / "data"))) as client:
        after = client.get("/api/sessions/s1").json()
        assert after == before
