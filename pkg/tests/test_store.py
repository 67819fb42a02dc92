import pytest

from accord.session.config import ConfigError, ServiceConfig, load_config
from accord.session.messages import MessageKind, WireMessage, decode_line
from accord.session.store import SessionStore, StoreError
from accord.session.trial import Camp, TrialPhase

C, L = Camp.CONSERVATIVE, Camp.LIBERAL
CAMPS = {"c1": C, "c2": C, "c3": C, "l1": L, "l2": L, "l3": L}
TRIADS = (("c1", "c2", "l1"), ("l2", "l3", "c3"))


@pytest.fixture
def store(tmp_path, fixture_dir):
    store = SessionStore(tmp_path / "data")
    store.add_baseline((fixture_dir / "federal_baseline.csv").read_text())
    return store


def adjust(session_id, sender, category, amount):
    return WireMessage(
        kind=MessageKind.ADJUST,
        session_id=session_id,
        sender=sender,
        seq=None,
        payload={"category": category, "amount": amount},
    )


def test_baseline_persisted_canonically(store, tmp_path):
    path = tmp_path / "data" / "baselines" / "toy-federal.csv"
    assert path.exists()
    reloaded = SessionStore(tmp_path / "data")
    assert reloaded.baselines["toy-federal"] == store.baselines["toy-federal"]


def test_create_apply_and_restart_replays_identically(store, tmp_path):
    session = store.create_session("toy-federal", ("alice", "bob"), session_id="s1")
    store.apply("s1", adjust("s1", "alice", "Defense", -800))
    store.apply("s1", adjust("s1", "bob", "IncomeTax", 2000))
    expected = session.state_bytes()

    restarted = SessionStore(tmp_path / "data")
    assert restarted.get_session("s1").state_bytes() == expected


def test_log_lines_are_wire_messages(store, tmp_path):
    store.create_session("toy-federal", ("alice", "bob"), session_id="s1")
    store.apply("s1", adjust("s1", "alice", "Defense", -800))
    lines = (tmp_path / "data" / "sessions" / "s1.log").read_text().splitlines()
    assert len(lines) == 1
    message = decode_line(lines[0])
    assert message.kind is MessageKind.ADJUST
    assert message.seq == 1


def test_rejected_event_writes_nothing(store, tmp_path):
    store.create_session("toy-federal", ("alice", "bob"), session_id="s1")
    from accord.session.state import SessionError

    with pytest.raises(SessionError):
        store.apply("s1", adjust("s1", "mallory", "Defense", -800))
    assert not (tmp_path / "data" / "sessions" / "s1.log").exists()


def test_unknown_ids_raise(store):
    with pytest.raises(StoreError):
        store.create_session("ghost", ("a", "b"))
    with pytest.raises(StoreError):
        store.get_session("ghost")


def test_duplicate_session_id_rejected(store):
    store.create_session("toy-federal", ("a", "b"), session_id="dup")
    with pytest.raises(StoreError):
        store.create_session("toy-federal", ("x", "y"), session_id="dup")


def test_eviction_and_lazy_reload(store):
    store.create_session("toy-federal", ("alice", "bob"), session_id="s1")
    store.apply("s1", adjust("s1", "alice", "Defense", -800))
    expected = store.get_session("s1").state_bytes()
    store.evict("s1")
    assert "s1" not in store.sessions
    assert store.get_session("s1").state_bytes() == expected


def test_idle_sessions_tracking(store):
    store.create_session("toy-federal", ("a", "b"), session_id="s1")
    assert store.idle_sessions(timeout_s=3600) == []
    assert store.idle_sessions(timeout_s=0, now=store.last_activity["s1"] + 10) == ["s1"]


def test_trial_lifecycle_with_pair_sessions(store, tmp_path):
    store.create_trial("toy-federal", CAMPS, triads=TRIADS, session_id="t1")
    trial_session = store.get_session("t1")
    assert trial_session.goal == 700  # half the 1400 fixture deficit

    def advance():
        store.apply("t1", WireMessage(
            kind=MessageKind.TRIAL_ADVANCE, session_id="t1", sender="c1",
            seq=None, payload={"action": "advance"},
        ))

    advance()
    advance()
    for voter, choice in (
        ("c1", "c2"), ("c2", "c1"), ("l1", "c2"),
        ("l2", "l3"), ("l3", "l2"), ("c3", "l2"),
    ):
        others = sorted(set(trial_session.trial.triad_of(voter)) - {voter})
        store.apply("t1", WireMessage(
            kind=MessageKind.COMPARE_BALLOT, session_id="t1", sender=voter, seq=None,
            payload={"budget_a": others[0], "budget_b": others[1], "choice": choice},
        ))
    advance()

    assert trial_session.trial.pairs == (("c1", "l3"), ("c2", "l2"), ("c3", "l1"))
    for index, pair in enumerate(trial_session.trial.pairs, start=1):
        pair_session = store.get_session(f"t1-pair{index}")
        assert pair_session.participants == pair
        assert pair_session.goal == 700

    # restart: trial state and pair sessions come back identical
    restarted = SessionStore(tmp_path / "data")
    again = restarted.get_session("t1")
    assert again.state_bytes() == trial_session.state_bytes()
    assert again.trial.phase is TrialPhase.ROUND3
    assert restarted.get_session("t1-pair1").participants == ("c1", "l3")


# -- config ---------------------------------------------------------------------


def test_config_defaults():
    config = load_config(None, env={})
    assert config == ServiceConfig()


def test_config_file_and_env_overrides(tmp_path):
    path = tmp_path / "svc.yaml"
    path.write_text("host: 0.0.0.0\nport: 9000\ndata_dir: /tmp/x\nidle_timeout_s: 60\n")
    config = load_config(path, env={})
    assert config.host == "0.0.0.0"
    assert config.port == 9000
    assert str(config.data_dir) == "/tmp/x"
    assert config.idle_timeout_s == 60.0
    config = load_config(path, env={"ACCORD_PORT": "9100"})
    assert config.port == 9100


def test_config_unknown_key_named(tmp_path):
    path = tmp_path / "svc.yaml"
    path.write_text("listen_port: 9000\n")
    with pytest.raises(ConfigError, match="listen_port"):
        load_config(path, env={})


def test_config_bad_value_types(tmp_path):
    path = tmp_path / "svc.yaml"
    path.write_text("port: not-a-number\n")
    with pytest.raises(ConfigError, match="port"):
        load_config(path, env={})


def test_config_rejects_non_mapping(tmp_path):
    path = tmp_path / "svc.yaml"
    path.write_text("- just\n- a\n- list\n")
    with pytest.raises(ConfigError, match="mapping"):
        load_config(path, env={})
