"""Durable session storage: append-only event logs plus creation metadata.

Each session owns one JSONL log of applied wire messages and one
immutable meta file; a baseline is persisted as its canonical rendered
file. Recovery is replay: loading a session rebuilds it from meta and
reapplies the log, which the event-sourcing determinism tests pin down to
byte-identical state. Within one session all writes are serialized under
a lock; distinct sessions proceed independently.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from pathlib import Path

from ..core.metrics import deficit
from ..core.model import Baseline
from ..ingest.files import parse_baseline, render_baseline
from .messages import WireMessage, decode_line, encode_line
from .state import Session
from .trial import Camp, TrialState, consensus_goal, form_triads, validate_triads


class StoreError(Exception):
    pass


class SessionStore:
    def __init__(self, data_dir: Path | str):
        self.data_dir = Path(data_dir)
        self.baseline_dir = self.data_dir / "baselines"
        self.session_dir = self.data_dir / "sessions"
        self.baseline_dir.mkdir(parents=True, exist_ok=True)
        self.session_dir.mkdir(parents=True, exist_ok=True)
        self.baselines: dict[str, Baseline] = {}
        self.sessions: dict[str, Session] = {}
        self.last_activity: dict[str, float] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self.load()

    # -- loading -----------------------------------------------------------

    def load(self) -> None:
        for path in sorted(self.baseline_dir.glob("*.csv")):
            baseline = parse_baseline(path.read_text())
            self.baselines[baseline.id] = baseline
        for path in sorted(self.session_dir.glob("*.meta.json")):
            session = self._restore(json.loads(path.read_text()))
            self.sessions[session.id] = session

    def _restore(self, meta: dict) -> Session:
        baseline = self.baselines[meta["baseline_id"]]
        trial = None
        if meta["trial"] is not None:
            trial = TrialState(
                camps={u: Camp(c) for u, c in meta["trial"]["camps"].items()},
                triads=tuple(tuple(t) for t in meta["trial"]["triads"]),
            )
        session = Session(
            session_id=meta["id"],
            baseline=baseline,
            participants=tuple(meta["participants"]),
            goal=meta["goal"],
            trial=trial,
        )
        log_path = self._log_path(session.id)
        if log_path.exists():
            with log_path.open() as handle:
                session.replay(decode_line(line) for line in handle if line.strip())
        return session

    # -- creation ----------------------------------------------------------

    def add_baseline(self, text: str) -> Baseline:
        baseline = parse_baseline(text)
        self.baselines[baseline.id] = baseline
        (self.baseline_dir / f"{baseline.id}.csv").write_text(render_baseline(baseline))
        return baseline

    def create_session(
        self,
        baseline_id: str,
        participants: tuple[str, ...],
        goal: int | None = None,
        session_id: str | None = None,
    ) -> Session:
        baseline = self._baseline(baseline_id)
        session = Session(
            session_id=self._new_id(session_id),
            baseline=baseline,
            participants=participants,
            goal=goal,
        )
        self._persist_new(session)
        return session

    def create_trial(
        self,
        baseline_id: str,
        camps: dict[str, Camp],
        seed: int = 0,
        triads: tuple[tuple[str, str, str], ...] | None = None,
        session_id: str | None = None,
    ) -> Session:
        baseline = self._baseline(baseline_id)
        if triads is None:
            triads = form_triads(camps, seed)
        else:
            validate_triads(camps, triads)
        trial = TrialState(camps=dict(camps), triads=tuple(tuple(t) for t in triads))
        session = Session(
            session_id=self._new_id(session_id),
            baseline=baseline,
            participants=tuple(camps),
            goal=consensus_goal(deficit(baseline.amounts)),
            trial=trial,
        )
        self._persist_new(session)
        return session

    def _baseline(self, baseline_id: str) -> Baseline:
        if baseline_id not in self.baselines:
            raise StoreError(f"unknown baseline {baseline_id!r}")
        return self.baselines[baseline_id]

    def _new_id(self, session_id: str | None) -> str:
        if session_id is None:
            session_id = uuid.uuid4().hex[:12]
        if session_id in self.sessions or self._meta_path(session_id).exists():
            raise StoreError(f"session {session_id!r} already exists")
        return session_id

    def _persist_new(self, session: Session) -> None:
        meta = {
            "id": session.id,
            "baseline_id": session.baseline.id,
            "participants": list(session.participants),
            "goal": session.goal,
            "trial": (
                {
                    "camps": {u: c.value for u, c in session.trial.camps.items()},
                    "triads": [list(t) for t in session.trial.triads],
                }
                if session.trial
                else None
            ),
        }
        self._meta_path(session.id).write_text(json.dumps(meta, sort_keys=True, indent=1))
        with self._registry_lock:
            self.sessions[session.id] = session
            self.last_activity[session.id] = time.monotonic()

    # -- event application ---------------------------------------------------

    def get_session(self, session_id: str) -> Session:
        """In-memory session, reloading evicted ones from disk by replay."""
        with self._registry_lock:
            session = self.sessions.get(session_id)
        if session is None:
            meta_path = self._meta_path(session_id)
            if not meta_path.exists():
                raise StoreError(f"unknown session {session_id!r}")
            session = self._restore(json.loads(meta_path.read_text()))
            with self._registry_lock:
                session = self.sessions.setdefault(session_id, session)
        return session

    def apply(self, session_id: str, message: WireMessage) -> list[WireMessage]:
        """Serialize, apply, and persist one event; returns the broadcast set.

        TrialAdvance events that form round-3 pairs also create the pair
        collaboration sessions as a side effect, idempotently.
        """
        session = self.get_session(session_id)
        with self._lock(session_id):
            broadcasts = session.apply(message)
            with self._log_path(session_id).open("a") as handle:
                handle.write(encode_line(broadcasts[0]) + "\n")
        self.last_activity[session_id] = time.monotonic()
        if session.trial is not None and session.trial.pairs:
            self.ensure_pair_sessions(session)
        return broadcasts

    def ensure_pair_sessions(self, trial_session: Session) -> list[Session]:
        """One two-user goal session per round-3 pair; ids derive from the trial's."""
        created = []
        for index, pair in enumerate(trial_session.trial.pairs, start=1):
            pair_id = f"{trial_session.id}-pair{index}"
            if pair_id in self.sessions or self._meta_path(pair_id).exists():
                created.append(self.get_session(pair_id))
                continue
            created.append(
                self.create_session(
                    baseline_id=trial_session.baseline.id,
                    participants=tuple(pair),
                    goal=trial_session.goal,
                    session_id=pair_id,
                )
            )
        return created

    # -- housekeeping --------------------------------------------------------

    def idle_sessions(self, timeout_s: float, now: float | None = None) -> list[str]:
        now = time.monotonic() if now is None else now
        return [
            sid
            for sid, last in self.last_activity.items()
            if now - last > timeout_s and sid in self.sessions
        ]

    def evict(self, session_id: str) -> None:
        """Drop an idle session from memory; the log on disk stays authoritative."""
        with self._registry_lock:
            self.sessions.pop(session_id, None)
            self.last_activity.pop(session_id, None)
            self._locks.pop(session_id, None)

    def close(self) -> None:
        """Logs are flushed per event; nothing buffered survives here."""
        with self._registry_lock:
            self.sessions.clear()
            self.last_activity.clear()
            self._locks.clear()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _meta_path(self, session_id: str) -> Path:
        return self.session_dir / f"{session_id}.meta.json"

    def _log_path(self, session_id: str) -> Path:
        return self.session_dir / f"{session_id}.log"
