"""HTTP and WebSocket service around the engine.

REST endpoints cover baseline/session/trial management and the pure
compute surfaces (winner-density simulation, disagreement); the WebSocket
endpoint speaks the newline-delimited wire protocol for live
collaboration. All request and response bodies are pydantic models.
"""

from __future__ import annotations

import asyncio
import contextlib
from typing import Literal

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel, Field

from ..core.metrics import deficit, disagreement, format_ratio6
from ..density.simulate import sample_winner_density, verify_mixture_identity
from ..ingest.files import ParseError
from ..voting.rounds import Scheme
from .config import ServiceConfig
from .messages import SERVER, MessageKind, ProtocolError, WireMessage, decode_line, encode_line
from .state import Session, SessionError, error_message, make_snapshot
from .store import SessionStore, StoreError
from .trial import Camp, TrialError

DEFAULT_TOLERANCE = {"triadic": 0.02, "hotornot": 0.02, "mixture": 0.03}


# -- wire-facing pydantic models ------------------------------------------


class BaselineUpload(BaseModel):
    text: str


class CategoryOut(BaseModel):
    id: str
    name: str
    kind: str
    description: str


class BaselineOut(BaseModel):
    id: str
    name: str
    fiscal_label: str
    categories: list[CategoryOut]
    amounts: dict[str, int]
    deficit: int


class SessionCreate(BaseModel):
    baseline_id: str
    participants: list[str] = Field(min_length=1, max_length=2)
    goal: int | None = None
    session_id: str | None = None


class BudgetOut(BaseModel):
    owner: str
    selections: dict[str, str]
    amounts: dict[str, int]


class DisagreementOut(BaseModel):
    raw: float
    raw_text: str
    display: str
    deltas: dict[str, int]


class SessionOut(BaseModel):
    id: str
    kind: str
    baseline_id: str
    participants: list[str]
    goal: int | None
    seq: int
    budgets: dict[str, BudgetOut]
    deficits: dict[str, int]
    disagreement: DisagreementOut | None
    consensus: dict | None
    trial: dict | None


class MessageIn(BaseModel):
    kind: str
    sender: str
    payload: dict


class MessageResult(BaseModel):
    broadcasts: list[str]
    seq: int


class SuggestionOut(BaseModel):
    proposal_id: str
    category: str
    target_amount: int
    rationale: str
    author: str
    usage: int


class TrialCreate(BaseModel):
    baseline_id: str
    camps: dict[str, Literal["conservative", "liberal"]]
    seed: int = 0
    triads: list[list[str]] | None = None
    session_id: str | None = None


class TrialOut(BaseModel):
    session_id: str
    goal: int | None
    phase: str
    camps: dict[str, str]
    triads: list[list[str]]
    ballots: dict[str, str]
    classifications: dict[str, str]
    pairs: list[list[str]]
    pair_sessions: list[str]


class BallotIn(BaseModel):
    voter: str
    chosen: str


class SimulateIn(BaseModel):
    scheme: Literal["triadic", "hotornot", "mixture"]
    trials: int = 1_000_000
    bins: int = 50
    seed: int = 0
    tolerance: float | None = None


class SimulateOut(BaseModel):
    scheme: str
    trials: int
    bins: int
    seed: int
    l1: float
    max_z: float
    mean: float
    variance: float
    analytic_mean: float
    analytic_variance: float
    tolerance: float
    within_tolerance: bool


class DisagreementIn(BaseModel):
    a: dict[str, int]
    b: dict[str, int]


# -- helpers ----------------------------------------------------------------


def _http_error(status: int, code: str, detail: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "detail": detail})


def _baseline_out(baseline) -> BaselineOut:
    return BaselineOut(
        id=baseline.id,
        name=baseline.name,
        fiscal_label=baseline.fiscal_label,
        categories=[
            CategoryOut(id=c.id, name=c.name, kind=c.kind.value, description=c.description)
            for c in baseline.categories
        ],
        amounts=dict(baseline.amounts),
        deficit=deficit(baseline.amounts),
    )


def _session_out(session: Session) -> SessionOut:
    two_party = len(session.participants) == 2
    report = session.disagreement_report() if two_party else None
    return SessionOut(
        id=session.id,
        kind=session.kind,
        baseline_id=session.baseline.id,
        participants=list(session.participants),
        goal=session.goal,
        seq=session.last_seq,
        budgets={
            user: BudgetOut(
                owner=user,
                selections={c: p.id for c, p in budget.selections.items()},
                amounts=session.resolved(user),
            )
            for user, budget in session.budgets.items()
        },
        deficits=session.deficits(),
        disagreement=(
            DisagreementOut(
                raw=report.raw,
                raw_text=format_ratio6(2 * report.delta_total, report.magnitude_total),
                display=report.display,
                deltas=report.deltas,
            )
            if report
            else None
        ),
        consensus=session.consensus_status(),
        trial=session.trial.state_dict() if session.trial else None,
    )


def _trial_out(store: SessionStore, session: Session) -> TrialOut:
    trial = session.trial
    pair_ids = []
    if trial.pairs:
        pair_ids = [s.id for s in store.ensure_pair_sessions(session)]
    return TrialOut(
        session_id=session.id,
        goal=session.goal,
        phase=trial.phase.value,
        camps={u: c.value for u, c in trial.camps.items()},
        triads=[list(t) for t in trial.triads],
        ballots=dict(trial.ballots),
        classifications={u: label.value for u, label in trial.classifications.items()},
        pairs=[list(p) for p in trial.pairs],
        pair_sessions=pair_ids,
    )


class ConnectionRegistry:
    """Open WebSockets per session, for fan-out of broadcast sets."""

    def __init__(self):
        self.sockets: dict[str, list[WebSocket]] = {}

    def add(self, session_id: str, socket: WebSocket) -> None:
        self.sockets.setdefault(session_id, []).append(socket)

    def drop(self, session_id: str, socket: WebSocket) -> None:
        peers = self.sockets.get(session_id, [])
        if socket in peers:
            peers.remove(socket)

    async def fanout(self, session_id: str, lines: list[str]) -> None:
        for socket in list(self.sockets.get(session_id, [])):
            for line in lines:
                try:
                    await socket.send_text(line)
                except Exception:
                    self.drop(session_id, socket)
                    break


def create_app(config: ServiceConfig | None = None, store: SessionStore | None = None) -> FastAPI:
    config = config or ServiceConfig()
    if store is None:
        store = SessionStore(config.data_dir)
    registry = ConnectionRegistry()

    async def sweep_idle():
        while True:
            await asyncio.sleep(min(config.idle_timeout_s / 4, 60.0))
            for session_id in store.idle_sessions(config.idle_timeout_s):
                if not registry.sockets.get(session_id):
                    store.evict(session_id)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        sweeper = asyncio.create_task(sweep_idle())
        try:
            yield
        finally:
            sweeper.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sweeper
            store.close()

    app = FastAPI(title="accord", lifespan=lifespan)
    app.state.store = store
    app.state.config = config

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    # -- baselines ---------------------------------------------------------

    @app.post("/api/baselines", response_model=BaselineOut)
    def upload_baseline(body: BaselineUpload) -> BaselineOut:
        try:
            baseline = store.add_baseline(body.text)
        except ParseError as exc:
            raise _http_error(422, "parse", str(exc))
        return _baseline_out(baseline)

    @app.get("/api/baselines", response_model=list[str])
    def list_baselines() -> list[str]:
        return sorted(store.baselines)

    @app.get("/api/baselines/{baseline_id}", response_model=BaselineOut)
    def get_baseline(baseline_id: str) -> BaselineOut:
        if baseline_id not in store.baselines:
            raise _http_error(404, "unknown-baseline", baseline_id)
        return _baseline_out(store.baselines[baseline_id])

    # -- sessions ------------------------------------------------------------

    @app.post("/api/sessions", response_model=SessionOut)
    def create_session(body: SessionCreate) -> SessionOut:
        try:
            session = store.create_session(
                baseline_id=body.baseline_id,
                participants=tuple(body.participants),
                goal=body.goal,
                session_id=body.session_id,
            )
        except (StoreError, ValueError) as exc:
            raise _http_error(409, "create", str(exc))
        return _session_out(session)

    @app.get("/api/sessions/{session_id}", response_model=SessionOut)
    def get_session(session_id: str) -> SessionOut:
        return _session_out(_session(session_id))

    @app.get("/api/sessions/{session_id}/events", response_model=list[str])
    def get_events(session_id: str) -> list[str]:
        return [encode_line(m) for m in _session(session_id).log]

    @app.get(
        "/api/sessions/{session_id}/suggestions/{category_id}",
        response_model=list[SuggestionOut],
    )
    def get_suggestions(session_id: str, category_id: str) -> list[SuggestionOut]:
        session = _session(session_id)
        if category_id not in session.baseline.amounts:
            raise _http_error(404, "unknown-category", category_id)
        return [
            SuggestionOut(
                proposal_id=p.id,
                category=p.category_id,
                target_amount=p.target_amount,
                rationale=p.rationale,
                author=p.author,
                usage=usage,
            )
            for p, usage in session.suggestions(category_id)
        ]

    @app.post("/api/sessions/{session_id}/messages", response_model=MessageResult)
    def post_message(session_id: str, body: MessageIn) -> MessageResult:
        session = _session(session_id)
        try:
            kind = MessageKind(body.kind)
        except ValueError:
            raise _http_error(422, "bad-kind", body.kind)
        message = WireMessage(
            kind=kind, session_id=session_id, sender=body.sender, seq=None, payload=body.payload
        )
        broadcasts = _apply(session, message)
        return MessageResult(broadcasts=[encode_line(m) for m in broadcasts], seq=session.last_seq)

    # -- trials ----------------------------------------------------------------

    @app.post("/api/trials", response_model=TrialOut)
    def create_trial(body: TrialCreate) -> TrialOut:
        try:
            session = store.create_trial(
                baseline_id=body.baseline_id,
                camps={u: Camp(c) for u, c in body.camps.items()},
                seed=body.seed,
                triads=tuple(tuple(t) for t in body.triads) if body.triads else None,
                session_id=body.session_id,
            )
        except (StoreError, TrialError, ValueError) as exc:
            raise _http_error(409, "create", str(exc))
        return _trial_out(store, session)

    @app.get("/api/trials/{session_id}", response_model=TrialOut)
    def get_trial(session_id: str) -> TrialOut:
        return _trial_out(store, _trial_session(session_id))

    @app.post("/api/trials/{session_id}/advance", response_model=TrialOut)
    def advance_trial(session_id: str, sender: str = SERVER) -> TrialOut:
        session = _trial_session(session_id)
        message = WireMessage(
            kind=MessageKind.TRIAL_ADVANCE,
            session_id=session_id,
            sender=sender if sender in session.participants else session.participants[0],
            seq=None,
            payload={"action": "advance"},
        )
        _apply(session, message)
        return _trial_out(store, session)

    @app.post("/api/trials/{session_id}/ballots", response_model=TrialOut)
    def post_trial_ballot(session_id: str, body: BallotIn) -> TrialOut:
        session = _trial_session(session_id)
        try:
            others = sorted(set(session.trial.triad_of(body.voter)) - {body.voter})
        except TrialError as exc:
            raise _http_error(422, "trial", str(exc))
        message = WireMessage(
            kind=MessageKind.COMPARE_BALLOT,
            session_id=session_id,
            sender=body.voter,
            seq=None,
            payload={"budget_a": others[0], "budget_b": others[1], "choice": body.chosen},
        )
        _apply(session, message)
        return _trial_out(store, session)

    # -- compute ------------------------------------------------------------

    @app.post("/api/simulate", response_model=SimulateOut)
    def simulate(body: SimulateIn) -> SimulateOut:
        tolerance = body.tolerance if body.tolerance is not None else DEFAULT_TOLERANCE[body.scheme]
        try:
            if body.scheme == "mixture":
                run = verify_mixture_identity(body.trials, body.bins, body.seed)
            else:
                run = sample_winner_density(Scheme(body.scheme), body.trials, body.bins, body.seed)
        except ValueError as exc:
            raise _http_error(422, "simulate", str(exc))
        report = run.report
        return SimulateOut(
            scheme=report.scheme,
            trials=report.trials,
            bins=report.bins,
            seed=report.seed,
            l1=report.l1,
            max_z=report.max_z,
            mean=report.mean,
            variance=report.variance,
            analytic_mean=report.analytic_mean,
            analytic_variance=report.analytic_variance,
            tolerance=tolerance,
            within_tolerance=report.l1 <= tolerance,
        )

    @app.post("/api/disagreement", response_model=DisagreementOut)
    def compute_disagreement(body: DisagreementIn) -> DisagreementOut:
        try:
            report = disagreement(body.a, body.b)
        except Exception as exc:
            raise _http_error(422, "disagreement", str(exc))
        return DisagreementOut(
            raw=report.raw,
            raw_text=format_ratio6(2 * report.delta_total, report.magnitude_total),
            display=report.display,
            deltas=report.deltas,
        )

    # -- live protocol ---------------------------------------------------------

    @app.websocket("/ws/sessions/{session_id}")
    async def session_socket(socket: WebSocket, session_id: str, user: str = ""):
        await socket.accept()
        try:
            session = store.get_session(session_id)
        except StoreError:
            await socket.close(code=4004)
            return
        registry.add(session_id, socket)
        try:
            while True:
                line = await socket.receive_text()
                try:
                    message = decode_line(line)
                except ProtocolError as exc:
                    error = SessionError("protocol", str(exc))
                    await socket.send_text(
                        encode_line(error_message(session_id, session.last_seq, error))
                    )
                    continue
                if message.kind is MessageKind.HELLO:
                    await socket.send_text(encode_line(make_snapshot(session)))
                    continue
                try:
                    broadcasts = store.apply(session_id, message)
                except SessionError as exc:
                    await socket.send_text(
                        encode_line(error_message(session_id, session.last_seq, exc))
                    )
                    continue
                await registry.fanout(session_id, [encode_line(m) for m in broadcasts])
        except WebSocketDisconnect:
            pass
        finally:
            registry.drop(session_id, socket)

    def _session(session_id: str) -> Session:
        try:
            return store.get_session(session_id)
        except StoreError as exc:
            raise _http_error(404, "unknown-session", str(exc))
        except ParseError as exc:
            raise _http_error(500, "corrupt-store", str(exc))

    def _trial_session(session_id: str) -> Session:
        session = _session(session_id)
        if session.trial is None:
            raise _http_error(409, "not-a-trial", session_id)
        return session

    def _apply(session: Session, message: WireMessage) -> list[WireMessage]:
        try:
            return store.apply(session.id, message)
        except SessionError as exc:
            raise _http_error(
                409,
                exc.code,
                encode_line(error_message(session.id, session.last_seq, exc)),
            )

    return app
