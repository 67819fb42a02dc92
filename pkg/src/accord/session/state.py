"""Event-sourced session state.

A session applies mutating wire messages one at a time, assigning gapless
sequence numbers; replaying the applied log from an empty session of the
same configuration reproduces the state byte for byte. Each participant
may edit only their own budget. Every budget mutation in a two-user
session queues a DisagreementUpdate recomputed from scratch, so the meter
a client renders always equals the metric over current resolved budgets.
"""

from __future__ import annotations

import json
from collections import Counter

from ..core.metrics import disagreement, deficit, format_ratio6, resolve_amounts
from ..core.model import Baseline, Budget, Proposal, check_sign
from .messages import (
    SERVER,
    MessageKind,
    ProtocolError,
    WireMessage,
    check_payload_fields,
)
from .trial import (
    TrialError,
    TrialPhase,
    TrialState,
    pair_for_round3,
    record_ballot,
    run_trial_round2,
)


class SessionError(Exception):
    """Rejected message: the session is unchanged and the seq not consumed."""

    def __init__(self, code: str, detail: str, extra: dict | None = None):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail
        self.extra = extra or {}


MUTATING_KINDS = (
    MessageKind.ADJUST,
    MessageKind.SELECT_PROPOSAL,
    MessageKind.COMPARE_BALLOT,
    MessageKind.TRIAL_ADVANCE,
)


class Session:
    """One collaboration or trial session over a fixed baseline."""

    def __init__(
        self,
        session_id: str,
        baseline: Baseline,
        participants: tuple[str, ...],
        goal: int | None = None,
        trial: TrialState | None = None,
    ):
        if len(set(participants)) != len(participants) or not participants:
            raise ValueError("participants must be distinct and nonempty")
        if trial is None and len(participants) > 2:
            raise ValueError("collaboration sessions hold at most 2 users")
        if trial is not None and set(trial.camps) != set(participants):
            raise ValueError("trial camps must cover exactly the participants")
        self.id = session_id
        self.baseline = baseline
        self.participants = tuple(participants)
        self.goal = goal
        self.trial = trial
        self.kind = "trial" if trial is not None else "collab"
        self.budgets: dict[str, Budget] = {
            user: Budget(id=user, baseline_id=baseline.id, owner=user)
            for user in participants
        }
        self.proposals: dict[str, Proposal] = {}
        self.ballots: dict[tuple[str, str, str], str] = {}
        self.partial_marks: set[str] = set()
        self.last_seq = 0
        self.log: list[WireMessage] = []

    # -- application ------------------------------------------------------

    def apply(self, message: WireMessage) -> list[WireMessage]:
        """Validate and apply one mutating message; returns the broadcast set.

        The first broadcast is the applied event stamped with its sequence
        number; budget mutations in two-user sessions append a
        DisagreementUpdate. Raises SessionError without side effects on any
        rejection. A message arriving with a preassigned seq (log replay)
        must carry exactly the next sequence number.
        """
        if message.session_id != self.id:
            raise SessionError("bad-session", f"message addressed to {message.session_id!r}")
        if message.kind not in MUTATING_KINDS:
            raise SessionError("bad-kind", f"{message.kind.value} is not an applicable event")
        # Comparison ballots in plain sessions are curation votes and may come
        # from anyone; everything else is participants only, and trial ballots
        # are bound to triads below.
        open_ballot = (
            message.kind is MessageKind.COMPARE_BALLOT and self.trial is None and message.sender
        )
        if message.sender not in self.participants and not open_ballot:
            raise SessionError("not-participant", f"{message.sender!r} is not in this session")
        try:
            check_payload_fields(message)
        except ProtocolError as exc:
            raise SessionError("bad-payload", str(exc)) from None
        if message.seq is not None and message.seq != self.last_seq + 1:
            raise SessionError(
                "bad-seq", f"expected seq {self.last_seq + 1}, got {message.seq}"
            )

        handler = {
            MessageKind.ADJUST: self._apply_adjust,
            MessageKind.SELECT_PROPOSAL: self._apply_select,
            MessageKind.COMPARE_BALLOT: self._apply_ballot,
            MessageKind.TRIAL_ADVANCE: self._apply_trial_advance,
        }[message.kind]
        seq = self.last_seq + 1
        mutates_budget = handler(message, seq)

        stamped = message.stamped(seq)
        self.last_seq = seq
        self.log.append(stamped)
        broadcasts = [stamped]
        if mutates_budget and len(self.participants) == 2:
            broadcasts.append(self.disagreement_update())
        return broadcasts

    def replay(self, messages) -> None:
        for message in messages:
            self.apply(message)

    # -- handlers (validate fully before touching state) ------------------

    def _require_phase(self, wanted: TrialPhase, verb: str) -> None:
        if self.trial is not None and self.trial.phase is not wanted:
            raise SessionError(
                "phase",
                f"{verb} is a {wanted.value} action, trial is in {self.trial.phase.value}",
            )

    def _budget_owner(self, message: WireMessage) -> str:
        owner = message.payload.get("user", message.sender)
        if owner != message.sender:
            raise SessionError(
                "wrong-owner", f"{message.sender!r} may not modify {owner!r}'s budget"
            )
        return owner

    def _apply_adjust(self, message: WireMessage, seq: int) -> bool:
        self._require_phase(TrialPhase.ROUND1, "Adjust")
        owner = self._budget_owner(message)
        category_id = message.payload["category"]
        amount = message.payload["amount"]
        if category_id not in self.baseline.amounts:
            raise SessionError("unknown-category", f"no category {category_id!r}")
        if not isinstance(amount, int) or isinstance(amount, bool):
            raise SessionError("bad-payload", f"amount must be an integer, got {amount!r}")
        kind = self.baseline.kind_of(category_id)
        if not check_sign(kind, amount):
            raise SessionError(
                "sign-convention",
                f"{kind.value} category {category_id!r} cannot take amount {amount}",
            )
        proposal = self._match_or_synthesize(category_id, amount, owner, seq)
        self._select(owner, proposal)
        return True

    def _apply_select(self, message: WireMessage, seq: int) -> bool:
        self._require_phase(TrialPhase.ROUND1, "SelectProposal")
        owner = self._budget_owner(message)
        proposal_id = message.payload["proposal"]
        proposal = self.proposals.get(proposal_id)
        if proposal is None:
            raise SessionError("unknown-proposal", f"no proposal {proposal_id!r}")
        self._select(owner, proposal)
        return True

    def _apply_ballot(self, message: WireMessage, seq: int) -> bool:
        self._require_phase(TrialPhase.ROUND2, "CompareBallot")
        a = message.payload["budget_a"]
        b = message.payload["budget_b"]
        choice = message.payload["choice"]
        if a == b:
            raise SessionError("bad-payload", "budget_a and budget_b must differ")
        for ref in (a, b):
            if ref not in self.budgets:
                raise SessionError("unknown-budget", f"no budget {ref!r} in this session")
        if choice not in (a, b):
            raise SessionError("bad-payload", f"choice {choice!r} is not one of the pair")
        voter = message.sender
        if self.trial is not None:
            try:
                expected = set(self.trial.triad_of(voter)) - {voter}
            except TrialError as exc:
                raise SessionError("trial", str(exc)) from None
            if {a, b} != expected:
                raise SessionError(
                    "trial",
                    f"round-2 ballot must compare the other two triad members {sorted(expected)}",
                )
        key = (voter,) + tuple(sorted((a, b)))
        if key in self.ballots:
            raise SessionError(
                "duplicate-ballot",
                f"{voter!r} already voted on this pair",
                extra={"prior_choice": self.ballots[key]},
            )
        if self.trial is not None:
            try:
                record_ballot(self.trial, voter, choice)
            except TrialError as exc:
                raise SessionError("trial", str(exc)) from None
        self.ballots[key] = choice
        return False

    def _apply_trial_advance(self, message: WireMessage, seq: int) -> bool:
        action = message.payload["action"]
        if action == "mark_partial":
            if self.goal is None:
                raise SessionError("phase", "no goal to mark partial consensus against")
            self.partial_marks.add(message.sender)
            return False
        if action != "advance":
            raise SessionError("bad-payload", f"unknown trial action {action!r}")
        if self.trial is None:
            raise SessionError("phase", "not a trial session")
        try:
            next_phase = self.trial.phase.next()
            if self.trial.phase is TrialPhase.ROUND2:
                run_trial_round2(self.trial)
                pair_for_round3(self.trial)
        except TrialError as exc:
            raise SessionError("phase", str(exc)) from None
        self.trial.phase = next_phase
        return False

    # -- budget mechanics --------------------------------------------------

    def _match_or_synthesize(self, category_id, amount, author, seq) -> Proposal:
        for proposal in self.proposals.values():
            if proposal.category_id == category_id and proposal.target_amount == amount:
                return proposal
        proposal = Proposal(
            id=f"adj-{seq}",
            category_id=category_id,
            target_amount=amount,
            author=author,
        )
        self.proposals[proposal.id] = proposal
        return proposal

    def _select(self, owner: str, proposal: Proposal) -> None:
        budget = self.budgets[owner]
        selections = dict(budget.selections)
        selections[proposal.category_id] = proposal
        self.budgets[owner] = Budget(
            id=budget.id,
            baseline_id=budget.baseline_id,
            owner=owner,
            selections=selections,
        )

    def register_proposal(self, proposal: Proposal) -> None:
        """Seed the suggestion pool (not an event; call before the session starts)."""
        if self.last_seq:
            raise SessionError("phase", "cannot seed proposals after events applied")
        self.proposals[proposal.id] = proposal

    # -- derived views -----------------------------------------------------

    def resolved(self, user: str) -> dict[str, int]:
        return resolve_amounts(self.budgets[user], self.baseline)

    def deficits(self) -> dict[str, int]:
        return {user: deficit(self.resolved(user)) for user in self.participants}

    def disagreement_report(self):
        if len(self.participants) != 2:
            raise SessionError("phase", "disagreement is defined between exactly 2 budgets")
        a, b = self.participants
        return disagreement(self.resolved(a), self.resolved(b))

    def disagreement_update(self) -> WireMessage:
        report = self.disagreement_report()
        return WireMessage(
            kind=MessageKind.DISAGREEMENT_UPDATE,
            session_id=self.id,
            sender=SERVER,
            seq=self.last_seq,
            payload={
                "raw": format_ratio6(2 * report.delta_total, report.magnitude_total),
                "display": report.display,
            },
        )

    def pair_tallies(self) -> dict[tuple[str, str], Counter]:
        """Comparison-vote tallies per unordered budget pair."""
        tallies: dict[tuple[str, str], Counter] = {}
        for (_, a, b), choice in self.ballots.items():
            tallies.setdefault((a, b), Counter({a: 0, b: 0}))[choice] += 1
        return tallies

    def pair_ranking(self, a: str, b: str) -> list[tuple[str, int]]:
        """The pair's budgets ranked by ballots, majority first."""
        tally = self.pair_tallies().get(tuple(sorted((a, b))), Counter({a: 0, b: 0}))
        return sorted(tally.items(), key=lambda item: (-item[1], item[0]))

    def suggestions(self, category_id: str) -> list[tuple[Proposal, int]]:
        """Existing proposals for a category, most-used first."""
        usage = Counter()
        for budget in self.budgets.values():
            chosen = budget.selections.get(category_id)
            if chosen is not None:
                usage[chosen.id] += 1
        pool = [p for p in self.proposals.values() if p.category_id == category_id]
        return sorted(
            ((p, usage[p.id]) for p in pool),
            key=lambda item: (-item[1], item[0].id),
        )

    def consensus_status(self) -> dict | None:
        """Goal progress for two-user goal sessions; None when no goal is set."""
        if self.goal is None or len(self.participants) != 2:
            return None
        report = self.disagreement_report()
        deficits = self.deficits()
        aligned = report.delta_total == 0
        reached = aligned and all(d <= self.goal for d in deficits.values())
        if reached:
            state = "consensus"
        elif set(self.partial_marks) == set(self.participants):
            state = "partial"
        else:
            state = "open"
        return {
            "state": state,
            "goal": self.goal,
            "deficits": deficits,
            "disagreement": report.display,
        }

    # -- canonical state ---------------------------------------------------

    def state_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "baseline_id": self.baseline.id,
            "participants": list(self.participants),
            "goal": self.goal,
            "last_seq": self.last_seq,
            "budgets": {
                user: {
                    "owner": budget.owner,
                    "selections": {
                        cat: budget.selections[cat].id for cat in sorted(budget.selections)
                    },
                    "amounts": self.resolved(user),
                }
                for user, budget in self.budgets.items()
            },
            "proposals": {
                pid: {
                    "category": p.category_id,
                    "target": p.target_amount,
                    "rationale": p.rationale,
                    "author": p.author,
                }
                for pid, p in sorted(self.proposals.items())
            },
            "ballots": sorted([*key, choice] for key, choice in self.ballots.items()),
            "partial_marks": sorted(self.partial_marks),
            "trial": self.trial.state_dict() if self.trial else None,
        }

    def state_bytes(self) -> bytes:
        return json.dumps(self.state_dict(), sort_keys=True, separators=(",", ":")).encode()


def apply_event(session: Session, message: WireMessage) -> tuple[Session, list[WireMessage]]:
    """Apply one event; returns the (updated) session and its broadcast set."""
    return session, session.apply(message)


def compare_ballot(
    session: Session, voter: str, budget_a: str, budget_b: str, choice: str
) -> tuple[WireMessage, list[tuple[str, int]]]:
    """Record one comparison ballot; returns the applied event and the pair ranking."""
    message = WireMessage(
        kind=MessageKind.COMPARE_BALLOT,
        session_id=session.id,
        sender=voter,
        seq=None,
        payload={"budget_a": budget_a, "budget_b": budget_b, "choice": choice},
    )
    broadcasts = session.apply(message)
    return broadcasts[0], session.pair_ranking(budget_a, budget_b)


def make_snapshot(session: Session, for_user: str | None = None) -> WireMessage:
    """Full state resync message; what a client gets back for a Hello."""
    two_party = len(session.participants) == 2
    report = session.disagreement_report() if two_party else None
    payload = {
        "kind": session.kind,
        "participants": list(session.participants),
        "goal": session.goal,
        "baseline": {
            "id": session.baseline.id,
            "name": session.baseline.name,
            "fiscal_label": session.baseline.fiscal_label,
            "categories": [
                {
                    "id": c.id,
                    "name": c.name,
                    "kind": c.kind.value,
                    "description": c.description,
                }
                for c in session.baseline.categories
            ],
            "amounts": dict(session.baseline.amounts),
        },
        "budgets": {
            user: {
                "selections": {
                    cat: budget.selections[cat].id for cat in sorted(budget.selections)
                },
                "amounts": session.resolved(user),
            }
            for user, budget in session.budgets.items()
        },
        "proposals": {
            pid: {
                "category": p.category_id,
                "target": p.target_amount,
                "rationale": p.rationale,
                "author": p.author,
            }
            for pid, p in sorted(session.proposals.items())
        },
        "deficits": session.deficits(),
        "disagreement": (
            {
                "raw": format_ratio6(2 * report.delta_total, report.magnitude_total),
                "display": report.display,
            }
            if report
            else None
        ),
        "consensus": session.consensus_status(),
        "trial": session.trial.state_dict() if session.trial else None,
    }
    return WireMessage(
        kind=MessageKind.SNAPSHOT,
        session_id=session.id,
        sender=SERVER,
        seq=session.last_seq,
        payload=payload,
    )


def error_message(session_id: str, seq: int, error: SessionError) -> WireMessage:
    payload = {"code": error.code, "detail": error.detail}
    payload.update(error.extra)
    return WireMessage(
        kind=MessageKind.ERROR,
        session_id=session_id,
        sender=SERVER,
        seq=seq,
        payload=payload,
    )


__all__ = [
    "MUTATING_KINDS",
    "Session",
    "SessionError",
    "apply_event",
    "compare_ballot",
    "error_message",
    "make_snapshot",
]
