"""The newline-delimited wire protocol.

Every message is one line of JSON with exactly the envelope fields kind,
session_id, sender, seq, payload. Client-submitted messages carry seq
null; the server assigns sequence numbers when it applies an event and
stamps derived messages (Snapshot, DisagreementUpdate, Error) with the
seq of the state they describe. Encoding is canonical (sorted keys,
compact separators, ASCII) so identical states produce identical bytes.

See PROTOCOL.md at the repository root for the full schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum

SERVER = "server"


class ProtocolError(Exception):
    """A line that does not parse as a protocol message."""


class MessageKind(str, Enum):
    HELLO = "Hello"
    SNAPSHOT = "Snapshot"
    ADJUST = "Adjust"
    SELECT_PROPOSAL = "SelectProposal"
    DISAGREEMENT_UPDATE = "DisagreementUpdate"
    COMPARE_BALLOT = "CompareBallot"
    TRIAL_ADVANCE = "TrialAdvance"
    ERROR = "Error"


# Payload fields a client must provide, per kind.
REQUIRED_PAYLOAD_FIELDS = {
    MessageKind.HELLO: (),
    MessageKind.ADJUST: ("category", "amount"),
    MessageKind.SELECT_PROPOSAL: ("proposal",),
    MessageKind.COMPARE_BALLOT: ("budget_a", "budget_b", "choice"),
    MessageKind.TRIAL_ADVANCE: ("action",),
}

_ENVELOPE = ("kind", "payload", "sender", "seq", "session_id")


@dataclass(frozen=True)
class WireMessage:
    kind: MessageKind
    session_id: str
    sender: str
    seq: int | None
    payload: dict

    def stamped(self, seq: int) -> "WireMessage":
        return replace(self, seq=seq)


def encode_line(message: WireMessage) -> str:
    """One canonical JSON line, without the trailing newline."""
    return json.dumps(
        {
            "kind": message.kind.value,
            "session_id": message.session_id,
            "sender": message.sender,
            "seq": message.seq,
            "payload": message.payload,
        },
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=True,
    )


def decode_line(line: str) -> WireMessage:
    """Strict inverse of encode_line; raises ProtocolError on anything off-schema."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ProtocolError("message is not a JSON object")
    if tuple(sorted(obj)) != _ENVELOPE:
        raise ProtocolError(
            f"envelope must have exactly the fields {_ENVELOPE}, got {tuple(sorted(obj))}"
        )
    try:
        kind = MessageKind(obj["kind"])
    except ValueError:
        raise ProtocolError(f"unknown message kind {obj['kind']!r}") from None
    seq = obj["seq"]
    if seq is not None and (not isinstance(seq, int) or isinstance(seq, bool) or seq < 0):
        raise ProtocolError(f"seq must be null or a nonnegative integer, got {seq!r}")
    if not isinstance(obj["session_id"], str) or not isinstance(obj["sender"], str):
        raise ProtocolError("session_id and sender must be strings")
    if not isinstance(obj["payload"], dict):
        raise ProtocolError("payload must be an object")
    return WireMessage(
        kind=kind,
        session_id=obj["session_id"],
        sender=obj["sender"],
        seq=seq,
        payload=obj["payload"],
    )


def check_payload_fields(message: WireMessage) -> None:
    """Shape check for client-submitted kinds: required fields must be present."""
    required = REQUIRED_PAYLOAD_FIELDS.get(message.kind)
    if required is None:
        raise ProtocolError(f"clients may not send {message.kind.value} messages")
    missing = [f for f in required if f not in message.payload]
    if missing:
        raise ProtocolError(
            f"{message.kind.value} payload missing fields: {', '.join(missing)}"
        )
