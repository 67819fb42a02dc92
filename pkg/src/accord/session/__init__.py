"""Live collaboration sessions: wire protocol, event-sourced state, trials, service."""

from .messages import MessageKind, ProtocolError, WireMessage, decode_line, encode_line
from .state import Session, SessionError, apply_event, compare_ballot, make_snapshot
from .trial import (
    Camp,
    TrialLabel,
    TrialPhase,
    TrialState,
    consensus_goal,
    form_triads,
    pair_for_round3,
    run_trial_round2,
)
from .config import ConfigError, ServiceConfig, load_config
from .store import SessionStore

__all__ = [
    "Camp",
    "ConfigError",
    "MessageKind",
    "ProtocolError",
    "ServiceConfig",
    "Session",
    "SessionError",
    "SessionStore",
    "TrialLabel",
    "TrialPhase",
    "TrialState",
    "WireMessage",
    "apply_event",
    "compare_ballot",
    "consensus_goal",
    "decode_line",
    "encode_line",
    "form_triads",
    "load_config",
    "make_snapshot",
    "pair_for_round3",
    "run_trial_round2",
]
