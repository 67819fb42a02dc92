"""Trial orchestration: camps, triads, ballot-driven labels, and round-3 pairing.

A trial runs in phases. After individual budget building, participants
are grouped into triads holding two members of one camp and one of the
other; each member votes for one of the other two budgets. The minority
member's ballot picks out the moderate member of the majority camp, the
remaining majority member is the strong one, and the minority member is
labeled as such. Strong pairs with strong, moderate with moderate, and
the minority conservatives and liberals pair up as controls, every pair
chasing the same halved-deficit goal.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class TrialError(Exception):
    pass


class Camp(str, Enum):
    CONSERVATIVE = "conservative"
    LIBERAL = "liberal"


class TrialPhase(str, Enum):
    SETUP = "setup"
    ROUND1 = "round1"
    ROUND2 = "round2"
    ROUND3 = "round3"
    DONE = "done"

    def next(self) -> "TrialPhase":
        order = list(TrialPhase)
        index = order.index(self)
        if index == len(order) - 1:
            raise TrialError("trial is already done")
        return order[index + 1]


class TrialLabel(str, Enum):
    STRONG_CONSERVATIVE = "SC"
    STRONG_LIBERAL = "SL"
    MODERATE_CONSERVATIVE = "MC"
    MODERATE_LIBERAL = "ML"
    MINORITY = "minority"


@dataclass
class TrialState:
    camps: dict[str, Camp]
    triads: tuple[tuple[str, str, str], ...]
    phase: TrialPhase = TrialPhase.SETUP
    ballots: dict[str, str] = field(default_factory=dict)
    classifications: dict[str, TrialLabel] = field(default_factory=dict)
    pairs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        validate_triads(self.camps, self.triads)

    def triad_of(self, user: str) -> tuple[str, str, str]:
        for triad in self.triads:
            if user in triad:
                return triad
        raise TrialError(f"user {user!r} is not in any triad")

    def state_dict(self) -> dict:
        return {
            "phase": self.phase.value,
            "camps": {u: c.value for u, c in self.camps.items()},
            "triads": [list(t) for t in self.triads],
            "ballots": dict(sorted(self.ballots.items())),
            "classifications": {u: l.value for u, l in sorted(self.classifications.items())},
            "pairs": [list(p) for p in self.pairs],
        }


def validate_triads(camps: dict[str, Camp], triads) -> None:
    seen: set[str] = set()
    majorities = Counter()
    for triad in triads:
        if len(set(triad)) != 3:
            raise TrialError(f"triad {triad!r} must have three distinct users")
        for user in triad:
            if user not in camps:
                raise TrialError(f"triad member {user!r} has no camp")
            if user in seen:
                raise TrialError(f"user {user!r} appears in more than one triad")
            seen.add(user)
        kinds = [camps[u] for u in triad]
        conservative_count = kinds.count(Camp.CONSERVATIVE)
        if conservative_count not in (1, 2):
            raise TrialError(f"triad {triad!r} must mix camps two to one")
        majorities[Camp.CONSERVATIVE if conservative_count == 2 else Camp.LIBERAL] += 1
    missing = set(camps) - seen
    if missing:
        raise TrialError(f"users not placed in any triad: {sorted(missing)}")
    # Round 3 pairs strong/moderate/minority across camps, which needs as
    # many conservative-majority triads as liberal-majority ones.
    if triads and majorities[Camp.CONSERVATIVE] != majorities[Camp.LIBERAL]:
        raise TrialError(
            "majority camps must balance across triads, got "
            f"{majorities[Camp.CONSERVATIVE]} conservative-majority and "
            f"{majorities[Camp.LIBERAL]} liberal-majority"
        )


def form_triads(camps: dict[str, Camp], seed: int = 0) -> tuple[tuple[str, str, str], ...]:
    """Random triads with a 2:1 camp mix, half majority-conservative, half majority-liberal.

    Needs equally sized camps and a head count divisible by six.
    """
    conservatives = sorted(u for u, c in camps.items() if c is Camp.CONSERVATIVE)
    liberals = sorted(u for u, c in camps.items() if c is Camp.LIBERAL)
    total = len(conservatives) + len(liberals)
    if len(conservatives) != len(liberals) or total % 6 != 0 or total == 0:
        raise TrialError(
            "triad formation needs equal camps and a head count divisible by 6, "
            f"got {len(conservatives)} conservatives and {len(liberals)} liberals"
        )
    rng = np.random.default_rng(seed)
    conservatives = [conservatives[i] for i in rng.permutation(len(conservatives))]
    liberals = [liberals[i] for i in rng.permutation(len(liberals))]
    per_side = total // 6
    triads = []
    for i in range(per_side):
        triads.append((conservatives[2 * i], conservatives[2 * i + 1], liberals[i]))
    for i in range(per_side):
        triads.append(
            (liberals[per_side + 2 * i], liberals[per_side + 2 * i + 1], conservatives[2 * per_side + i])
        )
    return tuple(triads)


def minority_member(camps: dict[str, Camp], triad: tuple[str, str, str]) -> str:
    counts = {Camp.CONSERVATIVE: 0, Camp.LIBERAL: 0}
    for user in triad:
        counts[camps[user]] += 1
    lone_camp = Camp.CONSERVATIVE if counts[Camp.CONSERVATIVE] == 1 else Camp.LIBERAL
    return next(u for u in triad if camps[u] is lone_camp)


def run_trial_round2(trial: TrialState, ballots: dict[str, str] | None = None) -> dict[str, TrialLabel]:
    """Classify every triad member from the round-2 ballots.

    Within a triad the minority member's ballot names the moderate member
    of the majority camp; the other majority member is the strong one.
    Labels depend only on the ballots' content, never their arrival order.
    """
    if ballots:
        for voter, choice in ballots.items():
            record_ballot(trial, voter, choice)
    labels: dict[str, TrialLabel] = {}
    for triad in trial.triads:
        missing = [u for u in triad if u not in trial.ballots]
        if missing:
            raise TrialError(f"triad {triad!r} incomplete, missing ballots from {missing}")
        minority = minority_member(trial.camps, triad)
        majority = [u for u in triad if u != minority]
        moderate = trial.ballots[minority]
        strong = next(u for u in majority if u != moderate)
        if trial.camps[moderate] is Camp.CONSERVATIVE:
            labels[moderate] = TrialLabel.MODERATE_CONSERVATIVE
            labels[strong] = TrialLabel.STRONG_CONSERVATIVE
        else:
            labels[moderate] = TrialLabel.MODERATE_LIBERAL
            labels[strong] = TrialLabel.STRONG_LIBERAL
        labels[minority] = TrialLabel.MINORITY
    trial.classifications = labels
    return labels


def record_ballot(trial: TrialState, voter: str, choice: str) -> None:
    """Validate and store one round-2 ballot: a vote for one of the other two members."""
    triad = trial.triad_of(voter)
    if choice == voter:
        raise TrialError(f"{voter!r} may not vote for their own budget")
    if choice not in triad:
        raise TrialError(f"{voter!r} must vote within their triad, got {choice!r}")
    if voter in trial.ballots:
        raise TrialError(f"{voter!r} already voted")
    trial.ballots[voter] = choice


def pair_for_round3(trial: TrialState) -> tuple[tuple[str, str], ...]:
    """Pair strong with strong, moderate with moderate, minority with minority.

    Users are taken in triad order, so the pairing is deterministic for a
    given classification.
    """
    if set(trial.classifications) != {u for t in trial.triads for u in t}:
        raise TrialError("classification must be complete before pairing")

    def pick(label: TrialLabel) -> list[str]:
        return [
            u
            for triad in trial.triads
            for u in triad
            if trial.classifications[u] is label
        ]

    minorities = pick(TrialLabel.MINORITY)
    groups = [
        (pick(TrialLabel.STRONG_CONSERVATIVE), pick(TrialLabel.STRONG_LIBERAL)),
        (pick(TrialLabel.MODERATE_CONSERVATIVE), pick(TrialLabel.MODERATE_LIBERAL)),
        (
            [u for u in minorities if trial.camps[u] is Camp.CONSERVATIVE],
            [u for u in minorities if trial.camps[u] is Camp.LIBERAL],
        ),
    ]
    pairs = []
    for left, right in groups:
        if len(left) != len(right):
            raise TrialError(
                f"cannot pair {len(left)} users with {len(right)}; unbalanced classifications"
            )
        pairs.extend(zip(left, right))
    trial.pairs = tuple(pairs)
    return trial.pairs


def consensus_goal(baseline_deficit: int) -> int:
    """Halved deficit target; floor division keeps 'at least half' true for odd deficits."""
    return baseline_deficit // 2
