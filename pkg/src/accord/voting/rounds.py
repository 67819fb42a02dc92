"""Single voting rounds.

Voters prefer whichever proposal is closer to their own position. Exact
distance ties are broken uniformly at random from the caller's seeded
generator, never by index, so the symmetry assumptions behind the winner
density results are preserved.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .population import VoterPopulation
from .space import OpinionSpace, Position


class Scheme(str, Enum):
    TRIADIC = "triadic"
    HOT_OR_NOT = "hotornot"


# Proposals per elimination group in a tournament stage.
GROUP_SIZE = {Scheme.TRIADIC: 3, Scheme.HOT_OR_NOT: 2}


@dataclass(frozen=True)
class VoteRound:
    """Record of one round: who took part, every ballot cast, and the winner.

    Ballots are (voter index, chosen proposal index) pairs. Triadic rounds
    have three participants each voting between the other two; hot-or-not
    rounds have two candidates and a single judge ballot.
    """

    scheme: Scheme
    participants: tuple[int, ...]
    ballots: tuple[tuple[int, int], ...]
    winner: int


def vote(
    voter: Position,
    candidate_a: Position,
    candidate_b: Position,
    space: OpinionSpace,
    rng: np.random.Generator,
) -> int:
    """The voter's choice between two candidate positions: 0 for a, 1 for b.

    Strictly closer wins; an exact tie is a fair coin flip from rng. A
    distance of zero (the voter's own proposal) beats any positive distance.
    """
    da = space.distance(voter, candidate_a)
    db = space.distance(voter, candidate_b)
    if da < db:
        return 0
    if db < da:
        return 1
    return int(rng.integers(2))


def triadic_round(
    population: VoterPopulation,
    x: int,
    y: int,
    z: int,
    rng: np.random.Generator,
) -> VoteRound:
    """One triadic round: x votes between y and z, y between x and z, z between x and y.

    The proposal with the most ballots wins. A 1-1-1 tie, reachable only
    through tie-break coin flips, resolves uniformly at random. On a line
    with distinct positions the winner is always the median.
    """
    x, y, z = _distinct(x, y, z)
    ballots = []
    for voter, pair in ((x, (y, z)), (y, (x, z)), (z, (x, y))):
        pick = vote(
            population.position(voter),
            population.position(pair[0]),
            population.position(pair[1]),
            population.space,
            rng,
        )
        ballots.append((voter, pair[pick]))
    tally = Counter(choice for _, choice in ballots)
    top = max(tally.values())
    leaders = sorted(c for c, votes in tally.items() if votes == top)
    winner = leaders[0] if len(leaders) == 1 else leaders[int(rng.integers(len(leaders)))]
    return VoteRound(Scheme.TRIADIC, (x, y, z), tuple(ballots), winner)


def hot_or_not_round(
    population: VoterPopulation,
    candidate_a: int,
    candidate_b: int,
    judge: int,
    rng: np.random.Generator,
) -> VoteRound:
    """One hot-or-not round: the judge picks the preferred of two candidates."""
    candidate_a, candidate_b, judge = _distinct(candidate_a, candidate_b, judge)
    pick = vote(
        population.position(judge),
        population.position(candidate_a),
        population.position(candidate_b),
        population.space,
        rng,
    )
    winner = (candidate_a, candidate_b)[pick]
    return VoteRound(
        Scheme.HOT_OR_NOT,
        (candidate_a, candidate_b, judge),
        ((judge, winner),),
        winner,
    )


def _distinct(*indices: int) -> tuple[int, ...]:
    if len(set(indices)) != len(indices):
        raise ValueError(f"voter indices must be distinct, got {indices}")
    return indices
