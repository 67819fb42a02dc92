"""Brute-force Condorcet winner computation.

This is the oracle other results are checked against, so it stays a plain
exhaustive enumeration: every proposal against every other in a
full-population pairwise election.
"""

from __future__ import annotations

from .population import VoterPopulation


def condorcet_winner(population: VoterPopulation) -> int | None:
    """Index of the proposal that beats every other pairwise, or None.

    Each voter votes for the strictly closer of the two proposals (a
    proposal's own author is at distance zero and votes for it); equidistant
    voters abstain. Beating requires strictly more votes, so a tied pairing
    denies both sides the Condorcet property.
    """
    n = len(population)
    if n == 1:
        return 0
    for candidate in range(n):
        if all(
            _beats(population, candidate, rival)
            for rival in range(n)
            if rival != candidate
        ):
            return candidate
    return None


def _beats(population: VoterPopulation, i: int, j: int) -> bool:
    votes_i = votes_j = 0
    pi, pj = population.position(i), population.position(j)
    for voter in range(len(population)):
        pv = population.position(voter)
        di = population.space.distance(pv, pi)
        dj = population.space.distance(pv, pj)
        if di < dj:
            votes_i += 1
        elif dj < di:
            votes_j += 1
    return votes_i > votes_j
