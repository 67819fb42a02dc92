"""Iterative elimination tournaments.

Each stage shuffles the surviving proposals into disjoint groups of the
scheme's size; group winners advance, losers are eliminated, and an
undersized leftover group advances unplayed. Stages repeat until at most
stop_count proposals survive. Voters are never eliminated: authors of
losing proposals keep judging later stages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .population import VoterPopulation
from .rounds import GROUP_SIZE, Scheme, VoteRound, hot_or_not_round, triadic_round


@dataclass(frozen=True)
class Tournament:
    """Full transcript: every round played and the survivor set after each stage.

    survivors_per_stage[0] is the initial proposal set; each later entry is
    strictly smaller than the one before it.
    """

    scheme: Scheme
    population: VoterPopulation
    rounds: tuple[VoteRound, ...]
    survivors_per_stage: tuple[tuple[int, ...], ...]
    winners: tuple[int, ...]


def run_tournament(
    population: VoterPopulation,
    scheme: Scheme,
    stop_count: int = 1,
    rng: np.random.Generator | None = None,
) -> Tournament:
    """Run elimination stages until at most stop_count proposals survive.

    Deterministic given the generator state; rng defaults to a fresh
    generator seeded from the population's seed. Hot-or-not judges are
    drawn uniformly from voters outside the candidate pair, so the
    population must have at least 3 voters for that scheme. When a triadic
    stage is left with two proposals and no full triad can form, a single
    pairwise round with a random non-candidate judge settles it.
    """
    n = len(population)
    group_size = GROUP_SIZE[scheme]
    if stop_count < 1:
        raise ValueError("stop_count must be >= 1")
    # survivors <= stop_count is already the fixpoint; the group-size minimum
    # only binds when elimination actually has to happen.
    if n > stop_count and n < group_size:
        raise ValueError(
            f"population of {n} too small for scheme {scheme.value} with k={stop_count}"
        )
    if n > stop_count and scheme is Scheme.HOT_OR_NOT and n < 3:
        raise ValueError("hot-or-not needs a third voter to judge")
    if rng is None:
        rng = population.rng()

    survivors = list(range(n))
    stages = [tuple(survivors)]
    rounds: list[VoteRound] = []

    while len(survivors) > stop_count:
        if len(survivors) < group_size:
            # Two proposals left in a triadic tournament: pairwise runoff.
            a, b = survivors
            round_ = hot_or_not_round(population, a, b, _draw_judge(n, (a, b), rng), rng)
            rounds.append(round_)
            survivors = [round_.winner]
            stages.append(tuple(survivors))
            continue
        order = [survivors[i] for i in rng.permutation(len(survivors))]
        leftover_count = len(order) % group_size
        advancing = sorted(order[len(order) - leftover_count:]) if leftover_count else []
        for start in range(0, len(order) - leftover_count, group_size):
            group = order[start:start + group_size]
            if scheme is Scheme.TRIADIC:
                round_ = triadic_round(population, *group, rng)
            else:
                judge = _draw_judge(n, group, rng)
                round_ = hot_or_not_round(population, group[0], group[1], judge, rng)
            rounds.append(round_)
            advancing.append(round_.winner)
        survivors = sorted(advancing)
        stages.append(tuple(survivors))

    return Tournament(
        scheme=scheme,
        population=population,
        rounds=tuple(rounds),
        survivors_per_stage=tuple(stages),
        winners=tuple(survivors),
    )


def _draw_judge(n: int, candidates, rng: np.random.Generator) -> int:
    eligible = [v for v in range(n) if v not in set(candidates)]
    return eligible[int(rng.integers(len(eligible)))]
