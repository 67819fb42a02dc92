import numpy as np
import pytest

from accord.voting.population import VoterPopulation
from accord.voting.rounds import Scheme, hot_or_not_round, triadic_round, vote
from accord.voting.space import BudgetSpace, Line1D


def line_pop(*positions, seed=0):
    return VoterPopulation(space=Line1D(), positions=tuple(positions), seed=seed)


def rng(seed=0):
    return np.random.default_rng(seed)


# -- vote ---------------------------------------------------------------------


def test_vote_picks_strictly_closer():
    assert vote(0.3, 0.2, 0.8, Line1D(), rng()) == 0
    assert vote(0.9, 0.1, 0.4, Line1D(), rng()) == 1


def test_vote_tie_is_coin_flip_from_rng():
    # dyadic positions keep the two distances exactly equal in floats
    picks = {vote(0.5, 0.25, 0.75, Line1D(), rng(seed)) for seed in range(32)}
    assert picks == {0, 1}
    # and deterministic per seed
    assert vote(0.5, 0.25, 0.75, Line1D(), rng(7)) == vote(0.5, 0.25, 0.75, Line1D(), rng(7))


def test_vote_budget_space_zero_distance_wins():
    mine = {"D": -700, "T": 1200}
    other = {"D": -100, "T": 300}
    assert vote(mine, dict(mine), other, BudgetSpace(), rng()) == 0
    assert vote(mine, other, dict(mine), BudgetSpace(), rng()) == 1


def test_space_distance_axioms():
    s = Line1D()
    assert s.distance(0.3, 0.3) == 0
    assert s.distance(0.2, 0.9) == s.distance(0.9, 0.2)
    b = BudgetSpace()
    p, q = {"D": -700}, {"D": -500}
    assert b.distance(p, p) == 0
    assert b.distance(p, q) == b.distance(q, p)


# -- triadic rounds ---------------------------------------------------------------


def test_triadic_median_wins_simple():
    pop = line_pop(0.1, 0.5, 0.9)
    assert triadic_round(pop, 0, 1, 2, rng()).winner == 1


def test_triadic_extremes_vote_for_median():
    pop = line_pop(0.0, 0.5, 1.0)
    round_ = triadic_round(pop, 0, 1, 2, rng())
    assert round_.winner == 1
    choices = dict(round_.ballots)
    assert choices[0] == 1 and choices[2] == 1


def test_triadic_hand_enumerated_case():
    # 0.2 prefers 0.3 over 0.9; 0.9 prefers 0.3 over 0.2.
    pop = line_pop(0.2, 0.3, 0.9)
    assert triadic_round(pop, 0, 1, 2, rng()).winner == 1


def test_triadic_ballot_structure():
    pop = line_pop(0.2, 0.3, 0.9)
    round_ = triadic_round(pop, 0, 1, 2, rng())
    assert round_.scheme is Scheme.TRIADIC
    assert round_.participants == (0, 1, 2)
    assert len(round_.ballots) == 3
    for voter, choice in round_.ballots:
        assert choice != voter
        assert choice in round_.participants


def test_triadic_requires_distinct_voters():
    pop = line_pop(0.2, 0.3, 0.9)
    with pytest.raises(ValueError):
        triadic_round(pop, 0, 0, 2, rng())


def test_triadic_permutation_invariance():
    generator = np.random.default_rng(123)
    for _ in range(200):
        positions = tuple(generator.random(3))
        if len(set(positions)) < 3:
            continue
        pop = line_pop(*positions)
        winners = {
            positions[triadic_round(pop, *order, rng()).winner]
            for order in ((0, 1, 2), (2, 0, 1), (1, 2, 0), (2, 1, 0))
        }
        assert len(winners) == 1
        assert winners.pop() == sorted(positions)[1]


def test_triadic_identical_positions_tie_break_uniform():
    pop = line_pop(0.5, 0.5, 0.5)
    winners = {triadic_round(pop, 0, 1, 2, rng(seed)).winner for seed in range(64)}
    assert winners == {0, 1, 2}


# -- hot-or-not rounds ----------------------------------------------------------------


def test_hot_or_not_examples():
    pop = line_pop(0.2, 0.8, 0.3)
    assert hot_or_not_round(pop, 0, 1, 2, rng()).winner == 0
    pop = line_pop(0.1, 0.4, 0.9)
    assert hot_or_not_round(pop, 0, 1, 2, rng()).winner == 1


def test_hot_or_not_tie_judged_by_rng():
    pop = line_pop(0.25, 0.75, 0.5)
    winners = {hot_or_not_round(pop, 0, 1, 2, rng(seed)).winner for seed in range(32)}
    assert winners == {0, 1}


def test_hot_or_not_single_ballot():
    pop = line_pop(0.2, 0.8, 0.3)
    round_ = hot_or_not_round(pop, 0, 1, 2, rng())
    assert round_.scheme is Scheme.HOT_OR_NOT
    assert round_.ballots == ((2, 0),)


def test_population_validates_line_positions():
    with pytest.raises(ValueError):
        line_pop(0.2, 1.5)


def test_uniform_population_is_seed_deterministic():
    assert VoterPopulation.uniform(10, seed=4) == VoterPopulation.uniform(10, seed=4)
    assert VoterPopulation.uniform(10, seed=4) != VoterPopulation.uniform(10, seed=5)
