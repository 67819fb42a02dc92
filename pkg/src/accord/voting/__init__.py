"""Distance-based comparison voting: single rounds, tournaments, Condorcet checks."""

from .space import BudgetSpace, Line1D, OpinionSpace, Position
from .population import VoterPopulation
from .rounds import GROUP_SIZE, Scheme, VoteRound, hot_or_not_round, triadic_round, vote
from .tournament import Tournament, run_tournament
from .condorcet import condorcet_winner

__all__ = [
    "BudgetSpace",
    "GROUP_SIZE",
    "Line1D",
    "OpinionSpace",
    "Position",
    "Scheme",
    "Tournament",
    "VoteRound",
    "VoterPopulation",
    "condorcet_winner",
    "hot_or_not_round",
    "run_tournament",
    "triadic_round",
    "vote",
]
