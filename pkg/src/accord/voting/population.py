"""Voter populations: each voter owns the proposal at its own position."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .space import Line1D, OpinionSpace, Position


@dataclass(frozen=True)
class VoterPopulation:
    space: OpinionSpace
    positions: tuple[Position, ...]
    seed: int = 0

    def __post_init__(self):
        for p in self.positions:
            self.space.validate(p)

    def __len__(self) -> int:
        return len(self.positions)

    def position(self, voter: int) -> Position:
        return self.positions[voter]

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    @classmethod
    def uniform(cls, n: int, seed: int = 0) -> "VoterPopulation":
        """n voters drawn uniformly on [0, 1] in a Line1D space."""
        if n < 1:
            raise ValueError("population size must be >= 1")
        positions = np.random.default_rng(seed).random(n)
        return cls(space=Line1D(), positions=tuple(float(x) for x in positions), seed=seed)
