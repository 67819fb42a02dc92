"""Opinion spaces: where voter positions live and how far apart they are.

Two variants. Line1D is the single-peaked model with positions on [0, 1]
and absolute-difference distance. BudgetSpace positions are resolved
budget amount maps and the distance is the raw disagreement value, which
bridges the one-dimensional theory to real budgets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from ..core.metrics import disagreement

Position = Union[float, Mapping[str, int]]


@dataclass(frozen=True)
class Line1D:
    """Positions are reals in [0, 1]; distance is |x - y|."""

    kind = "line1d"

    def distance(self, p: Position, q: Position) -> float:
        return abs(p - q)

    def validate(self, p: Position) -> None:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"position {p!r} outside [0, 1]")


@dataclass(frozen=True)
class BudgetSpace:
    """Positions are resolved amount maps; distance is raw disagreement."""

    kind = "budget"

    def distance(self, p: Position, q: Position) -> float:
        return disagreement(dict(p), dict(q)).raw

    def validate(self, p: Position) -> None:
        if not isinstance(p, Mapping):
            raise ValueError(f"budget position must be an amount map, got {type(p).__name__}")


OpinionSpace = Union[Line1D, BudgetSpace]
