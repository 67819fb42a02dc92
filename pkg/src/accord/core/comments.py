"""Aggregation of proposal comments into a grid of (agreement, importance) counts.

Shading the grid is the client's job; this module only counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import BoundsError, Comment


def comment_bin(value: float, grid_size: int) -> int:
    """Bin index for a rating in [-1, 1] over grid_size even bins.

    Bins are half-open [lo, hi) except the last, which is closed so that +1
    is representable.
    """
    if not (-1.0 <= value <= 1.0):
        raise BoundsError(f"rating {value!r} outside [-1, 1]")
    index = math.floor((value + 1.0) * grid_size / 2.0)
    return min(index, grid_size - 1)


@dataclass(frozen=True)
class CommentMatrix:
    """grid_size x grid_size comment counts, indexed [agreement_bin][importance_bin]."""

    grid_size: int
    cells: tuple[tuple[int, ...], ...]
    total: int

    def count(self, agreement_bin: int, importance_bin: int) -> int:
        return self.cells[agreement_bin][importance_bin]


def aggregate_comments(comments: list[Comment], grid_size: int = 5) -> CommentMatrix:
    """Bin each comment's (agreement, importance) pair into exactly one cell."""
    if grid_size < 1:
        raise ValueError(f"grid_size must be >= 1, got {grid_size}")
    cells = [[0] * grid_size for _ in range(grid_size)]
    for comment in comments:
        row = comment_bin(comment.agreement, grid_size)
        col = comment_bin(comment.importance, grid_size)
        cells[row][col] += 1
    return CommentMatrix(
        grid_size=grid_size,
        cells=tuple(tuple(row) for row in cells),
        total=len(comments),
    )
