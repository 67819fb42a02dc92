"""Budget data model and the pure functions the rest of the engine builds on."""

from .model import (
    Baseline,
    BoundsError,
    Budget,
    BudgetError,
    Category,
    CategoryKind,
    Comment,
    KeySetMismatchError,
    Proposal,
    SignConventionError,
    UnknownCategoryError,
    check_sign,
)
from .metrics import (
    CLAMP_TOKEN,
    CLAMP_THRESHOLD_PERCENT,
    DisagreementReport,
    deficit,
    disagreement,
    format_ratio6,
    resolve_amounts,
)
from .comments import CommentMatrix, aggregate_comments, comment_bin

__all__ = [
    "Baseline",
    "BoundsError",
    "Budget",
    "BudgetError",
    "Category",
    "CategoryKind",
    "CLAMP_TOKEN",
    "CLAMP_THRESHOLD_PERCENT",
    "Comment",
    "CommentMatrix",
    "DisagreementReport",
    "KeySetMismatchError",
    "Proposal",
    "SignConventionError",
    "UnknownCategoryError",
    "aggregate_comments",
    "check_sign",
    "comment_bin",
    "deficit",
    "disagreement",
    "format_ratio6",
    "resolve_amounts",
]
