"""Domain types for collaborative budgeting.

Every amount in this package is a signed integer number of millions of
dollars. Revenue categories carry nonnegative amounts, expense categories
nonpositive ones; integer arithmetic keeps the disagreement metric and the
wire protocol exactly reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class BudgetError(Exception):
    """Base class for structural violations of the budget model."""


class UnknownCategoryError(BudgetError):
    def __init__(self, category_id: str):
        super().__init__(f"unknown category {category_id!r}")
        self.category_id = category_id


class KeySetMismatchError(BudgetError):
    def __init__(self, only_a, only_b):
        super().__init__(
            f"category sets differ: only in first {sorted(only_a)!r}, "
            f"only in second {sorted(only_b)!r}"
        )


class SignConventionError(BudgetError):
    def __init__(self, category_id: str, kind: "CategoryKind", amount: int):
        super().__init__(
            f"amount {amount} for {category_id!r} violates the {kind.value} "
            f"sign convention"
        )


class BoundsError(BudgetError):
    """A rating value fell outside its closed bounds."""


class CategoryKind(str, Enum):
    REVENUE = "revenue"
    EXPENSE = "expense"


def check_sign(kind: CategoryKind, amount: int) -> bool:
    """True when the amount respects the kind's sign convention (zero passes for both)."""
    if kind is CategoryKind.REVENUE:
        return amount >= 0
    return amount <= 0


@dataclass(frozen=True)
class Category:
    """One budget line item, either a revenue source or an expense."""

    id: str
    name: str
    kind: CategoryKind
    description: str = ""


@dataclass(frozen=True)
class Baseline:
    """A reference budget: ordered categories with signed baseline amounts."""

    id: str
    name: str
    categories: tuple[Category, ...]
    amounts: dict[str, int]
    fiscal_label: str = ""

    def __post_init__(self):
        ids = [c.id for c in self.categories]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise BudgetError(f"duplicate category ids {dupes!r}")
        if set(self.amounts) != set(ids):
            raise KeySetMismatchError(set(self.amounts) - set(ids), set(ids) - set(self.amounts))
        for cat in self.categories:
            amount = self.amounts[cat.id]
            if not isinstance(amount, int) or isinstance(amount, bool):
                raise BudgetError(f"amount for {cat.id!r} is not an integer")
            if not check_sign(cat.kind, amount):
                raise SignConventionError(cat.id, cat.kind, amount)

    def category(self, category_id: str) -> Category:
        for cat in self.categories:
            if cat.id == category_id:
                return cat
        raise UnknownCategoryError(category_id)

    def kind_of(self, category_id: str) -> CategoryKind:
        return self.category(category_id).kind


@dataclass(frozen=True)
class Proposal:
    """An absolute target amount for exactly one category, with a rationale."""

    id: str
    category_id: str
    target_amount: int
    rationale: str = ""
    author: str = ""


@dataclass(frozen=True)
class Budget:
    """A user's budget: per-category proposal selections over a baseline.

    Categories without a selection fall back to the baseline amount.
    """

    id: str
    baseline_id: str
    owner: str
    selections: dict[str, Proposal] = field(default_factory=dict)

    def __post_init__(self):
        for category_id, proposal in self.selections.items():
            if proposal.category_id != category_id:
                raise BudgetError(
                    f"selection key {category_id!r} does not match proposal "
                    f"category {proposal.category_id!r}"
                )


@dataclass(frozen=True)
class Comment:
    """Free-form feedback on a proposal with agreement/importance ratings in [-1, 1]."""

    proposal_id: str
    text: str
    agreement: float
    importance: float
    author: str = ""

    def __post_init__(self):
        for label, value in (("agreement", self.agreement), ("importance", self.importance)):
            if not (-1.0 <= value <= 1.0):
                raise BoundsError(f"{label} {value!r} outside [-1, 1]")
