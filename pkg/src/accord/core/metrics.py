"""Deficit accounting and the pairwise disagreement metric.

Disagreement between two budgets is the sum of absolute per-category
deltas divided by the mean per-category magnitude:

    raw = sum(|A_c - B_c|) / sum((|A_c| + |B_c|) / 2)

Values above 10% are considered significant and display as the clamped
token ">10%". All bookkeeping stays in exact integers; the displayed
decimal is the true rational rounded half-even to six fractional digits.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Baseline,
    Budget,
    BudgetError,
    KeySetMismatchError,
    SignConventionError,
    UnknownCategoryError,
    check_sign,
)

CLAMP_TOKEN = ">10%"
CLAMP_THRESHOLD_PERCENT = 10


def resolve_amounts(budget: Budget, baseline: Baseline) -> dict[str, int]:
    """Final signed dollar amounts per category for one budget.

    Selected proposals override the baseline amount; everything else is the
    baseline amount unchanged.
    """
    if budget.baseline_id != baseline.id:
        raise BudgetError(
            f"budget {budget.id!r} targets baseline {budget.baseline_id!r}, "
            f"not {baseline.id!r}"
        )
    for category_id in budget.selections:
        if category_id not in baseline.amounts:
            raise UnknownCategoryError(category_id)
    resolved = {}
    for cat in baseline.categories:
        proposal = budget.selections.get(cat.id)
        amount = baseline.amounts[cat.id] if proposal is None else proposal.target_amount
        if not check_sign(cat.kind, amount):
            raise SignConventionError(cat.id, cat.kind, amount)
        resolved[cat.id] = amount
    return resolved


def deficit(amounts: dict[str, int]) -> int:
    """Negated total of all signed amounts; positive means expenses exceed revenues."""
    return -sum(amounts.values())


def format_ratio6(numerator: int, denominator: int) -> str:
    """The nonnegative rational numerator/denominator as a decimal with exactly
    six fractional digits, rounded half-even on the exact value.

    A zero denominator formats as zero (only reachable when the numerator is
    also zero).
    """
    if denominator == 0:
        return "0.000000"
    scaled, remainder = divmod(numerator * 10**6, denominator)
    if 2 * remainder > denominator or (2 * remainder == denominator and scaled % 2 == 1):
        scaled += 1
    whole, frac = divmod(scaled, 10**6)
    return f"{whole}.{frac:06d}"


@dataclass(frozen=True)
class DisagreementReport:
    """Result of the disagreement metric between two resolved budgets.

    raw is delta_total / (magnitude_total / 2) as a float; delta_total and
    magnitude_total keep the exact integer numerator and (doubled)
    denominator so display strings and clamping are bit-reproducible.
    """

    raw: float
    delta_total: int
    magnitude_total: int
    deltas: dict[str, int]
    display: str

    @property
    def clamped(self) -> bool:
        return self.display == CLAMP_TOKEN


def disagreement(a: dict[str, int], b: dict[str, int]) -> DisagreementReport:
    """Disagreement between two resolved budgets over the same categories.

    Both maps must share one key set. When every amount on both sides is
    zero the metric is defined as 0 (identical budgets disagree by nothing).
    """
    if set(a) != set(b):
        raise KeySetMismatchError(set(a) - set(b), set(b) - set(a))
    deltas = {c: a[c] - b[c] for c in a}
    delta_total = sum(abs(d) for d in deltas.values())
    magnitude_total = sum(abs(a[c]) + abs(b[c]) for c in a)
    if magnitude_total == 0:
        raw = 0.0
    else:
        raw = 2 * delta_total / magnitude_total
    # Clamp test on exact integers: raw > 0.10  <=>  20 * delta > magnitude.
    if 20 * delta_total > magnitude_total:
        display = CLAMP_TOKEN
    else:
        display = format_ratio6(2 * delta_total, magnitude_total)
    return DisagreementReport(
        raw=raw,
        delta_total=delta_total,
        magnitude_total=magnitude_total,
        deltas=deltas,
        display=display,
    )
