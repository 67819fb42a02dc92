"""Versioned comma-separated file formats for baselines, proposals, and budgets.

All three formats share the same skeleton: a one-line header naming the
file kind, format version and identity, a column header line, then data
rows. Amounts in files are nonnegative integers in millions; the sign is
applied from the category kind on parse. Parsing rejects rather than
repairs: no locale separators, no floats, no silent coercion, and every
error names the offending line.

    baseline,1,Toy Federal,FY2026
    category,kind,amount,description
    IncomeTax,revenue,1200,Personal income taxes
    Defense,expense,700,Military spending

    proposals,1,alice
    category,amount,rationale
    Defense,600,cut procurement

    budget,1,alice
    category,amount
    Defense,600
"""

from __future__ import annotations

import csv
import io
import re

from ..core.model import Baseline, Budget, Category, CategoryKind, Proposal

FORMAT_VERSION = "1"

_INTEGER = re.compile(r"0|[1-9][0-9]*")
_BASELINE_COLUMNS = ("category", "kind", "amount", "description")
_PROPOSAL_COLUMNS = ("category", "amount", "rationale")
_BUDGET_COLUMNS = ("category", "amount")


class ParseError(Exception):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


def slug(text: str) -> str:
    """Lowercased identifier: runs of non-alphanumerics collapse to single dashes."""
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")


def canonical_baseline_id(name: str) -> str:
    """The id a baseline file with this name parses to."""
    return slug(name) or "baseline"


def _rows(text: str):
    """(line_number, fields) for every nonempty csv row."""
    reader = csv.reader(io.StringIO(text))
    out = []
    for fields in reader:
        if fields:
            out.append((reader.line_num, fields))
    return out


def _header(rows, kind: str, field_count: int):
    if not rows:
        raise ParseError(f"empty file, expected a {kind} header")
    line, fields = rows[0]
    if not fields or fields[0] != kind:
        raise ParseError(f"expected {kind!r} header, got {fields[0]!r}", line)
    if len(fields) != field_count:
        raise ParseError(
            f"{kind} header needs {field_count} fields, got {len(fields)}", line
        )
    if fields[1] != FORMAT_VERSION:
        raise ParseError(f"unrecognized format version {fields[1]!r}", line)
    return fields


def _columns(rows, kind: str, allowed: tuple[tuple[str, ...], ...]):
    if len(rows) < 2:
        raise ParseError(f"{kind} file ends before the column header")
    line, fields = rows[1]
    for candidate in allowed:
        if tuple(fields) == candidate:
            return fields
    raise ParseError(
        f"bad column header {','.join(fields)!r}, expected "
        + " or ".join(",".join(c) for c in allowed),
        line,
    )


def _amount(token: str, line: int) -> int:
    if not _INTEGER.fullmatch(token):
        if token.lstrip("-") != token:
            raise ParseError(f"negative raw amount {token!r}, sign comes from the kind", line)
        raise ParseError(f"amount {token!r} is not a plain nonnegative integer", line)
    return int(token)


def parse_baseline(text: str) -> Baseline:
    """Parse a baseline file; expense amounts come back negative."""
    rows = _rows(text)
    header = _header(rows, "baseline", 4)
    columns = _columns(rows, "baseline", (_BASELINE_COLUMNS, _BASELINE_COLUMNS[:3]))
    name, fiscal_label = header[2], header[3]

    categories: list[Category] = []
    amounts: dict[str, int] = {}
    seen: dict[str, int] = {}
    for line, fields in rows[2:]:
        if len(fields) != len(columns):
            raise ParseError(f"expected {len(columns)} fields, got {len(fields)}", line)
        cat_name, kind_token, amount_token = fields[0], fields[1], fields[2]
        description = fields[3] if len(fields) == 4 else ""
        if not cat_name:
            raise ParseError("empty category name", line)
        if cat_name in seen:
            raise ParseError(
                f"duplicate category {cat_name!r}, first defined on line {seen[cat_name]}",
                line,
            )
        seen[cat_name] = line
        try:
            kind = CategoryKind(kind_token)
        except ValueError:
            raise ParseError(
                f"unknown kind token {kind_token!r}, expected 'revenue' or 'expense'", line
            ) from None
        magnitude = _amount(amount_token, line)
        categories.append(Category(id=cat_name, name=cat_name, kind=kind, description=description))
        amounts[cat_name] = magnitude if kind is CategoryKind.REVENUE else -magnitude
    return Baseline(
        id=canonical_baseline_id(name),
        name=name,
        categories=tuple(categories),
        amounts=amounts,
        fiscal_label=fiscal_label,
    )


def render_baseline(baseline: Baseline) -> str:
    """Inverse of parse_baseline; requires the canonical (renderable) id."""
    if baseline.id != canonical_baseline_id(baseline.name):
        raise ValueError(
            f"baseline id {baseline.id!r} is not the canonical id for name {baseline.name!r}"
        )
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["baseline", FORMAT_VERSION, baseline.name, baseline.fiscal_label])
    writer.writerow(_BASELINE_COLUMNS)
    for cat in baseline.categories:
        writer.writerow(
            [cat.name, cat.kind.value, abs(baseline.amounts[cat.id]), cat.description]
        )
    return out.getvalue()


def _signed(baseline: Baseline, category: str, magnitude: int, line: int) -> int:
    if category not in baseline.amounts:
        valid = ", ".join(c.id for c in baseline.categories)
        raise ParseError(f"unknown category {category!r}, valid: {valid}", line)
    kind = baseline.kind_of(category)
    return magnitude if kind is CategoryKind.REVENUE else -magnitude


def parse_proposals(text: str, baseline: Baseline) -> list[Proposal]:
    """Parse a proposals file against a baseline; amounts are re-signed per kind."""
    rows = _rows(text)
    header = _header(rows, "proposals", 3)
    _columns(rows, "proposals", (_PROPOSAL_COLUMNS,))
    author = header[2]
    proposals = []
    for n, (line, fields) in enumerate(rows[2:], start=1):
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", line)
        category, amount_token, rationale = fields
        target = _signed(baseline, category, _amount(amount_token, line), line)
        proposals.append(
            Proposal(
                id=f"{slug(author) or 'anon'}-{n}",
                category_id=category,
                target_amount=target,
                rationale=rationale,
                author=author,
            )
        )
    return proposals


def render_proposals(proposals: list[Proposal], author: str) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["proposals", FORMAT_VERSION, author])
    writer.writerow(_PROPOSAL_COLUMNS)
    for p in proposals:
        writer.writerow([p.category_id, abs(p.target_amount), p.rationale])
    return out.getvalue()


def parse_budget(text: str, baseline: Baseline) -> Budget:
    """Parse a budget file: each row selects an absolute amount for one category."""
    rows = _rows(text)
    header = _header(rows, "budget", 3)
    _columns(rows, "budget", (_BUDGET_COLUMNS,))
    owner = header[2]
    selections: dict[str, Proposal] = {}
    seen: dict[str, int] = {}
    for n, (line, fields) in enumerate(rows[2:], start=1):
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", line)
        category, amount_token = fields
        if category in seen:
            raise ParseError(
                f"duplicate category {category!r}, first set on line {seen[category]}", line
            )
        seen[category] = line
        target = _signed(baseline, category, _amount(amount_token, line), line)
        selections[category] = Proposal(
            id=f"{slug(owner) or 'anon'}-{n}",
            category_id=category,
            target_amount=target,
            author=owner,
        )
    return Budget(
        id=f"{slug(owner) or 'anon'}-budget",
        baseline_id=baseline.id,
        owner=owner,
        selections=selections,
    )


def render_budget(budget: Budget, baseline: Baseline) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["budget", FORMAT_VERSION, budget.owner])
    writer.writerow(_BUDGET_COLUMNS)
    for cat in baseline.categories:
        proposal = budget.selections.get(cat.id)
        if proposal is not None:
            writer.writerow([cat.id, abs(proposal.target_amount)])
    return out.getvalue()
