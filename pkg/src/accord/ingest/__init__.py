"""Parsing and rendering of baseline, proposal, and budget files."""

from .files import (
    FORMAT_VERSION,
    ParseError,
    canonical_baseline_id,
    parse_baseline,
    parse_budget,
    parse_proposals,
    render_baseline,
    render_budget,
    render_proposals,
    slug,
)

__all__ = [
    "FORMAT_VERSION",
    "ParseError",
    "canonical_baseline_id",
    "parse_baseline",
    "parse_budget",
    "parse_proposals",
    "render_baseline",
    "render_budget",
    "render_proposals",
    "slug",
]
