"""Collaborative budget consensus engine.

Subpackages:
    core     budget data model, deficit accounting, the disagreement metric
    voting   distance-based comparison voting, tournaments, Condorcet checks
    density  Monte Carlo winner-density sampling and analytic references
    ingest   baseline / proposal / budget file parsing and rendering
    session  live collaboration sessions, wire protocol, trial orchestration
"""

__version__ = "0.1.0"
