import pytest
from hypothesis import given, strategies as st

from accord.core.comments import aggregate_comments, comment_bin
from accord.core.model import BoundsError, Comment


def make(agreement, importance):
    return Comment(proposal_id="p", text="", agreement=agreement, importance=importance)


def test_empty_list_gives_all_zero_cells():
    matrix = aggregate_comments([], grid_size=5)
    assert matrix.total == 0
    assert all(c == 0 for row in matrix.cells for c in row)


def test_plus_one_lands_in_last_closed_bin():
    matrix = aggregate_comments([make(1.0, 1.0)], grid_size=5)
    assert matrix.count(4, 4) == 1
    assert sum(c for row in matrix.cells for c in row) == 1


def test_center_cell_for_odd_grid():
    matrix = aggregate_comments([make(0.0, 0.0), make(0.0, 0.0)], grid_size=5)
    assert matrix.count(2, 2) == 2


def test_minus_one_lands_in_first_bin():
    matrix = aggregate_comments([make(-1.0, -1.0)], grid_size=5)
    assert matrix.count(0, 0) == 1


def test_bin_edges_are_half_open():
    # With G=2 the boundary value 0 belongs to the upper bin.
    assert comment_bin(0.0, 2) == 1
    assert comment_bin(-1e-9, 2) == 0


def test_grid_size_one():
    matrix = aggregate_comments([make(-1.0, 1.0), make(0.3, -0.2)], grid_size=1)
    assert matrix.count(0, 0) == 2


def test_grid_size_must_be_positive():
    with pytest.raises(ValueError):
        aggregate_comments([], grid_size=0)


def test_out_of_bounds_rating_rejected_not_clamped():
    comment = make(1.0, 1.0)
    object.__setattr__(comment, "agreement", 1.5)  # bypass constructor check
    with pytest.raises(BoundsError):
        aggregate_comments([comment], grid_size=5)


ratings = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


@given(st.lists(st.tuples(ratings, ratings), max_size=100), st.integers(min_value=1, max_value=9))
def test_total_count_equals_input_length(pairs, grid_size):
    matrix = aggregate_comments([make(a, i) for a, i in pairs], grid_size=grid_size)
    assert matrix.total == len(pairs)
    assert sum(c for row in matrix.cells for c in row) == len(pairs)


@given(ratings, st.integers(min_value=1, max_value=9))
def test_every_rating_bins_exactly_once(value, grid_size):
    index = comment_bin(value, grid_size)
    assert 0 <= index < grid_size
