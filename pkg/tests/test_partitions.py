import pytest
from hypothesis import given
from hypothesis import strategies as st

from kblowup.errors import CellOutOfDiagram
from kblowup.partitions import (YoungDiagram, YoungTuple, arm, cell_stats, colored_partition_count, enumerate_tuples,
                                leg, partitions)

diagrams = st.integers(0, 9).flatmap(lambda n: st.sampled_from(partitions(n))).map(YoungDiagram)


def test_partition_numbers():
    assert [len(partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]


def test_colored_counts_match_enumeration():
    # coefficients of prod (1-q^k)^-2
    assert [colored_partition_count(2, n) for n in range(6)] == [1, 2, 5, 10, 20, 36]
    for r in (1, 2, 3):
        for n in range(5):
            tuples = list(enumerate_tuples(r, n))
            assert len(tuples) == colored_partition_count(r, n)
            assert len(set(tuples)) == len(tuples)
            assert all(Y.total == n and Y.rank == r for Y in tuples)


@given(diagrams)
def test_transpose_swaps_arm_and_leg(Y):
    T = Y.transpose()
    assert T.transpose() == Y and T.size == Y.size
    for (i, j) in Y.cells():
        assert arm(Y, (i, j)) == leg(T, (j, i))
        assert arm(Y, (i, j)) >= 0 and leg(Y, (i, j)) >= 0


@given(diagrams)
def test_hook_lengths_sum(Y):
    # sum of hook lengths = sum over rows of C(row+1, 2) + sum over columns of C(col, 2)
    hooks = sum(arm(Y, c) + leg(Y, c) + 1 for c in Y.cells())
    cols = [Y.column_length(j) for j in range(1, (Y.rows[0] if Y.rows else 0) + 1)]
    assert hooks == sum(r * (r + 1) // 2 for r in Y.rows) + sum(c * (c - 1) // 2 for c in cols)


def test_cell_stats():
    Y = YoungDiagram((3, 1))
    assert cell_stats(Y, (1, 1)) == (2, 1, 0, 0)
    assert cell_stats(Y, (1, 3)) == (0, 0, 2, 0)
    with pytest.raises(CellOutOfDiagram):
        cell_stats(Y, (2, 2))
    assert cell_stats(Y, (2, 2), relative_to=Y) == (-1, -1, 1, 1)


def test_text_round_trip():
    Y = YoungTuple(((2, 1), (), (3,)))
    assert YoungTuple.from_text(Y.to_text()) == Y
    with pytest.raises(ValueError):
        YoungDiagram((1, 2))
