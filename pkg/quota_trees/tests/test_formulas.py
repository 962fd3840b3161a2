import pytest

from quota_trees.counting import count_forests
from quota_trees.exceptions import QuotaSpecError
from quota_trees.formulas import (
    catalan,
    catalan_triangle,
    cayley,
    complete_graph_forests,
    complete_graph_trees,
    complete_looped_graph_trees,
    cycle_graph_trees,
    path_graph_trees,
    rose_at_most,
    rose_exact,
)
from quota_trees.graph import complete_graph, cycle_graph, path_graph, rose_graph
from quota_trees.models import Mode


def _single_root(size: int, at: int = 0) -> tuple:
    return tuple(int(vertex == at) for vertex in range(size))


def test_rose_formulas() -> None:
    """
    Test rose_exact and rose_at_most functions.

    GIVEN roses with 0..3 loops
    WHEN the closed forms are evaluated for q <= 5 and s <= 3
    THEN they equal the quota symbol counts
    """
    for loops in range(4):
        rose = rose_graph(loops)
        for quota in range(6):
            for slots in range(4):
                assert rose_exact(loops, quota, slots) == count_forests(rose, (quota,), (slots,))  # noqa: E501
                assert rose_at_most(loops, quota, slots) == count_forests(
                    rose, (quota,), (slots,), Mode.AT_MOST,
                )


def test_catalan_numbers() -> None:
    """
    Test catalan and catalan_triangle functions.

    GIVEN small indices
    WHEN the numbers are computed
    THEN the known values appear and the triangle ends in its diagonal
    """
    assert [catalan(index) for index in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert [catalan_triangle(4, column) for column in range(6)] == [1, 4, 9, 14, 14, 0]
    assert catalan_triangle(-1, 0) == 0
    for index in range(8):
        assert catalan_triangle(index, index) == catalan(index)


@pytest.mark.parametrize("size", [2, 3, 4])
@pytest.mark.parametrize("quota", [1, 2])
def test_complete_graph_formulas(size: int, quota: int) -> None:
    """
    Test complete_graph_trees and complete_looped_graph_trees functions.

    GIVEN K_n with and without loops and a constant quota
    WHEN single-root trees are counted
    THEN the closed forms equal the quota symbol counts

    :param size: vertex count.
    :param quota: constant quota.
    """
    everywhere = (quota,) * size
    root = _single_root(size)

    assert complete_graph_trees(size, quota) == count_forests(complete_graph(size), everywhere, root)  # noqa: E501
    assert complete_looped_graph_trees(size, quota) == count_forests(
        complete_graph(size, loops=True), everywhere, root,
    )


@pytest.mark.parametrize("size", [2, 3])
def test_complete_graph_forest_formula(size: int) -> None:
    """
    Test complete_graph_forests function.

    GIVEN K_n with constant quota q <= 3 and s roots at every vertex
    WHEN forests are counted
    THEN the closed form equals the quota symbol count

    :param size: vertex count.
    """
    for quota in range(1, 4):
        for slots in range(1, quota + 1):
            assert complete_graph_forests(size, quota, slots) == count_forests(
                complete_graph(size), (quota,) * size, (slots,) * size,
            )


def test_path_and_cycle_formulas() -> None:
    """
    Test path_graph_trees and cycle_graph_trees functions.

    GIVEN two-way paths and cycles with constant quota 1..3
    WHEN single-root trees are counted
    THEN the closed forms equal the quota symbol counts
    """
    for quota in range(1, 4):
        for size in range(2, 6):
            path = path_graph(size)
            everywhere = (quota,) * size
            assert path_graph_trees(size, quota) == count_forests(path, everywhere, _single_root(size))  # noqa: E501
            if size >= 3:
                assert path_graph_trees(size, quota, internal_root=True) == count_forests(
                    path, everywhere, _single_root(size, 1),
                )
                assert cycle_graph_trees(size, quota) == count_forests(
                    cycle_graph(size), everywhere, _single_root(size),
                )


def test_cayley_formula() -> None:
    """
    Test cayley function.

    GIVEN n = 1..6
    WHEN cayley is called
    THEN it equals the q = 1 complete graph count
    """
    assert cayley(1) == 1
    for size in range(2, 7):
        assert cayley(size) == complete_graph_trees(size, 1)


def test_formula_parameter_errors() -> None:
    """
    Test the formula guards.

    GIVEN parameters outside the families
    WHEN the formulas are called
    THEN QuotaSpecError is raised, and s > q gives 0 on the rose
    """
    assert rose_exact(2, 1, 2) == 0
    with pytest.raises(QuotaSpecError):
        rose_exact(-1, 1, 1)
    with pytest.raises(QuotaSpecError):
        complete_graph_trees(1, 1)
    with pytest.raises(QuotaSpecError):
        complete_graph_forests(3, 2, 3)
    with pytest.raises(QuotaSpecError):
        path_graph_trees(2, 1, internal_root=True)
    with pytest.raises(QuotaSpecError):
        cycle_graph_trees(2, 1)
    with pytest.raises(QuotaSpecError):
        cayley(0)
