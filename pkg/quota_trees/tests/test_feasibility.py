import itertools
from typing import Iterable, Iterator

import numpy as np
import pytest

from quota_trees.cli.models import GraphDocument
from quota_trees.counting import count_forests
from quota_trees.exceptions import QuotaSpecError
from quota_trees.feasibility import (
    achievable,
    enough_arrows_violations,
    feasibility_report,
    is_connected_support,
)
from quota_trees.graph import complete_graph, from_pairs
from quota_trees.models import Discipline, Mode, SearchConfig
from quota_trees.search import quota_search
from quota_trees.settings import settings
from quota_trees.tests.instances import Instance, random_multigraph, small_family

DISCIPLINES = (
    SearchConfig(discipline=Discipline.FIFO),
    SearchConfig(discipline=Discipline.LIFO),
) + tuple(SearchConfig(discipline=Discipline.RANDOM, seed=seed) for seed in range(5))


def test_enough_arrows_on_fibonacci(fibonacci_document: GraphDocument) -> None:
    """
    Test enough_arrows_violations function.

    GIVEN the Fibonacci graph with one start at A
    WHEN quota (1, 2, 1) and (3, 2, 3) are checked
    THEN the first lacks arrows into B and the second is achievable

    :param fibonacci_document: fixture with the Fibonacci graph.
    """
    graph = fibonacci_document.to_graph()

    assert enough_arrows_violations(graph, (1, 2, 1), (1, 0, 0)) == (1,)
    assert not achievable(graph, (1, 2, 1), (1, 0, 0))
    assert enough_arrows_violations(graph, (3, 2, 3), (1, 0, 0)) == ()
    assert achievable(graph, (3, 2, 3), (1, 0, 0))


def test_fibonacci_class_sizes_need_x_at_least_y(fibonacci_document: GraphDocument) -> None:  # noqa: E501
    """
    Test achievable function.

    GIVEN the Fibonacci graph and sizes (x, y, z) with entries 1..4
    WHEN achievable is called
    THEN the verdict is exactly x >= y

    :param fibonacci_document: fixture with the Fibonacci graph.
    """
    graph = fibonacci_document.to_graph()
    for sizes in itertools.product(range(1, 5), repeat=3):
        assert achievable(graph, sizes, (1, 0, 0)) == (sizes[0] >= sizes[1])


def test_connected_support_witness() -> None:
    """
    Test is_connected_support function.

    GIVEN a graph where vertex 2 is isolated, and a start with zero quota
    WHEN is_connected_support is called
    THEN the unreachable positive-quota vertices are listed
    """
    graph = from_pairs(3, [(0, 1), (1, 0)])
    assert is_connected_support(graph, (1, 1, 1), (1, 0, 0)) == (False, (2,))
    assert is_connected_support(graph, (1, 1, 0), (1, 0, 0)) == (True, ())

    # a start vertex without quota carries no root
    assert is_connected_support(graph, (0, 1, 0), (1, 0, 0)) == (False, (1,))

    # paths may not pass through zero-quota vertices
    chain = from_pairs(3, [(0, 1), (1, 2)])
    assert is_connected_support(chain, (1, 0, 1), (1, 0, 0)) == (False, (2,))


def test_exact_needs_quota_covering_portfolio() -> None:
    """
    Test achievable function.

    GIVEN the looped K2 with q = 0 and one start
    WHEN achievable is called in both modes
    THEN only the at-most mode accepts the empty forest
    """
    graph = complete_graph(2, loops=True)

    assert achievable(graph, (0, 0), (1, 0), Mode.AT_MOST)
    assert not achievable(graph, (0, 0), (1, 0), Mode.EXACT)

    with pytest.raises(QuotaSpecError):
        achievable(graph, (1,), (1, 0))


def test_feasibility_report(fibonacci_document: GraphDocument) -> None:
    """
    Test feasibility_report function.

    GIVEN the Fibonacci graph with quota below the portfolio at A
    WHEN feasibility_report is called
    THEN it lists the offending vertex and separates the two modes

    :param fibonacci_document: fixture with the Fibonacci graph.
    """
    graph = fibonacci_document.to_graph()
    report = feasibility_report(graph, (1, 1, 1), (2, 0, 0))

    assert report.connected
    assert report.portfolio_exceeds_quota == (0,)
    assert report.enough_arrows_violations == ()
    assert report.achievable_at_most
    assert not report.achievable_exact


def _check_instances(instances: Iterable[Instance]) -> int:
    checked = 0
    for graph, quota, portfolio in instances:
        for mode in Mode:
            feasible = achievable(graph, quota, portfolio, mode)
            assert (count_forests(graph, quota, portfolio, mode) > 0) == feasible
            if mode is Mode.EXACT and any(
                need < start for need, start in zip(quota, portfolio)
            ):
                continue
            for discipline in DISCIPLINES:
                config = discipline.model_copy(update={"mode": mode})
                report = quota_search(graph, quota, portfolio, config)
                assert report.succeeded == feasible, (graph, quota, portfolio, config)
        checked += 1
    return checked


@pytest.mark.parametrize("vertex_count", [1, 2])
def test_search_succeeds_exactly_when_feasible(vertex_count: int) -> None:
    """
    Test the enough-arrows condition.

    GIVEN every multigraph on one or two vertices with at most two parallel edges,
    q <= 3 and s <= 2
    WHEN searches with FIFO, LIFO and RANDOM under five seeds run and forests are counted
    THEN search success and a positive count both match achievable

    :param vertex_count: number of vertices.
    """
    family = small_family(vertex_count, 3, 2, multiplicity=2)
    assert _check_instances(family) == 3 ** (vertex_count ** 2) * 4 ** vertex_count * 3 ** vertex_count  # noqa: E501


@pytest.mark.skipif(
    not settings.run_exhaustive_tests,
    reason="exhaustive three-vertex sweep",
)
def test_search_succeeds_exactly_when_feasible_three_vertices() -> None:
    """
    Test the enough-arrows condition.

    GIVEN every simple digraph on three vertices up to relabeling with q <= 2 and s <= 1
    WHEN searches with FIFO, LIFO and RANDOM under five seeds run and forests are counted
    THEN search success and a positive count both match achievable
    """
    family = small_family(3, 2, 1, up_to_relabeling=True)
    # 104 digraphs with loops on three unlabeled vertices
    assert _check_instances(family) == 104 * 27 * 8


@pytest.mark.skipif(
    not settings.run_exhaustive_tests,
    reason="randomized three-vertex multigraph sweep",
)
def test_search_succeeds_exactly_when_feasible_three_vertex_multigraphs() -> None:
    """
    Test the enough-arrows condition.

    GIVEN 3000 random multigraphs on three vertices with at most two parallel edges,
    q <= 3 and s <= 2
    WHEN searches with FIFO, LIFO and RANDOM under five seeds run and forests are counted
    THEN search success and a positive count both match achievable
    """
    rng = np.random.default_rng(2024)

    def draws() -> Iterator[Instance]:
        for _ in range(3000):
            graph = random_multigraph(rng, 3, 2)
            quota = tuple(int(entry) for entry in rng.integers(0, 4, 3))
            portfolio = tuple(int(entry) for entry in rng.integers(0, 3, 3))
            yield graph, quota, portfolio

    assert _check_instances(draws()) == 3000


def test_monotone_in_portfolio(fibonacci_document: GraphDocument) -> None:
    """
    Test achievable function.

    GIVEN an at-most feasible instance
    WHEN the portfolio grows
    THEN the instance stays at-most feasible

    :param fibonacci_document: fixture with the Fibonacci graph.
    """
    graph = fibonacci_document.to_graph()
    for portfolio in itertools.product(range(1, 3), range(3), range(3)):
        assert achievable(graph, (3, 2, 3), portfolio, Mode.AT_MOST)
