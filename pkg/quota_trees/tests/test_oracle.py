import pytest

from quota_trees.cli.models import GraphDocument
from quota_trees.exceptions import EnumerationBoundError, QuotaSpecError
from quota_trees.graph import complete_graph, from_pairs, rose_graph
from quota_trees.models import Mode, WeightMap
from quota_trees.oracle import brute_force_k_lightest, brute_force_mqf, enumerate_forests
from quota_trees.search import canonical_key, validate_forest


@pytest.mark.parametrize("mode", list(Mode))
def test_enumerate_looped_k2(mode: Mode, k2loop_document: GraphDocument) -> None:
    """
    Test enumerate_forests function.

    GIVEN the looped K2 with q = (2, 2) and one root at vertex 0
    WHEN every forest is enumerated
    THEN there are 6 distinct valid forests in canonical form

    :param mode: portfolio semantics.
    :param k2loop_document: fixture with the looped K2.
    """
    graph = k2loop_document.to_graph()
    quota, portfolio = tuple(k2loop_document.quota), tuple(k2loop_document.portfolio)
    forests = enumerate_forests(graph, quota, portfolio, mode)

    assert len(forests) == 6
    assert len({canonical_key(forest) for forest in forests}) == 6
    for forest in forests:
        assert validate_forest(forest, graph, quota, portfolio, mode).valid


def test_enumerate_rose(rose2_document: GraphDocument) -> None:
    """
    Test enumerate_forests function.

    GIVEN the two-loop rose with q = 3 and one root
    WHEN every forest is enumerated
    THEN the 5 binary trees with three nodes appear

    :param rose2_document: fixture with the two-loop rose.
    """
    forests = enumerate_forests(rose2_document.to_graph(), (3,), (1,))

    assert len(forests) == 5
    assert all(forest.node_count == 3 for forest in forests)


def test_enumerate_zero_quota() -> None:
    """
    Test enumerate_forests function.

    GIVEN q = 0 and one start slot
    WHEN forests are enumerated in both modes
    THEN only the at-most mode has the empty forest, with its slot unused
    """
    graph = complete_graph(2, loops=True)
    at_most = enumerate_forests(graph, (0, 0), (1, 0), Mode.AT_MOST)

    assert len(at_most) == 1
    assert at_most[0].node_count == 0
    assert at_most[0].root_slots == ((None,), ())
    assert enumerate_forests(graph, (0, 0), (1, 0), Mode.EXACT) == []


def test_at_most_slots_are_distinguished() -> None:
    """
    Test enumerate_forests function.

    GIVEN the two-loop rose with q = 2 and two start slots
    WHEN at-most forests are enumerated
    THEN a single tree counts once per slot it may occupy
    """
    forests = enumerate_forests(rose_graph(2), (2,), (2,), Mode.AT_MOST)
    single_root = [forest for forest in forests if forest.root_count() == 1]

    assert len(forests) == 5
    assert len(single_root) == 4
    assert {forest.root_slots for forest in single_root} == {((0, None),), ((None, 0),)}


def test_enumeration_bound() -> None:
    """
    Test enumerate_forests function.

    GIVEN a total quota above the configured cap
    WHEN enumerate_forests is called with and without force
    THEN the bound is enforced unless forced
    """
    graph = rose_graph(1)

    with pytest.raises(EnumerationBoundError, match="exceeds the enumeration cap"):
        enumerate_forests(graph, (11,), (1,))
    forests = enumerate_forests(graph, (11,), (1,), force=True)
    assert len(forests) == 1
    assert forests[0].node_count == 11


def test_brute_force_mqf() -> None:
    """
    Test brute_force_mqf function.

    GIVEN a single loop with weight 2, and an infeasible instance
    WHEN the minimum weight is searched
    THEN the chain of three nodes weighs 4 and the infeasible one gives None
    """
    assert brute_force_mqf(rose_graph(1), (3,), (1,), WeightMap(weights=(2,))) == 4

    graph = from_pairs(2, [(0, 0)])
    assert brute_force_mqf(graph, (1, 1), (1, 0), WeightMap(weights=(1,))) is None

    with pytest.raises(EnumerationBoundError):
        brute_force_mqf(rose_graph(1), (12,), (1,), WeightMap(weights=(1,)))


def test_brute_force_k_lightest(triangle_document: GraphDocument) -> None:
    """
    Test brute_force_k_lightest function.

    GIVEN the weighted triangle and a graph with an unreachable vertex
    WHEN path weights are enumerated
    THEN the lightest weights come back and unreachable vertices get none

    :param triangle_document: fixture with the weighted triangle.
    """
    graph = triangle_document.to_graph()
    weights = triangle_document.to_weights()

    assert brute_force_k_lightest(graph, (1, 0, 0), 2, weights) == [[0], [1], [2, 3]]

    loop = from_pairs(2, [(0, 0)])
    assert brute_force_k_lightest(loop, (1, 0), 2, WeightMap(weights=(1,))) == [[0, 1], []]  # noqa: E501

    with pytest.raises(QuotaSpecError, match="k must be positive"):
        brute_force_k_lightest(graph, (1, 0, 0), 0, weights)
    with pytest.raises(QuotaSpecError, match="nonnegative"):
        brute_force_k_lightest(graph, (1, 0, 0), 1, WeightMap(weights=(1, -1, 1)))
