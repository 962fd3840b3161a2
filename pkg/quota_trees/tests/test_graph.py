import networkx as nx
import pytest
from pydantic import ValidationError

from quota_trees.cli.models import GraphDocument
from quota_trees.exceptions import QuotaSpecError
from quota_trees.graph import (
    adjacency_matrix,
    check_out_covering,
    complete_graph,
    cycle_graph,
    from_pairs,
    in_arrows,
    in_degrees,
    motzkin_graph,
    out_degrees,
    path_graph,
    rose_graph,
    to_networkx,
)
from quota_trees.models import Edge, MultiGraph


def test_adjacency_matrix_of_standard_graphs() -> None:
    """
    Test adjacency_matrix function.

    GIVEN the looped K2, the two-loop rose and the empty graph
    WHEN adjacency_matrix is called
    THEN parallel edges and loops are counted, the empty graph gives no rows
    """
    assert adjacency_matrix(complete_graph(2, loops=True)) == [[1, 1], [1, 1]]
    assert adjacency_matrix(rose_graph(2)) == [[2]]
    assert adjacency_matrix(from_pairs(0, [])) == []


def test_adjacency_matrix_of_fibonacci_graph(fibonacci_document: GraphDocument) -> None:  # noqa: E501
    """
    Test adjacency_matrix function.

    GIVEN the Fibonacci DFA graph file
    WHEN adjacency_matrix is called
    THEN the dead state shows its two loops

    :param fibonacci_document: fixture with the Fibonacci graph.
    """
    graph = fibonacci_document.to_graph()
    matrix = adjacency_matrix(graph)

    assert matrix == [[1, 1, 0], [1, 0, 1], [0, 0, 2]]
    assert [sum(row) for row in matrix] == list(out_degrees(graph))
    assert [sum(column) for column in zip(*matrix)] == list(in_degrees(graph))


def test_in_arrows(fibonacci_document: GraphDocument) -> None:
    """
    Test in_arrows function.

    GIVEN graphs and quota vectors
    WHEN in_arrows is called
    THEN it returns qM and rejects vectors of the wrong length

    :param fibonacci_document: fixture with the Fibonacci graph.
    """
    graph = fibonacci_document.to_graph()

    assert in_arrows(graph, (3, 2, 3)) == (5, 3, 8)
    assert in_arrows(graph, (0, 0, 0)) == (0, 0, 0)
    assert in_arrows(rose_graph(2), (3,)) == (6,)
    assert tuple(
        left + right
        for left, right in zip(in_arrows(graph, (1, 0, 0)), in_arrows(graph, (2, 2, 3)))
    ) == in_arrows(graph, (3, 2, 3))

    with pytest.raises(QuotaSpecError, match="length 2"):
        in_arrows(graph, (1, 1))


def test_out_covering_of_rose_by_looped_k2() -> None:
    """
    Test check_out_covering function.

    GIVEN the looped K2 over the two-loop rose
    WHEN check_out_covering is called with the natural maps or a perturbed edge map
    THEN only the natural maps form an out-covering
    """
    cover = complete_graph(2, loops=True)
    base = rose_graph(2)
    edge_map = [0, 1, 0, 1]

    assert check_out_covering(cover, base, [0, 0], edge_map)
    for position in range(len(edge_map)):
        broken = list(edge_map)
        broken[position] = 1 - broken[position]
        assert not check_out_covering(cover, base, [0, 0], broken)


def test_out_covering_rejects_bad_maps() -> None:
    """
    Test check_out_covering function.

    GIVEN maps of the wrong length or pointing outside the base graph
    WHEN check_out_covering is called
    THEN QuotaSpecError is raised, and a map ignoring endpoints is rejected
    """
    cover = complete_graph(2, loops=True)
    base = rose_graph(2)

    with pytest.raises(QuotaSpecError):
        check_out_covering(cover, base, [0], [0, 1, 0, 1])
    with pytest.raises(QuotaSpecError):
        check_out_covering(cover, base, [0, 0], [0, 1, 0, 2])
    with pytest.raises(QuotaSpecError):
        check_out_covering(cover, base, [0, 1], [0, 1, 0, 1])

    path = path_graph(2)
    assert not check_out_covering(path, complete_graph(2), [0, 0], [0, 1])


def test_graph_families() -> None:
    """
    Test the graph family builders.

    GIVEN vertex counts
    WHEN the family builders are called
    THEN edge counts and degrees match the families
    """
    assert complete_graph(3).edge_count == 6
    assert complete_graph(3, loops=True).edge_count == 9
    assert path_graph(4).edge_count == 6
    assert cycle_graph(4).edge_count == 8
    assert out_degrees(cycle_graph(5)) == (2,) * 5
    assert motzkin_graph().names == ("A", "B")
    assert adjacency_matrix(motzkin_graph()) == [[0, 1], [1, 1]]

    with pytest.raises(QuotaSpecError):
        cycle_graph(2)


def test_to_networkx_repeats_edges() -> None:
    """
    Test to_networkx function.

    GIVEN a graph with a loop and a multiplicity vector
    WHEN to_networkx is called
    THEN every copy becomes a keyed networkx edge and restriction drops outside edges
    """
    graph = from_pairs(3, [(0, 1), (1, 1), (1, 2)])
    nx_graph = to_networkx(graph, multiplicity=[2, 0, 1])

    assert isinstance(nx_graph, nx.MultiDiGraph)
    assert nx_graph.number_of_edges() == 3
    assert sorted(key for _, _, key in nx_graph.edges(keys=True)) == [(0, 0), (0, 1), (2, 0)]  # noqa: E501

    restricted = to_networkx(graph, vertices=[1, 2])
    assert sorted(restricted.nodes) == [1, 2]
    assert restricted.number_of_edges() == 2


def test_multigraph_validation() -> None:
    """
    Test MultiGraph model validation.

    GIVEN edge records out of sequence or out of range
    WHEN MultiGraph is created
    THEN ValidationError is raised
    """
    with pytest.raises(ValidationError, match="edge ids must be 0..E-1"):
        MultiGraph(vertex_count=2, edges=(Edge(edge_id=1, src=0, dst=1),))
    with pytest.raises(ValidationError, match="endpoint outside"):
        MultiGraph(vertex_count=2, edges=(Edge(edge_id=0, src=0, dst=2),))
    with pytest.raises(ValidationError, match="one name per vertex"):
        MultiGraph(vertex_count=2, names=("A",))

    graph = from_pairs(2, [(0, 1), (0, 1), (1, 0)], names=("A", "B"))
    assert graph.outstar(0) == (0, 1)
    assert graph.instar(0) == (2,)
    assert graph.vertex_name(1) == "B"
