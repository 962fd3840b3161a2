"""Directed multigraph arithmetic, predicates and standard graph families."""
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from quota_trees.exceptions import QuotaSpecError
from quota_trees.models import Edge, MultiGraph, Vector
from quota_trees.settings import settings

logger = logging.getLogger(settings.logger_name)

Matrix = List[List[int]]


def from_pairs(
    vertex_count: int,
    pairs: Iterable[Tuple[int, int]],
    names: Optional[Sequence[str]] = None,
) -> MultiGraph:
    """
    Build a graph from (src, dst) pairs, edge ids follow the pair order.

    :param vertex_count: number of vertices.
    :param pairs: edge endpoints in edge id order.
    :param names: optional vertex names.
    :return: validated MultiGraph.
    """
    edges = tuple(
        Edge(edge_id=edge_id, src=src, dst=dst)
        for edge_id, (src, dst) in enumerate(pairs)
    )
    return MultiGraph(
        vertex_count=vertex_count,
        edges=edges,
        names=tuple(names) if names is not None else None,
    )


def adjacency_matrix(graph: MultiGraph) -> Matrix:
    """
    Count edges between every ordered pair of vertices.

    :param graph: host graph.
    :return: n x n matrix, loops on the diagonal.
    """
    matrix = [[0] * graph.vertex_count for _ in range(graph.vertex_count)]
    for edge in graph.edges:
        matrix[edge.src][edge.dst] += 1
    return matrix


def out_degrees(graph: MultiGraph) -> Vector:
    """
    Out-degree of every vertex, loops included.

    :param graph: host graph.
    :return: per-vertex out-degrees.
    """
    return tuple(len(graph.outstar(vertex)) for vertex in range(graph.vertex_count))


def in_degrees(graph: MultiGraph) -> Vector:
    """
    In-degree of every vertex, loops included.

    :param graph: host graph.
    :return: per-vertex in-degrees.
    """
    return tuple(len(graph.instar(vertex)) for vertex in range(graph.vertex_count))


def in_arrows(graph: MultiGraph, quota: Sequence[int]) -> Vector:
    """
    Arrows available into every vertex when each vertex v is visited q(v) times.

    This is the row vector q times the adjacency matrix.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :return: per-vertex count of available in-arrows.
    """
    quota = graph.check_vector(quota, "quota")
    arrows = [0] * graph.vertex_count
    for edge in graph.edges:
        arrows[edge.dst] += quota[edge.src]
    return tuple(arrows)


def check_out_covering(
    cover: MultiGraph,
    base: MultiGraph,
    vertex_map: Sequence[int],
    edge_map: Sequence[int],
) -> bool:
    """
    Decide whether a pair of maps is an out-covering of base by cover.

    The maps must form a graph map, and for every cover vertex v the edge map
    must send outstar(v) bijectively onto outstar(vertex_map[v]).

    :param cover: covering graph.
    :param base: covered graph.
    :param vertex_map: base vertex of every cover vertex.
    :param edge_map: base edge of every cover edge.
    :raises QuotaSpecError: when a map has the wrong length or leaves the base graph.
    :return: True for an out-covering.
    """  # noqa: E501
    if len(vertex_map) != cover.vertex_count or len(edge_map) != cover.edge_count:
        raise QuotaSpecError("covering maps must have one entry per cover vertex and edge")
    if any(not 0 <= vertex < base.vertex_count for vertex in vertex_map):
        raise QuotaSpecError("vertex map points outside the base graph")
    if any(not 0 <= edge_id < base.edge_count for edge_id in edge_map):
        raise QuotaSpecError("edge map points outside the base graph")

    for edge in cover.edges:
        image = base.edges[edge_map[edge.edge_id]]
        if image.src != vertex_map[edge.src] or image.dst != vertex_map[edge.dst]:
            logger.debug(f"cover edge {edge.edge_id} is not mapped along its endpoints")
            return False

    for vertex in range(cover.vertex_count):
        images = sorted(edge_map[edge_id] for edge_id in cover.outstar(vertex))
        if images != sorted(base.outstar(vertex_map[vertex])):
            logger.debug(f"outstar of cover vertex {vertex} is not mapped bijectively")
            return False
    return True


def to_networkx(
    graph: MultiGraph,
    multiplicity: Optional[Sequence[int]] = None,
    vertices: Optional[Iterable[int]] = None,
) -> nx.MultiDiGraph:
    """
    Copy a graph into networkx, optionally repeating every edge.

    Edge keys are (edge_id, copy) pairs so circuits can be read back as edge ids.

    :param graph: host graph.
    :param multiplicity: number of copies of every edge, one each when omitted.
    :param vertices: restrict to the subgraph induced by these vertices.
    :return: networkx multidigraph.
    """
    keep = set(range(graph.vertex_count)) if vertices is None else set(vertices)
    nx_graph = nx.MultiDiGraph()
    nx_graph.add_nodes_from(sorted(keep))
    for edge in graph.edges:
        if edge.src not in keep or edge.dst not in keep:
            continue
        copies = 1 if multiplicity is None else multiplicity[edge.edge_id]
        for copy in range(copies):
            nx_graph.add_edge(edge.src, edge.dst, key=(edge.edge_id, copy))
    return nx_graph


def rose_graph(loops: int) -> MultiGraph:
    """
    Single vertex carrying a number of loops.

    :param loops: number of loops.
    :return: the rose graph.
    """
    return from_pairs(1, [(0, 0)] * loops)


def complete_graph(vertex_count: int, loops: bool = False) -> MultiGraph:
    """
    Complete digraph, with a loop at every vertex on request.

    :param vertex_count: number of vertices.
    :param loops: add a loop at every vertex.
    :return: the complete graph.
    """
    pairs = [
        (src, dst)
        for src in range(vertex_count)
        for dst in range(vertex_count)
        if loops or src != dst
    ]
    return from_pairs(vertex_count, pairs)


def path_graph(vertex_count: int) -> MultiGraph:
    """
    Path with edges in both directions between neighbours.

    :param vertex_count: number of vertices.
    :return: the path graph.
    """
    pairs: List[Tuple[int, int]] = []
    for vertex in range(vertex_count - 1):
        pairs.extend([(vertex, vertex + 1), (vertex + 1, vertex)])
    return from_pairs(vertex_count, pairs)


def cycle_graph(vertex_count: int) -> MultiGraph:
    """
    Cycle with edges in both directions between neighbours.

    :param vertex_count: number of vertices, at least 3.
    :raises QuotaSpecError: for fewer than 3 vertices.
    :return: the cycle graph.
    """
    if vertex_count < 3:
        raise QuotaSpecError("a cycle graph needs at least 3 vertices")
    pairs: List[Tuple[int, int]] = []
    for vertex in range(vertex_count):
        neighbour = (vertex + 1) % vertex_count
        pairs.extend([(vertex, neighbour), (neighbour, vertex)])
    return from_pairs(vertex_count, pairs)


def motzkin_graph() -> MultiGraph:
    """
    Two vertices, A to B, B to A and a loop at B.

    :return: the graph whose tree counts sum to Motzkin numbers.
    """
    return from_pairs(2, [(0, 1), (1, 0), (1, 1)], names=("A", "B"))
