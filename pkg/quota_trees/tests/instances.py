"""Small instance families shared by the exhaustive and randomized tests."""
import itertools
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from quota_trees.graph import from_pairs
from quota_trees.models import MultiGraph, Vector, WeightMap

Instance = Tuple[MultiGraph, Vector, Vector]


def _least_relabeling(counts: Sequence[int], vertex_count: int) -> bool:
    """Whether no vertex permutation gives a lexicographically smaller edge count table."""  # noqa: E501
    slots = list(itertools.product(range(vertex_count), repeat=2))
    table = dict(zip(slots, counts))
    for perm in itertools.permutations(range(vertex_count)):
        relabeled = tuple(table[(perm[src], perm[dst])] for src, dst in slots)
        if relabeled < tuple(counts):
            return False
    return True


def multigraphs(
    vertex_count: int,
    multiplicity: int = 1,
    up_to_relabeling: bool = False,
) -> Iterator[MultiGraph]:
    """
    Every multigraph with loops and at most multiplicity parallel edges per ordered pair.

    :param vertex_count: number of vertices.
    :param multiplicity: most parallel edges between two vertices.
    :param up_to_relabeling: keep one graph per vertex permutation class.
    :return: iterator over (multiplicity + 1)^(n*n) graphs, fewer when relabelings are skipped.
    """  # noqa: E501
    slots = list(itertools.product(range(vertex_count), repeat=2))
    for counts in itertools.product(range(multiplicity + 1), repeat=len(slots)):
        if up_to_relabeling and not _least_relabeling(counts, vertex_count):
            continue
        pairs = [pair for pair, count in zip(slots, counts) for _ in range(count)]
        yield from_pairs(vertex_count, pairs)


def simple_digraphs(vertex_count: int) -> Iterator[MultiGraph]:
    """
    Every digraph with loops and no parallel edges on the given vertices.

    :param vertex_count: number of vertices.
    :return: iterator over 2^(n*n) graphs.
    """
    return multigraphs(vertex_count)


def vectors(length: int, top: int) -> Iterator[Vector]:
    """
    Every vector with entries in 0..top.

    :param length: vector length.
    :param top: largest entry.
    :return: iterator over vectors.
    """
    return itertools.product(range(top + 1), repeat=length)  # type: ignore


def small_family(  # noqa: WPS211
    vertex_count: int,
    quota_top: int,
    portfolio_top: int,
    multiplicity: int = 1,
    up_to_relabeling: bool = False,
) -> Iterator[Instance]:
    """
    Every (graph, quota, portfolio) over multigraphs of one size.

    :param vertex_count: number of vertices.
    :param quota_top: largest quota entry.
    :param portfolio_top: largest portfolio entry.
    :param multiplicity: most parallel edges between two vertices.
    :param up_to_relabeling: keep one graph per vertex permutation class.
    :return: iterator over instances.
    """
    for graph in multigraphs(vertex_count, multiplicity, up_to_relabeling):
        for quota in vectors(vertex_count, quota_top):
            for portfolio in vectors(vertex_count, portfolio_top):
                yield graph, quota, portfolio


def random_graph(rng: np.random.Generator, max_vertices: int, max_edges: int) -> MultiGraph:  # noqa: E501
    """
    Random multigraph, loops and parallel edges allowed.

    :param rng: generator.
    :param max_vertices: largest vertex count.
    :param max_edges: largest edge count.
    :return: MultiGraph.
    """
    vertex_count = int(rng.integers(1, max_vertices + 1))
    edge_count = int(rng.integers(0, max_edges + 1))
    pairs = [
        (int(rng.integers(vertex_count)), int(rng.integers(vertex_count)))
        for _ in range(edge_count)
    ]
    return from_pairs(vertex_count, pairs)


def random_multigraph(rng: np.random.Generator, vertex_count: int, multiplicity: int) -> MultiGraph:  # noqa: E501
    """
    Random multigraph with at most multiplicity parallel edges per ordered pair.

    :param rng: generator.
    :param vertex_count: number of vertices.
    :param multiplicity: most parallel edges between two vertices.
    :return: MultiGraph.
    """
    slots = list(itertools.product(range(vertex_count), repeat=2))
    counts = rng.integers(0, multiplicity + 1, len(slots))
    pairs = [pair for pair, count in zip(slots, counts) for _ in range(int(count))]
    return from_pairs(vertex_count, pairs)


def random_instance(  # noqa: WPS211
    rng: np.random.Generator,
    max_vertices: int = 3,
    max_edges: int = 6,
    quota_top: int = 2,
    portfolio_top: int = 1,
) -> Instance:
    """
    Random (graph, quota, portfolio) with small entries.

    :param rng: generator.
    :param max_vertices: largest vertex count.
    :param max_edges: largest edge count.
    :param quota_top: largest quota entry.
    :param portfolio_top: largest portfolio entry.
    :return: instance.
    """
    graph = random_graph(rng, max_vertices, max_edges)
    size = graph.vertex_count
    quota = tuple(int(entry) for entry in rng.integers(0, quota_top + 1, size))
    portfolio = tuple(int(entry) for entry in rng.integers(0, portfolio_top + 1, size))
    return graph, quota, portfolio


def random_weights(rng: np.random.Generator, graph: MultiGraph, low: int, high: int) -> WeightMap:  # noqa: E501
    """
    Integer weights drawn uniformly from low..high.

    :param rng: generator.
    :param graph: host graph.
    :param low: smallest weight.
    :param high: largest weight.
    :return: WeightMap.
    """
    weights: List[int] = [int(rng.integers(low, high + 1)) for _ in graph.edges]
    return WeightMap(weights=tuple(weights))
