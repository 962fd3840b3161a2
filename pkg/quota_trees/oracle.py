"""
Brute-force reference implementations.

Everything here is exponential and guarded by settings.enumerate_quota_cap;
it exists to cross-check the determinant counts, the search, the minimum
quota forest and the k lightest paths on small instances.
"""
import itertools
import logging
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from quota_trees.exceptions import EnumerationBoundError, QuotaSpecError
from quota_trees.graph import adjacency_matrix
from quota_trees.models import ForestNode, ImmersedForest, Mode, MultiGraph, Vector, WeightMap
from quota_trees.search import CanonicalKey, canonical_key, canonicalize
from quota_trees.settings import settings

logger = logging.getLogger(settings.logger_name)

# (image, parent, parent_edge)
RawNode = Tuple[int, Optional[int], Optional[int]]


class _Backtracker:
    """
    Grows forests breadth first, one outstar subset per node.

    Children are appended in edge id order, so every forest with the given
    roots is produced exactly once.
    """

    def __init__(self, graph: MultiGraph, quota: Vector) -> None:
        self.graph = graph
        self.adjacency = adjacency_matrix(graph)
        self.remaining = list(quota)
        self.nodes: List[RawNode] = []

    def run(self, roots: Sequence[int]) -> Iterator[Tuple[RawNode, ...]]:
        for vertex in roots:
            self.remaining[vertex] -= 1
            self.nodes.append((vertex, None, None))
        if min(self.remaining, default=0) >= 0:
            yield from self._grow(0)

    def _hopeless(self, frontier: int) -> bool:
        size = self.graph.vertex_count
        pending = [0] * size
        for image, _, _ in self.nodes[frontier:]:
            pending[image] += 1
        for vertex in range(size):
            if self.remaining[vertex] == 0:
                continue
            supply = sum(
                self.adjacency[source][vertex] * (pending[source] + self.remaining[source])  # noqa: E501
                for source in range(size)
            )
            if self.remaining[vertex] > supply:
                return True
        return False

    def _grow(self, frontier: int) -> Iterator[Tuple[RawNode, ...]]:
        if frontier == len(self.nodes):
            if not any(self.remaining):
                yield tuple(self.nodes)
            return
        if self._hopeless(frontier):
            return
        image = self.nodes[frontier][0]
        yield from self._choose(frontier, self.graph.outstar(image), 0)

    def _choose(
        self,
        frontier: int,
        outstar: Tuple[int, ...],
        position: int,
    ) -> Iterator[Tuple[RawNode, ...]]:
        if position == len(outstar):
            yield from self._grow(frontier + 1)
            return
        yield from self._choose(frontier, outstar, position + 1)
        edge = self.graph.edges[outstar[position]]
        if self.remaining[edge.dst] == 0:
            return
        self.remaining[edge.dst] -= 1
        self.nodes.append((edge.dst, frontier, edge.edge_id))
        yield from self._choose(frontier, outstar, position + 1)
        self.nodes.pop()
        self.remaining[edge.dst] += 1


def _check_bound(quota: Vector, force: bool) -> None:
    total = sum(quota)
    if total > settings.enumerate_quota_cap and not force:
        raise EnumerationBoundError(
            f"total quota {total} exceeds the enumeration cap {settings.enumerate_quota_cap}",  # noqa: E501
        )


def _root_choices(
    quota: Vector,
    portfolio: Vector,
    mode: Mode,
) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """Used slot positions per vertex, every slot in exact mode."""
    if mode is Mode.EXACT:
        yield tuple(tuple(range(start)) for start in portfolio)
        return
    per_vertex = []
    for need, start in zip(quota, portfolio):
        per_vertex.append(
            [
                used
                for size in range(min(need, start) + 1)
                for used in itertools.combinations(range(start), size)
            ],
        )
    yield from itertools.product(*per_vertex)


def _iter_raw(
    graph: MultiGraph,
    quota: Vector,
    portfolio: Vector,
    mode: Mode,
) -> Iterator[Tuple[Tuple[RawNode, ...], Tuple[Tuple[Optional[int], ...], ...]]]:
    for used in _root_choices(quota, portfolio, mode):
        roots = [vertex for vertex, slots in enumerate(used) for _ in slots]
        root_slots: List[List[Optional[int]]] = [
            [None] * start for start in portfolio
        ]
        node_id = 0
        for vertex, slots in enumerate(used):
            for slot in slots:
                root_slots[vertex][slot] = node_id
                node_id += 1
        frozen_slots = tuple(tuple(slot) for slot in root_slots)
        for nodes in _Backtracker(graph, quota).run(roots):
            yield nodes, frozen_slots


def enumerate_forests(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    mode: Mode = Mode.EXACT,
    force: bool = False,
) -> List[ImmersedForest]:
    """
    Every quota forest of (G, q, s), in canonical form.

    Roots are distinguishable: forests differing only by which trees sit in
    which slot of a vertex are different. At-most forests additionally differ
    by which slots they use.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param mode: exact or at-most portfolio semantics.
    :param force: ignore the total quota cap.
    :raises EnumerationBoundError: when the total quota exceeds the cap.
    :return: canonical forests, pairwise distinct.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    _check_bound(quota, force)

    forests: Dict[CanonicalKey, ImmersedForest] = {}
    for nodes, root_slots in _iter_raw(graph, quota, portfolio, mode):
        forest = canonicalize(
            ImmersedForest(
                nodes=tuple(
                    ForestNode(node_id=index, image=image, parent=parent, parent_edge=edge)  # noqa: E501
                    for index, (image, parent, edge) in enumerate(nodes)
                ),
                root_slots=root_slots,
            ),
        )
        forests.setdefault(canonical_key(forest), forest)
    logger.info(f"enumerated {len(forests)} {mode.value} forests")
    return list(forests.values())


def brute_force_mqf(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    weights: WeightMap,
    force: bool = False,
) -> Optional[Fraction]:
    """
    Minimum weight over all exact quota forests.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param weights: edge weights, any sign.
    :param force: ignore the total quota cap.
    :raises EnumerationBoundError: when the total quota exceeds the cap.
    :return: the minimum weight, None when no forest exists.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    edge_weights = weights.check_against(graph).weights
    _check_bound(quota, force)

    best: Optional[Fraction] = None
    for nodes, _ in _iter_raw(graph, quota, portfolio, Mode.EXACT):
        weight = sum(
            (edge_weights[edge] for _, _, edge in nodes if edge is not None),
            Fraction(0),
        )
        if best is None or weight < best:
            best = weight
    return best


def brute_force_k_lightest(
    graph: MultiGraph,
    sources: Sequence[int],
    k: int,
    weights: WeightMap,
) -> List[List[Fraction]]:
    """
    The k smallest walk weights per vertex, by walk length.

    Walks from the sources are taken layer by layer up to k * n - 1 edges,
    then the weights reaching each vertex are sorted and cut at k. A set of
    k lightest walks per vertex can be chosen closed under prefixes, with
    each vertex ending at most k of them, so no walk in it is longer. Within
    one layer only the k lightest weights per vertex can extend to one of
    the k lightest walks of the next layer, so each layer keeps k weights.

    :param graph: host graph.
    :param sources: start vertices, any positive entry marks a source.
    :param k: walks wanted per vertex.
    :param weights: nonnegative edge weights.
    :raises QuotaSpecError: for k < 1 or a negative weight.
    :return: sorted weights per vertex, possibly fewer than k.
    """
    sources = graph.check_vector(sources, "sources")
    edge_weights = weights.check_against(graph).weights
    if k < 1:
        raise QuotaSpecError("k must be positive")
    if any(weight < 0 for weight in edge_weights):
        raise QuotaSpecError("path enumeration needs nonnegative weights")

    layer: List[List[Fraction]] = [[Fraction(0)] if entry > 0 else [] for entry in sources]  # noqa: E501
    reached = [list(ends) for ends in layer]
    for _ in range(k * graph.vertex_count - 1):
        extended: List[List[Fraction]] = [[] for _ in range(graph.vertex_count)]
        for edge in graph.edges:
            extended[edge.dst].extend(
                weight + edge_weights[edge.edge_id] for weight in layer[edge.src]
            )
        layer = [sorted(ends)[:k] for ends in extended]
        for vertex, ends in enumerate(layer):
            reached[vertex].extend(ends)
    return [sorted(ends)[:k] for ends in reached]
