"""
Generic quota search over edges, forest validation and k lightest paths.

Search is ordinary graph search in the universal out-cover of the host graph
where every vertex v may be visited at most q(v) times. Queue items are edges
(plus one sentinel per start slot) so the extraction rule decides which lift
is created next.
"""
import bisect
import heapq
import itertools
import logging
from collections import deque
from fractions import Fraction
from typing import Deque, Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from quota_trees.exceptions import QuotaSpecError
from quota_trees.models import (
    Discipline,
    ForestDiagnosis,
    ForestNode,
    ImmersedForest,
    KLightestPaths,
    Mode,
    MultiGraph,
    PathEntry,
    SearchConfig,
    SearchReport,
    Vector,
    WeightMap,
    as_dict,
)
from quota_trees.settings import settings

logger = logging.getLogger(settings.logger_name)

ZERO = Fraction(0)


class Pending(NamedTuple):
    """Queue item: an edge into target, or a root sentinel when edge_id is None."""

    key: Fraction
    rank: int
    counter: int
    target: int
    edge_id: Optional[int]
    parent: Optional[int]
    path_weight: Fraction
    slot: Optional[int] = None


class SearchQueue:
    """Queue of pending edges, subclasses fix the extraction rule."""

    def push(self, item: Pending) -> None:
        """
        Add an item.

        :param item: pending edge or sentinel.
        """
        raise NotImplementedError

    def pop(self) -> Pending:
        """
        Extract the next item.

        :return: pending edge or sentinel.
        """
        raise NotImplementedError

    def __len__(self) -> int:
        raise NotImplementedError


class FifoQueue(SearchQueue):
    """Breadth-first extraction."""

    def __init__(self) -> None:
        self._items: Deque[Pending] = deque()

    def push(self, item: Pending) -> None:  # noqa: D102
        self._items.append(item)

    def pop(self) -> Pending:  # noqa: D102
        return self._items.popleft()

    def __len__(self) -> int:
        return len(self._items)


class LifoQueue(SearchQueue):
    """Depth-first extraction."""

    def __init__(self) -> None:
        self._items: List[Pending] = []

    def push(self, item: Pending) -> None:  # noqa: D102
        self._items.append(item)

    def pop(self) -> Pending:  # noqa: D102
        return self._items.pop()

    def __len__(self) -> int:
        return len(self._items)


class PriorityQueue(SearchQueue):
    """Smallest (key, edge id, insertion counter) first."""

    def __init__(self) -> None:
        self._heap: List[Pending] = []

    def push(self, item: Pending) -> None:  # noqa: D102
        heapq.heappush(self._heap, item)

    def pop(self) -> Pending:  # noqa: D102
        return heapq.heappop(self._heap)

    def __len__(self) -> int:
        return len(self._heap)


class RandomQueue(SearchQueue):
    """
    Uniform extraction from the current contents.

    :param rng: seeded numpy generator owning the randomness of one search.
    """

    def __init__(self, rng: np.random.Generator) -> None:
        self._items: List[Pending] = []
        self._rng = rng

    def push(self, item: Pending) -> None:  # noqa: D102
        self._items.append(item)

    def pop(self) -> Pending:  # noqa: D102
        index = int(self._rng.integers(len(self._items)))
        self._items[index], self._items[-1] = self._items[-1], self._items[index]
        return self._items.pop()

    def __len__(self) -> int:
        return len(self._items)


def make_queue(config: SearchConfig, rng: Optional[np.random.Generator] = None) -> SearchQueue:  # noqa: E501
    """
    Build the queue for a discipline.

    :param config: search configuration.
    :param rng: generator for the random discipline, seeded from the config when omitted.
    :return: empty queue.
    """  # noqa: E501
    if config.discipline is Discipline.FIFO:
        return FifoQueue()
    if config.discipline is Discipline.LIFO:
        return LifoQueue()
    if config.discipline is Discipline.RANDOM:
        return RandomQueue(rng or np.random.default_rng(config.seed))
    return PriorityQueue()


def _admit(best: List[Fraction], key: Fraction, capacity: int) -> bool:
    """Keep the capacity smallest keys seen for a vertex, refuse worse ones."""
    if capacity <= 0:
        return False
    if len(best) >= capacity:
        if key > best[-1]:
            return False
        best.pop()
    bisect.insort(best, key)
    return True


def quota_search(  # noqa: WPS210, WPS231
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    config: Optional[SearchConfig] = None,
    weights: Optional[WeightMap] = None,
    rng: Optional[np.random.Generator] = None,
) -> SearchReport:
    """
    Run generic quota search.

    Exact mode creates every root first, in vertex and slot order. At-most
    mode queues the root sentinels with key 0 and lets them compete, so the
    number of roots is whatever the extraction order produces. An extracted
    edge whose target has no quota left is dropped; otherwise a new node is
    created and the outstar of its image is queued.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param config: discipline, mode and relaxation, FIFO exact when omitted.
    :param weights: edge weights, required by the weighted disciplines.
    :param rng: generator overriding the configured seed of the random discipline.
    :raises QuotaSpecError: when weights are missing or negative under relaxation.
    :return: SearchReport holding the forest and the residual quota.
    """  # noqa: E501
    config = config or SearchConfig()
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    if config.needs_weights and weights is None:
        raise QuotaSpecError(f"{config.discipline.value} discipline needs edge weights")
    if config.mode is Mode.EXACT and any(
        need < start for need, start in zip(quota, portfolio)
    ):
        raise QuotaSpecError("exact mode needs the quota to cover the portfolio")
    edge_weights = None if weights is None else weights.check_against(graph).weights
    if config.relaxation and edge_weights and min(edge_weights) < 0:
        raise QuotaSpecError("relaxation needs nonnegative edge weights")

    remaining = list(quota)
    queue = make_queue(config, rng)
    counter = itertools.count()
    nodes: List[ForestNode] = []
    root_slots: List[List[Optional[int]]] = [[None] * start for start in portfolio]
    best: List[List[Fraction]] = [[] for _ in range(graph.vertex_count)]

    def edge_key(edge_id: int, path_weight: Fraction) -> Fraction:
        if config.discipline is Discipline.MIN_PATH_WEIGHT:
            return path_weight
        if config.discipline is Discipline.MIN_WEIGHT_EDGE and edge_weights:
            return edge_weights[edge_id]
        return ZERO

    def offer(item: Pending) -> None:
        if config.relaxation and not _admit(
            best[item.target],
            item.key,
            quota[item.target],
        ):
            return
        queue.push(item)

    def use(item: Pending) -> None:
        node_id = len(nodes)
        nodes.append(
            ForestNode(
                node_id=node_id,
                image=item.target,
                parent=item.parent,
                parent_edge=item.edge_id,
            ),
        )
        remaining[item.target] -= 1
        if item.slot is not None:
            root_slots[item.target][item.slot] = node_id
        for edge_id in graph.outstar(item.target):
            dst = graph.edges[edge_id].dst
            if remaining[dst] == 0:
                continue
            path_weight = item.path_weight
            if edge_weights:
                path_weight += edge_weights[edge_id]
            offer(
                Pending(
                    key=edge_key(edge_id, path_weight),
                    rank=edge_id,
                    counter=next(counter),
                    target=dst,
                    edge_id=edge_id,
                    parent=node_id,
                    path_weight=path_weight,
                ),
            )

    for vertex in range(graph.vertex_count):
        for slot in range(portfolio[vertex]):
            sentinel = Pending(ZERO, -1, next(counter), vertex, None, None, ZERO, slot)
            if config.mode is Mode.AT_MOST:
                offer(sentinel)
                continue
            if config.relaxation:
                _admit(best[vertex], ZERO, quota[vertex])
            use(sentinel)

    while queue:
        item = queue.pop()
        if remaining[item.target] == 0:
            continue
        use(item)

    report = SearchReport(
        forest=ImmersedForest(
            nodes=tuple(nodes),
            root_slots=tuple(tuple(slot) for slot in root_slots),
        ),
        residual=tuple(remaining),
    )
    logger.debug(
        f"quota search {config.discipline.value}/{config.mode.value}: {len(nodes)} nodes, residual {as_dict(remaining)}",  # noqa: E501
    )
    return report


def _first_structural_problem(  # noqa: WPS231
    forest: ImmersedForest,
    graph: MultiGraph,
) -> Optional[ForestDiagnosis]:
    node_count = forest.node_count
    if len(forest.root_slots) != graph.vertex_count:
        return ForestDiagnosis(
            valid=False,
            violation="malformed",
            detail="root_slots must have one entry per vertex",
        )
    for index, node in enumerate(forest.nodes):
        problem = ""
        if node.node_id != index:
            problem = f"node at position {index} has id {node.node_id}"
        elif node.image >= graph.vertex_count:
            problem = f"node {index} maps outside the graph"
        elif (node.parent is None) != (node.parent_edge is None):
            problem = f"node {index} has only one of parent and parent_edge"
        elif node.parent is not None and not 0 <= node.parent < node_count:
            problem = f"node {index} has an unknown parent"
        elif node.parent_edge is not None and not 0 <= node.parent_edge < graph.edge_count:  # noqa: E501
            problem = f"node {index} uses an unknown edge"
        if problem:
            return ForestDiagnosis(valid=False, violation="malformed", detail=problem)
    return None


def _root_slot_problem(forest: ImmersedForest) -> Optional[ForestDiagnosis]:
    listed: Set[int] = set()
    for vertex, slot in enumerate(forest.root_slots):
        for node_id in slot:
            if node_id is None:
                continue
            if not 0 <= node_id < forest.node_count or node_id in listed:
                return ForestDiagnosis(
                    valid=False,
                    violation="root slot",
                    detail=f"slot entry {node_id} at vertex {vertex} is unknown or repeated",  # noqa: E501
                )
            node = forest.nodes[node_id]
            if node.parent is not None or node.image != vertex:
                return ForestDiagnosis(
                    valid=False,
                    violation="root slot",
                    detail=f"node {node_id} is not a root over vertex {vertex}",
                )
            listed.add(node_id)
    for node in forest.nodes:
        if node.parent is None and node.node_id not in listed:
            return ForestDiagnosis(
                valid=False,
                violation="root slot",
                detail=f"root {node.node_id} is missing from root_slots",
            )
    return None


def _has_cycle(forest: ImmersedForest) -> Optional[int]:
    settled: Set[int] = set()
    for start in range(forest.node_count):
        trail: List[int] = []
        on_trail: Set[int] = set()
        current: Optional[int] = start
        while current is not None and current not in settled:
            if current in on_trail:
                return start
            trail.append(current)
            on_trail.add(current)
            current = forest.nodes[current].parent
        settled.update(trail)
    return None


def validate_forest(  # noqa: WPS231
    forest: ImmersedForest,
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    mode: Mode = Mode.EXACT,
) -> ForestDiagnosis:
    """
    Check a forest against the host graph, the quota and the portfolio.

    Rules are checked in this order and the first broken one is reported:
    malformed, root slot, edge mismatch, cusp, cycle, portfolio,
    quota exceeded, quota not met.

    :param forest: forest to check.
    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param mode: exact or at-most portfolio semantics.
    :return: ForestDiagnosis.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    problem = _first_structural_problem(forest, graph) or _root_slot_problem(forest)
    if problem is not None:
        return problem

    used_edges: Set[Tuple[int, int]] = set()
    for node in forest.nodes:
        if node.parent is None or node.parent_edge is None:
            continue
        edge = graph.edges[node.parent_edge]
        parent = forest.nodes[node.parent]
        if edge.src != parent.image or edge.dst != node.image:
            return ForestDiagnosis(
                valid=False,
                violation="edge mismatch",
                detail=f"node {node.node_id} hangs on edge {edge.edge_id} with wrong endpoints",  # noqa: E501
            )
        if (node.parent, node.parent_edge) in used_edges:
            return ForestDiagnosis(
                valid=False,
                violation="cusp",
                detail=f"node {node.parent} uses edge {node.parent_edge} twice",
            )
        used_edges.add((node.parent, node.parent_edge))

    cyclic = _has_cycle(forest)
    if cyclic is not None:
        return ForestDiagnosis(
            valid=False,
            violation="cycle",
            detail=f"node {cyclic} reaches a cycle of parents",
        )

    for vertex, slot in enumerate(forest.root_slots):
        roots = sum(1 for root in slot if root is not None)
        if mode is Mode.EXACT:
            broken = len(slot) != portfolio[vertex] or roots != len(slot)
        else:
            broken = len(slot) > portfolio[vertex]
        if broken:
            return ForestDiagnosis(
                valid=False,
                violation="portfolio",
                detail=f"{roots} roots in {len(slot)} slots at vertex {vertex}, portfolio allows {portfolio[vertex]}",  # noqa: E501
            )

    counts = forest.preimage_counts(graph.vertex_count)
    for vertex, count in enumerate(counts):
        if count > quota[vertex]:
            return ForestDiagnosis(
                valid=False,
                violation="quota exceeded",
                detail=f"vertex {vertex} visited {count} times, quota {quota[vertex]}",
            )
    for vertex, count in enumerate(counts):
        if count < quota[vertex]:
            return ForestDiagnosis(
                valid=False,
                violation="quota not met",
                detail=f"vertex {vertex} visited {count} times, quota {quota[vertex]}",
            )
    return ForestDiagnosis(valid=True)


def at_most_to_exact(
    forest: ImmersedForest,
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
) -> ImmersedForest:
    """
    Turn an at-most forest into an exact one by cutting nodes off their parents.

    Missing roots over v are made from the non-root lifts of v with the
    largest node ids; they fill the unused slots first, in slot order.
    Quota attainment is unchanged.

    :param forest: valid at-most forest.
    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :raises QuotaSpecError: when q(v) < s(v) somewhere or lifts run out.
    :return: exact forest with the same nodes.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    short = [vertex for vertex in range(graph.vertex_count) if quota[vertex] < portfolio[vertex]]  # noqa: E501
    if short:
        raise QuotaSpecError(f"portfolio exceeds quota at vertices {short}")

    nodes = list(forest.nodes)
    slots = [list(slot) for slot in forest.root_slots]
    for vertex in range(graph.vertex_count):
        filled = [root for root in slots[vertex] if root is not None]
        missing = portfolio[vertex] - len(filled)
        if missing <= 0:
            continue
        lifts = [
            node.node_id
            for node in reversed(nodes)
            if node.image == vertex and node.parent is not None
        ]
        if len(lifts) < missing:
            raise QuotaSpecError(f"not enough lifts of vertex {vertex} to cut off")
        free = [index for index, root in enumerate(slots[vertex]) if root is None]
        for node_id in lifts[:missing]:
            nodes[node_id] = ForestNode(node_id=node_id, image=vertex)
            if free:
                slots[vertex][free.pop(0)] = node_id
            else:
                slots[vertex].append(node_id)
        logger.debug(f"detached {lifts[:missing]} to root them at vertex {vertex}")
    slots = [[root for root in slot if root is not None] for slot in slots]
    return ImmersedForest(
        nodes=tuple(nodes),
        root_slots=tuple(tuple(slot) for slot in slots),
    )


def children_of(forest: ImmersedForest) -> Dict[int, List[int]]:
    """
    Children of every node sorted by parent edge id.

    :param forest: forest to index.
    :return: node id to list of child node ids.
    """
    children: Dict[int, List[int]] = {node.node_id: [] for node in forest.nodes}
    for node in forest.nodes:
        if node.parent is not None:
            children[node.parent].append(node.node_id)
    for kids in children.values():
        kids.sort(key=lambda kid: (forest.nodes[kid].parent_edge, kid))
    return children


def canonicalize(forest: ImmersedForest) -> ImmersedForest:
    """
    Renumber nodes in canonical preorder.

    Trees come in root slot order, vertex by vertex; children are visited by
    increasing parent edge id. Equal forests have equal canonical forms.

    :param forest: forest to renumber.
    :return: renumbered forest.
    """
    children = children_of(forest)
    order: List[int] = []
    for slot in forest.root_slots:
        for root in slot:
            if root is None:
                continue
            stack = [root]
            while stack:
                current = stack.pop()
                order.append(current)
                stack.extend(reversed(children[current]))
    renumber = {old: new for new, old in enumerate(order)}
    nodes = []
    for old in order:
        node = forest.nodes[old]
        nodes.append(
            ForestNode(
                node_id=renumber[old],
                image=node.image,
                parent=None if node.parent is None else renumber[node.parent],
                parent_edge=node.parent_edge,
            ),
        )
    return ImmersedForest(
        nodes=tuple(nodes),
        root_slots=tuple(
            tuple(None if root is None else renumber[root] for root in slot)
            for slot in forest.root_slots
        ),
    )


CanonicalKey = Tuple[
    Tuple[Tuple[int, int, int], ...],
    Tuple[Tuple[Optional[int], ...], ...],
]


def canonical_key(forest: ImmersedForest) -> CanonicalKey:
    """
    Hashable canonical serialization of a forest.

    :param forest: forest to serialize.
    :return: tuple that is equal for equal forests.
    """
    canonical = canonicalize(forest)
    nodes = tuple(
        (
            node.image,
            -1 if node.parent is None else node.parent,
            -1 if node.parent_edge is None else node.parent_edge,
        )
        for node in canonical.nodes
    )
    return nodes, canonical.root_slots


def forest_inventory(forest: ImmersedForest, graph: MultiGraph) -> Vector:
    """
    Number of tree edges over every host edge.

    :param forest: forest to count.
    :param graph: host graph.
    :return: per-edge preimage counts.
    """
    counts = [0] * graph.edge_count
    for node in forest.nodes:
        if node.parent_edge is not None:
            counts[node.parent_edge] += 1
    return tuple(counts)


def forest_weight(forest: ImmersedForest, weights: WeightMap) -> Fraction:
    """
    Sum of the weights of the tree edges.

    :param forest: forest to weigh.
    :param weights: edge weights.
    :return: exact total weight.
    """
    return sum(
        (
            weights.weights[node.parent_edge]
            for node in forest.nodes
            if node.parent_edge is not None
        ),
        ZERO,
    )


def root_paths(forest: ImmersedForest, weights: WeightMap) -> List[PathEntry]:
    """
    Root-to-node path of every node with its weight.

    :param forest: acyclic forest to walk.
    :param weights: edge weights.
    :return: one PathEntry per node, indexed by node id.
    """
    entries: Dict[int, PathEntry] = {}

    def entry_of(node_id: int) -> PathEntry:
        chain: List[int] = []
        current = node_id
        while current not in entries:
            node = forest.nodes[current]
            if node.parent is None:
                entries[current] = PathEntry(weight=ZERO)
                break
            chain.append(current)
            current = node.parent
        for link_id in reversed(chain):
            link = forest.nodes[link_id]
            base = entries[link.parent]  # type: ignore
            edge_id = link.parent_edge or 0
            entries[link_id] = PathEntry(
                weight=base.weight + weights.weights[edge_id],
                edges=base.edges + (edge_id,),
            )
        return entries[node_id]

    return [entry_of(node.node_id) for node in forest.nodes]


def k_lightest_paths(
    graph: MultiGraph,
    portfolio: Sequence[int],
    k: int,
    weights: WeightMap,
) -> KLightestPaths:
    """
    The k lightest paths from the start vertices to every vertex.

    Paths need not be simple. This is quota search with quota k everywhere,
    path-weight keys and relaxation; every start vertex contributes its empty
    path once.

    :param graph: host graph.
    :param portfolio: start vertices, any positive entry marks a source.
    :param k: number of paths wanted per vertex.
    :param weights: nonnegative edge weights.
    :raises QuotaSpecError: for k < 1 or a negative weight.
    :return: KLightestPaths with paths sorted by weight.
    """
    portfolio = graph.check_vector(portfolio, "portfolio")
    weights.check_against(graph)
    if k < 1:
        raise QuotaSpecError("k must be positive")
    negative = [edge_id for edge_id, weight in enumerate(weights.weights) if weight < 0]
    if negative:
        raise QuotaSpecError(f"negative weight on edges {negative}")

    sources = tuple(1 if entry > 0 else 0 for entry in portfolio)
    config = SearchConfig(
        discipline=Discipline.MIN_PATH_WEIGHT,
        mode=Mode.AT_MOST,
        relaxation=True,
    )
    report = quota_search(graph, (k,) * graph.vertex_count, sources, config, weights)
    entries = root_paths(report.forest, weights)

    per_vertex: List[List[PathEntry]] = [[] for _ in range(graph.vertex_count)]
    for node in report.forest.nodes:
        per_vertex[node.image].append(entries[node.node_id])
    logger.info(f"{k} lightest paths: {report.forest.node_count} paths found")
    return KLightestPaths(
        k=k,
        paths=tuple(
            tuple(sorted(paths, key=lambda entry: entry.weight)) for paths in per_vertex
        ),
    )
