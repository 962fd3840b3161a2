"""
Exactly uniform sampling of quota forests.

A FIFO traversal of the out-cover decides every dequeued edge with a coin
whose bias is the share of completions that use the edge. Counts of
completions are quota symbols, so the bias is a ratio of two symbols. The
fast path keeps the inverse of the active matrix and turns each ratio into
one matrix-vector product.
"""
import logging
from collections import deque
from fractions import Fraction
from typing import Deque, List, Optional, Sequence, Tuple, Union

import anyio
import anyio.to_thread
import numpy as np

from quota_trees.counting import QuotaSymbolEvaluator, exact_arguments
from quota_trees.exceptions import InfeasibleError, SamplingError
from quota_trees.feasibility import achievable
from quota_trees.linalg import inverse
from quota_trees.models import ForestNode, ImmersedForest, MultiGraph, Vector
from quota_trees.settings import settings

logger = logging.getLogger(settings.logger_name)

CHUNK_BITS = 64

Seed = Union[int, np.random.SeedSequence]


def exact_coin(rng: np.random.Generator, probability: Fraction) -> bool:
    """
    Flip a coin with an exact rational bias.

    The uniform draw is refined 64 bits at a time until it is known to fall
    on one side of the bias, so the outcome is exact and a draw needs two
    chunks only with probability 2^-64.

    :param rng: generator owning the bit stream.
    :param probability: bias in [0, 1].
    :return: True with the given probability.
    """
    if probability <= 0:
        return False
    if probability >= 1:
        return True
    numerator, denominator = probability.numerator, probability.denominator
    drawn = 0
    scale = 1
    while True:  # noqa: WPS457
        drawn = (drawn << CHUNK_BITS) | int(rng.bit_generator.random_raw())
        scale <<= CHUNK_BITS
        # drawn/scale <= U < (drawn + 1)/scale
        if (drawn + 1) * denominator <= numerator * scale:
            return True
        if drawn * denominator >= numerator * scale:
            return False


class ExtensionCounter:
    """
    Completion counts of a partial FIFO search.

    Holds the symbol arguments (a, b) = (qM - seen, q - s - used). With
    fast enabled it also keeps the active matrix diag(a) - M diag(b) and its
    exact inverse, updated by Sherman-Morrison after every decision; a full
    rebuild happens when the set of indices with a_i > 0 changes.

    :param graph: host graph.
    :param a: initial first argument.
    :param b: initial second argument.
    :param fast: use the rank-one update.
    """

    def __init__(self, graph: MultiGraph, a: Vector, b: Vector, fast: bool = True) -> None:  # noqa: E501
        self.evaluator = QuotaSymbolEvaluator(graph)
        self.a = list(a)
        self.b = list(b)
        self.fast = fast
        self.active: List[int] = []
        self.position: List[Optional[int]] = []
        self.inverse: Optional[List[List[Fraction]]] = None
        self.rebuilds = 0
        if fast:
            self._rebuild()

    def count(self) -> int:
        """
        Number of completions of the current state.

        :return: quota symbol of (a, b).
        """
        return self.evaluator.symbol(self.a, self.b)

    def accept_probability(self, vertex: int) -> Fraction:
        """
        Share of completions that use the next dequeued edge into vertex.

        :param vertex: target of the edge.
        :raises SamplingError: when the current state has no completion or the ratio leaves [0, 1].
        :return: exact probability.
        """  # noqa: E501
        if self.b[vertex] == 0:
            return Fraction(0)
        after_a = self._shifted(self.a, vertex)
        after_b = self._shifted(self.b, vertex)
        if not self.evaluator.in_domain(after_a, after_b):
            return Fraction(0)
        if self.fast and self.inverse is not None and self.a[vertex] >= 2:
            # an invertible active matrix inside the domain means a nonzero count
            if not self.evaluator.in_domain(tuple(self.a), tuple(self.b)):
                raise SamplingError(f"no completion left at state a={self.a}, b={self.b}")  # noqa: E501
            solved = self._solve(self._column_change(vertex, accepted=True))
            ratio = (1 + solved[self._index(vertex)]) * Fraction(
                self.b[vertex],
                self.a[vertex] - 1,
            )
        else:
            total = self.count()
            if total == 0:
                raise SamplingError(f"no completion left at state a={self.a}, b={self.b}")  # noqa: E501
            ratio = Fraction(self.evaluator.symbol(after_a, after_b), total)
        if not 0 <= ratio <= 1:
            raise SamplingError(f"acceptance ratio {ratio} outside [0, 1]")
        return ratio

    def apply(self, vertex: int, accepted: bool) -> None:
        """
        Record a decision on an edge into vertex.

        :param vertex: target of the edge.
        :param accepted: whether the edge created a node.
        """
        change = self._column_change(vertex, accepted) if self.fast else []
        self.a = self._shifted(self.a, vertex)
        if accepted:
            self.b = self._shifted(self.b, vertex)
        if not self.fast:
            return
        if self.a[vertex] == 0 or self.inverse is None:
            self._rebuild()
            return
        solved = self._solve(change)
        pivot = self._index(vertex)
        denominator = 1 + solved[pivot]
        if denominator == 0:
            self._rebuild()
            return
        lead = list(self.inverse[pivot])
        for row, factor in zip(self.inverse, solved):
            if factor:
                scale = factor / denominator
                for column, entry in enumerate(lead):
                    row[column] -= scale * entry

    @staticmethod
    def _shifted(vector: Sequence[int], vertex: int) -> Vector:
        return tuple(entry - (index == vertex) for index, entry in enumerate(vector))

    def _index(self, vertex: int) -> int:
        index = self.position[vertex]
        assert index is not None, f"vertex {vertex} is not active"  # noqa: S101
        return index

    def _column_change(self, vertex: int, accepted: bool) -> List[Fraction]:
        """Change of column vertex: a_v drops by one, and b_v too on accept."""
        adjacency = self.evaluator.adjacency
        return [
            Fraction(
                (adjacency[row][vertex] if accepted else 0) - (row == vertex),
            )
            for row in self.active
        ]

    def _solve(self, vector: Sequence[Fraction]) -> List[Fraction]:
        assert self.inverse is not None  # noqa: S101
        return [
            sum((entry * value for entry, value in zip(row, vector)), Fraction(0))
            for row in self.inverse
        ]

    def _rebuild(self) -> None:
        self.rebuilds += 1
        self.active = [index for index, entry in enumerate(self.a) if entry > 0]
        self.position = [None] * len(self.a)
        for index, vertex in enumerate(self.active):
            self.position[vertex] = index
        matrix = self.evaluator.matrix(tuple(self.a), tuple(self.b), self.active)
        self.inverse = inverse(matrix)


def sample_forest(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    seed: Seed,
    fast: bool = True,
) -> ImmersedForest:
    """
    Draw one exact quota forest uniformly at random.

    Roots are created first in vertex and slot order, then edges are
    dequeued in FIFO order and each one is accepted with probability
    N(after use) / N(now).

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param seed: integer seed or spawned seed sequence.
    :param fast: use the rank-one update instead of full recomputation.
    :raises InfeasibleError: when no exact forest exists.
    :raises SamplingError: when the completion counts become inconsistent.
    :return: the sampled forest.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    if not achievable(graph, quota, portfolio):
        raise InfeasibleError(f"no exact forest for quota {quota}, portfolio {portfolio}")  # noqa: E501
    rng = np.random.default_rng(seed)
    counter = ExtensionCounter(graph, *exact_arguments(graph, quota, portfolio), fast=fast)  # noqa: E501

    nodes: List[ForestNode] = []
    root_slots: List[List[Optional[int]]] = [[] for _ in range(graph.vertex_count)]
    pending: Deque[Tuple[int, int]] = deque()

    def create(image: int, parent: Optional[int], edge_id: Optional[int]) -> int:
        node_id = len(nodes)
        nodes.append(
            ForestNode(node_id=node_id, image=image, parent=parent, parent_edge=edge_id),
        )
        pending.extend((node_id, out_edge) for out_edge in graph.outstar(image))
        return node_id

    for vertex in range(graph.vertex_count):
        for _ in range(portfolio[vertex]):
            root_slots[vertex].append(create(vertex, None, None))

    while pending:
        parent, edge_id = pending.popleft()
        target = graph.edges[edge_id].dst
        accepted = exact_coin(rng, counter.accept_probability(target))
        counter.apply(target, accepted)
        if accepted:
            create(target, parent, edge_id)

    if any(counter.b):
        raise SamplingError(f"sampling ended with quota left {counter.b}")
    logger.debug(
        f"sampled forest with {len(nodes)} nodes, {counter.rebuilds} matrix rebuilds",
    )
    return ImmersedForest(
        nodes=tuple(nodes),
        root_slots=tuple(tuple(slot) for slot in root_slots),
    )


async def run_sample_batch(  # noqa: WPS211
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    count: int,
    seed: int,
    fast: bool = True,
) -> List[ImmersedForest]:
    """
    Draw samples concurrently on worker threads, one seed stream each.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param count: number of samples.
    :param seed: root seed split with SeedSequence.spawn.
    :param fast: use the rank-one update.
    :return: samples in stream order.
    """
    streams = np.random.SeedSequence(seed).spawn(count)
    results: List[Optional[ImmersedForest]] = [None] * count
    limiter = anyio.CapacityLimiter(settings.sample_workers)

    async def draw(index: int) -> None:
        results[index] = await anyio.to_thread.run_sync(
            sample_forest,
            graph,
            quota,
            portfolio,
            streams[index],
            fast,
            limiter=limiter,
        )

    async with anyio.create_task_group() as tg:
        for index in range(count):
            tg.start_soon(draw, index)

    return [forest for forest in results if forest is not None]


def sample_batch(  # noqa: WPS211
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    count: int,
    seed: int,
    fast: bool = True,
) -> List[ImmersedForest]:
    """
    Draw count independent uniform forests, run through anyio backend asyncio.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param count: number of samples, 0 gives an empty list.
    :param seed: root seed.
    :param fast: use the rank-one update.
    :raises InfeasibleError: when no exact forest exists.
    :return: samples in stream order, identical for identical seeds.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    if not achievable(graph, quota, portfolio):
        raise InfeasibleError(f"no exact forest for quota {quota}, portfolio {portfolio}")  # noqa: E501
    if count <= 0:
        return []
    logger.info(f"sampling {count} forests with {settings.sample_workers} workers")
    return anyio.run(  # type: ignore
        run_sample_batch,
        graph,
        quota,
        portfolio,
        count,
        seed,
        fast,
        backend="asyncio",
    )
