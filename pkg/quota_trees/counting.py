"""
Exact counting of quota forests through the quota symbol.

The quota symbol of (a, b) over a graph with adjacency matrix M is

    det(diag(a) - M diag(b)) * prod C(a_i, b_i) / prod a_i

where indices with a_i = 0 drop their factor and their row and column.
Forest counts, at-most counts and counts of completions of a partial search
are all values of the symbol.
"""
import enum
import itertools
import logging
from fractions import Fraction
from math import comb, prod
from typing import Dict, List, Optional, Sequence, Tuple

from quota_trees.exceptions import QuotaSpecError
from quota_trees.graph import adjacency_matrix, in_arrows
from quota_trees.linalg import bareiss_determinant, determinant
from quota_trees.models import Mode, MultiGraph, QuotaSymbolArgs, Vector, to_fraction
from quota_trees.oracle import enumerate_forests
from quota_trees.settings import settings

logger = logging.getLogger(settings.logger_name)


class CountMethod(str, enum.Enum):
    """How a forest count is computed."""

    DET = "det"
    REC = "rec"
    ORACLE = "oracle"


class QuotaSymbolEvaluator:
    """
    Quota symbol over one fixed graph.

    The recurrence memo is private to the instance; use one evaluator per thread.

    :param graph: graph providing the adjacency matrix.
    """

    def __init__(self, graph: MultiGraph) -> None:
        self.graph = graph
        self.adjacency = adjacency_matrix(graph)
        self._memo: Dict[Tuple[Vector, Vector], int] = {}

    def arrows(self, b: Sequence[int]) -> Vector:
        """
        Row vector b times the adjacency matrix.

        :param b: nonnegative vector.
        :return: bM.
        """
        return in_arrows(self.graph, b)

    def in_domain(self, a: Vector, b: Vector) -> bool:
        """
        Whether 0 <= b <= a and a >= bM, outside of which the symbol is 0.

        :param a: first argument.
        :param b: second argument.
        :return: True inside the counting domain.
        """
        if any(low < 0 or low > high for high, low in zip(a, b)):
            return False
        return all(high >= arrow for high, arrow in zip(a, self.arrows(b)))

    def matrix(self, a: Vector, b: Vector, active: Sequence[int]) -> List[List[int]]:
        """
        diag(a) - M diag(b) restricted to the active indices.

        :param a: first argument.
        :param b: second argument.
        :param active: indices kept, the ones with a_i > 0.
        :return: integer matrix.
        """
        return [
            [
                (a[row] if row == column else 0) - self.adjacency[row][column] * b[column]  # noqa: E501
                for column in active
            ]
            for row in active
        ]

    def symbol(self, a: Sequence[int], b: Sequence[int]) -> int:
        """
        Determinant form of the quota symbol.

        :param a: first argument.
        :param b: second argument.
        :return: nonnegative integer value.
        """
        a, b = tuple(a), tuple(b)
        if not self.in_domain(a, b):
            return 0
        binomials = prod(comb(high, low) for high, low in zip(a, b))
        if binomials == 0:
            return 0
        active = [index for index, entry in enumerate(a) if entry > 0]
        numerator = bareiss_determinant(self.matrix(a, b, active)) * binomials
        value, remainder = divmod(numerator, prod(a[index] for index in active))
        assert remainder == 0 and value >= 0, f"quota symbol of {a}, {b} is not a count"  # noqa: E501, S101
        return value

    def recurrence(self, a: Sequence[int], b: Sequence[int]) -> int:
        """
        Recursive form of the quota symbol, memoized on (a, b).

        :param a: first argument.
        :param b: second argument.
        :return: nonnegative integer value.
        """
        key = (tuple(a), tuple(b))
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        value = self._expand(*key)
        self._memo[key] = value
        return value

    def _expand(self, a: Vector, b: Vector) -> int:
        if not self.in_domain(a, b):
            return 0
        if not any(b):
            return 1
        arrows = self.arrows(b)
        if a == arrows:
            return 0
        split = next(index for index, entry in enumerate(a) if entry > arrows[index])
        smaller = tuple(entry - (index == split) for index, entry in enumerate(a))
        fewer = tuple(entry - (index == split) for index, entry in enumerate(b))
        return self.recurrence(smaller, fewer) + self.recurrence(smaller, b)


def quota_symbol(args: QuotaSymbolArgs) -> int:
    """
    Quota symbol by determinant.

    :param args: arguments a, b and the graph.
    :return: nonnegative integer value.
    """
    return QuotaSymbolEvaluator(args.graph).symbol(args.a, args.b)


def quota_symbol_rec(args: QuotaSymbolArgs) -> int:
    """
    Quota symbol by the recurrence.

    :param args: arguments a, b and the graph.
    :return: nonnegative integer value.
    """
    return QuotaSymbolEvaluator(args.graph).recurrence(args.a, args.b)


def exact_arguments(graph: MultiGraph, quota: Vector, portfolio: Vector) -> Tuple[Vector, Vector]:  # noqa: E501
    """
    Symbol arguments counting forests with start portfolio exactly s.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :return: (qM, q - s).
    """
    arrows = in_arrows(graph, quota)
    return arrows, tuple(need - start for need, start in zip(quota, portfolio))


def at_most_arguments(graph: MultiGraph, quota: Vector, portfolio: Vector) -> Tuple[Vector, Vector]:  # noqa: E501
    """
    Symbol arguments counting forests with start portfolio at most s.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :return: (qM + s, q).
    """
    arrows = in_arrows(graph, quota)
    return tuple(arrow + start for arrow, start in zip(arrows, portfolio)), quota


def count_forests_exact(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
) -> int:
    """
    Number of quota forests using the whole portfolio.

    Roots are distinguishable: a forest is an ordered tuple of trees, one per
    root slot.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :return: exact count.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    if any(need < start for need, start in zip(quota, portfolio)):
        return 0
    return QuotaSymbolEvaluator(graph).symbol(*exact_arguments(graph, quota, portfolio))


def count_forests_at_most(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
) -> int:
    """
    Number of quota forests whose roots use any sub-multiset of the portfolio.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :return: exact count.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    return QuotaSymbolEvaluator(graph).symbol(
        *at_most_arguments(graph, quota, portfolio),
    )


def extension_arguments(  # noqa: WPS211
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    seen: Sequence[int],
    used: Sequence[int],
) -> Tuple[Vector, Vector]:
    """
    Symbol arguments counting completions of a partial exact search.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param seen: per-vertex number of dequeued edges so far.
    :param used: per-vertex number of dequeued edges that created a node.
    :raises QuotaSpecError: unless used <= seen <= qM and used <= q - s.
    :return: (qM - seen, q - s - used).
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    seen = graph.check_vector(seen, "seen")
    used = graph.check_vector(used, "used")
    arrows = in_arrows(graph, quota)
    for vertex in range(graph.vertex_count):
        if used[vertex] > seen[vertex]:
            raise QuotaSpecError(f"used exceeds seen at vertex {vertex}")
        if seen[vertex] > arrows[vertex]:
            raise QuotaSpecError(f"seen exceeds the available arrows at vertex {vertex}")
        if used[vertex] > quota[vertex] - portfolio[vertex]:
            raise QuotaSpecError(f"used exceeds the non-root quota at vertex {vertex}")
    return (
        tuple(arrow - count for arrow, count in zip(arrows, seen)),
        tuple(
            need - start - count
            for need, start, count in zip(quota, portfolio, used)
        ),
    )


def count_extensions(  # noqa: WPS211
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    seen: Sequence[int],
    used: Sequence[int],
) -> int:
    """
    Number of exact forests extending a partial FIFO search state.

    The forests counted contain every used edge and none of the edges that
    were seen and rejected.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param seen: per-vertex number of dequeued edges so far.
    :param used: per-vertex number of dequeued edges that created a node.
    :return: exact count.
    """
    arguments = extension_arguments(graph, quota, portfolio, seen, used)
    return QuotaSymbolEvaluator(graph).symbol(*arguments)


def matrix_forest_det(
    graph: MultiGraph,
    root_weights: Sequence[object],
    edge_weights: Optional[Sequence[object]] = None,
) -> Fraction:
    """
    Weighted sum over spanning forests, as one determinant.

    Evaluates det(diag(s) + diag(In) - W), where W sums edge weights between
    distinct vertices and In holds its column sums. Each forest contributes
    the product of its root weights and edge weights.

    :param graph: host graph.
    :param root_weights: weight s_v of v being a root.
    :param edge_weights: weight of every edge, 1 each when omitted.
    :raises QuotaSpecError: on length mismatch.
    :return: exact weighted forest sum.
    """
    if len(root_weights) != graph.vertex_count:
        raise QuotaSpecError("one root weight per vertex is needed")
    if edge_weights is not None and len(edge_weights) != graph.edge_count:
        raise QuotaSpecError("one edge weight per edge is needed")
    roots = [to_fraction(weight) for weight in root_weights]
    if edge_weights is None:
        scale = [Fraction(1)] * graph.edge_count
    else:
        scale = [to_fraction(weight) for weight in edge_weights]
    size = graph.vertex_count
    laplacian = [[Fraction(0)] * size for _ in range(size)]
    for edge in graph.edges:
        if edge.src == edge.dst:
            continue
        weight = scale[edge.edge_id]
        laplacian[edge.src][edge.dst] -= weight
        laplacian[edge.dst][edge.dst] += weight
    for vertex in range(size):
        laplacian[vertex][vertex] += roots[vertex]
    return determinant(laplacian)


def count_forests(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    mode: Mode = Mode.EXACT,
    method: CountMethod = CountMethod.DET,
) -> int:
    """
    Count forests with a chosen method.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param mode: exact or at-most portfolio semantics.
    :param method: determinant, recurrence or brute-force enumeration.
    :return: exact count.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    if method is CountMethod.ORACLE:
        return len(enumerate_forests(graph, quota, portfolio, mode))
    if method is CountMethod.DET:
        if mode is Mode.EXACT:
            return count_forests_exact(graph, quota, portfolio)
        return count_forests_at_most(graph, quota, portfolio)
    if mode is Mode.EXACT:
        if any(need < start for need, start in zip(quota, portfolio)):
            return 0
        arguments = exact_arguments(graph, quota, portfolio)
    else:
        arguments = at_most_arguments(graph, quota, portfolio)
    count = QuotaSymbolEvaluator(graph).recurrence(*arguments)
    logger.debug(f"recurrence count {count} for quota {quota}, portfolio {portfolio}")
    return count


def diagonal_count(
    graph: MultiGraph,
    portfolio: Sequence[int],
    total: int,
    mode: Mode = Mode.EXACT,
) -> int:
    """
    Sum of forest counts over every quota vector with the given total.

    On K2° with one root this sums a Narayana diagonal to a Catalan number,
    matching the single-loop-pair rose it covers.

    :param graph: host graph.
    :param portfolio: per-vertex start portfolio.
    :param total: the common value of sum(q).
    :param mode: exact or at-most portfolio semantics.
    :raises QuotaSpecError: for a negative total.
    :return: exact sum of counts.
    """
    portfolio = graph.check_vector(portfolio, "portfolio")
    if total < 0:
        raise QuotaSpecError("total quota must be nonnegative")
    count = 0
    for quota in itertools.product(range(total + 1), repeat=graph.vertex_count):
        if sum(quota) == total:
            count += count_forests(graph, quota, portfolio, mode)
    return count
