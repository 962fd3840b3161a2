"""Connectivity and enough-arrows conditions for quota forests."""
import logging
from typing import Sequence, Set, Tuple

import networkx as nx

from quota_trees.graph import in_arrows, to_networkx
from quota_trees.models import FeasibilityReport, Mode, MultiGraph, Vector
from quota_trees.settings import settings

logger = logging.getLogger(settings.logger_name)


def _reachable_support(graph: MultiGraph, quota: Vector, portfolio: Vector) -> Set[int]:
    support = [vertex for vertex, entry in enumerate(quota) if entry > 0]
    # a start vertex with zero quota cannot carry a root
    sources = [vertex for vertex in support if portfolio[vertex] > 0]
    induced = to_networkx(graph, vertices=support)
    reached: Set[int] = set(sources)
    for source in sources:
        reached |= nx.descendants(induced, source)
    return reached


def is_connected_support(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
) -> Tuple[bool, Tuple[int, ...]]:
    """
    Check that every vertex with positive quota is reachable from a start.

    Paths run inside the subgraph induced by the vertices with positive quota.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :return: verdict and the sorted unreachable positive-quota vertices.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    reached = _reachable_support(graph, quota, portfolio)
    unreachable = tuple(
        vertex
        for vertex, entry in enumerate(quota)
        if entry > 0 and vertex not in reached
    )
    return not unreachable, unreachable


def enough_arrows_violations(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
) -> Tuple[int, ...]:
    """
    Vertices w where s(w) + In(w) < q(w).

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :return: sorted violating vertices, empty when the condition holds.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    arrows = in_arrows(graph, quota)
    return tuple(
        vertex
        for vertex in range(graph.vertex_count)
        if portfolio[vertex] + arrows[vertex] < quota[vertex]
    )


def achievable(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    mode: Mode = Mode.EXACT,
) -> bool:
    """
    Decide whether a quota forest exists.

    At-most forests exist exactly when the support is connected and there are
    enough arrows; exact forests additionally need q >= s.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param mode: exact or at-most portfolio semantics.
    :return: True when a forest exists.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    if mode is Mode.EXACT and any(
        need < start for need, start in zip(quota, portfolio)
    ):
        return False
    connected, _ = is_connected_support(graph, quota, portfolio)
    return connected and not enough_arrows_violations(graph, quota, portfolio)


def feasibility_report(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
) -> FeasibilityReport:
    """
    Collect every feasibility condition in one report.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :return: FeasibilityReport.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    connected, unreachable = is_connected_support(graph, quota, portfolio)
    violations = enough_arrows_violations(graph, quota, portfolio)
    exceeding = tuple(
        vertex
        for vertex in range(graph.vertex_count)
        if quota[vertex] < portfolio[vertex]
    )
    at_most = connected and not violations
    logger.debug(
        f"feasibility: connected={connected} violations={violations} exceeding={exceeding}",  # noqa: E501
    )
    return FeasibilityReport(
        connected=connected,
        unreachable=unreachable,
        enough_arrows_violations=violations,
        portfolio_exceeds_quota=exceeding,
        achievable_exact=at_most and not exceeding,
        achievable_at_most=at_most,
    )
