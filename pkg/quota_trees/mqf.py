"""
Minimum-weight quota forests through inventories.

An inventory x counts how often every edge is used. Inventories of exact
quota forests are the integer points satisfying three constraints:

* edge: 0 <= x_e <= c_e q(src(e)),
* node: the x entering v sum to q(v) - s(v),
* subset: edges inside any vertex set S carry at most sum_S q - 1.

The minimum is found like an optimum branching: pick the cheapest incoming
edge copies per vertex, contract a cluster that breaks the subset
constraint into a single vertex of quota 1, solve the smaller instance and
expand the answer back.
"""
import logging
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx

from quota_trees.exceptions import InfeasibleError, InvalidInventoryError, QuotaSpecError
from quota_trees.feasibility import achievable
from quota_trees.graph import from_pairs, to_networkx
from quota_trees.models import (
    Contraction,
    ForestNode,
    ImmersedForest,
    Inventory,
    InventoryCheck,
    MqfResult,
    MultiGraph,
    Vector,
    WeightMap,
)
from quota_trees.settings import settings

logger = logging.getLogger(settings.logger_name)


class _Level(NamedTuple):
    """One instance of the contraction loop and how it maps to the input."""

    graph: MultiGraph
    quota: Vector
    portfolio: Vector
    weights: Tuple[Fraction, ...]
    copies: Vector
    origin: Tuple[int, ...]
    members: Tuple[Tuple[int, ...], ...]


class _Step(NamedTuple):
    """What is needed to expand a contracted solution back to its level."""

    level: _Level
    greedy: Tuple[int, ...]
    internal: Tuple[int, ...]
    heaviest: Dict[int, int]
    parent_edge: Tuple[int, ...]


def _node_problem(graph: MultiGraph, quota: Vector, portfolio: Vector, usage: Vector) -> Optional[int]:  # noqa: E501
    incoming = [0] * graph.vertex_count
    for edge in graph.edges:
        incoming[edge.dst] += usage[edge.edge_id]
    return next(
        (
            vertex
            for vertex in range(graph.vertex_count)
            if incoming[vertex] != quota[vertex] - portfolio[vertex]
        ),
        None,
    )


def violating_subset(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    inventory: Inventory,
) -> Optional[Tuple[int, ...]]:
    """
    Find a vertex set whose internal edges carry all of its quota.

    Candidates are the source components of the strongly connected
    component graph of G[x] on the positive-quota vertices that hold no start
    vertex. Singletons come first, then the component with the smallest
    vertex.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param inventory: inventory satisfying the node constraint.
    :raises QuotaSpecError: when the node constraint does not hold.
    :return: sorted violating vertex set, or None.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    if len(inventory.x) != graph.edge_count:
        raise QuotaSpecError("inventory must have one entry per edge")
    broken = _node_problem(graph, quota, portfolio, inventory.x)
    if broken is not None:
        raise QuotaSpecError(f"node constraint fails at vertex {broken}")

    support = [vertex for vertex, entry in enumerate(quota) if entry > 0]
    used = nx.DiGraph(to_networkx(graph, multiplicity=inventory.x, vertices=support))
    condensed = nx.condensation(used)
    candidates: List[Tuple[int, ...]] = []
    for component in condensed.nodes:
        if condensed.in_degree(component) > 0:
            continue
        members = tuple(sorted(condensed.nodes[component]["members"]))
        if any(portfolio[vertex] > 0 for vertex in members):
            continue
        inside = set(members)
        internal = sum(
            inventory.x[edge.edge_id]
            for edge in graph.edges
            if edge.src in inside and edge.dst in inside
        )
        if internal >= sum(quota[vertex] for vertex in members):
            candidates.append(members)
    if not candidates:
        return None
    return min(candidates, key=lambda members: (len(members) > 1, members[0]))


def check_inventory(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    inventory: Inventory,
) -> InventoryCheck:
    """
    Check the edge, node and subset constraints, in this order.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param inventory: candidate inventory.
    :raises QuotaSpecError: when the inventory length does not match the graph.
    :return: InventoryCheck naming the first broken constraint.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    if len(inventory.x) != graph.edge_count:
        raise QuotaSpecError("inventory must have one entry per edge")
    for edge in graph.edges:
        if inventory.x[edge.edge_id] > inventory.c[edge.edge_id] * quota[edge.src]:
            return InventoryCheck(ok=False, constraint="edge", edge=edge.edge_id)
    vertex = _node_problem(graph, quota, portfolio, inventory.x)
    if vertex is not None:
        return InventoryCheck(ok=False, constraint="node", vertex=vertex)
    subset = violating_subset(graph, quota, portfolio, inventory)
    if subset is not None:
        return InventoryCheck(ok=False, constraint="subset", subset=subset)
    return InventoryCheck(ok=True)


def greedy_inventory(
    graph: MultiGraph,
    quota: Vector,
    portfolio: Vector,
    weights: Sequence[Fraction],
    copies: Vector,
) -> Tuple[int, ...]:
    """
    Cheapest q(v) - s(v) incoming edge copies for every vertex.

    Edge e offers at most c_e q(src(e)) copies; equal weights go to the
    smaller edge id.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param weights: per-edge weights.
    :param copies: per-edge copy counts.
    :raises InfeasibleError: when a vertex cannot get enough copies.
    :return: usage count per edge.
    """
    usage = [0] * graph.edge_count
    for vertex in range(graph.vertex_count):
        wanted = quota[vertex] - portfolio[vertex]
        for edge_id in sorted(graph.instar(vertex), key=lambda edge_id: (weights[edge_id], edge_id)):  # noqa: E501
            if wanted <= 0:
                break
            cap = copies[edge_id] * quota[graph.edges[edge_id].src]
            taken = min(cap, wanted)
            usage[edge_id] = taken
            wanted -= taken
        if wanted > 0:
            raise InfeasibleError(f"vertex {vertex} lacks {wanted} incoming edge copies")
    return tuple(usage)


def euler_circuit(graph: MultiGraph, multiplicity: Sequence[int]) -> Optional[Tuple[int, ...]]:  # noqa: E501
    """
    Directed Euler circuit of the multigraph with x_e copies of every edge.

    Vertices without edges are ignored. The circuit starts at the source of
    the smallest used edge id.

    :param graph: host graph.
    :param multiplicity: copies of every edge.
    :return: edge ids along the circuit, or None when there is none.
    """
    if len(multiplicity) != graph.edge_count:
        raise QuotaSpecError("multiplicity must have one entry per edge")
    used = [edge for edge in graph.edges if multiplicity[edge.edge_id] > 0]
    if not used:
        return ()
    nx_graph = to_networkx(
        graph,
        multiplicity=multiplicity,
        vertices={vertex for edge in used for vertex in (edge.src, edge.dst)},
    )
    if not nx.is_eulerian(nx_graph):
        return None
    return tuple(
        key[0]
        for _, _, key in nx.eulerian_circuit(nx_graph, source=used[0].src, keys=True)
    )


def _heaviest_internal(level: _Level, greedy: Sequence[int], subset: Set[int]) -> Dict[int, int]:  # noqa: E501
    """Per vertex of subset, the heaviest used internal edge into it."""
    heaviest: Dict[int, int] = {}
    for edge in level.graph.edges:
        if not greedy[edge.edge_id] or edge.src not in subset or edge.dst not in subset:
            continue
        current = heaviest.get(edge.dst)
        if current is None or level.weights[edge.edge_id] > level.weights[current]:
            heaviest[edge.dst] = edge.edge_id
    return heaviest


def _contract(  # noqa: WPS210
    level: _Level,
    subset: Set[int],
    heaviest: Dict[int, int],
) -> Tuple[_Level, Tuple[int, ...]]:
    """
    Collapse subset into a new last vertex with quota 1.

    Internal edges vanish, entering edges lose the weight of the heaviest
    internal edge into their target, leaving edges multiply their copies by
    the quota of their source.
    """
    kept = [vertex for vertex in range(level.graph.vertex_count) if vertex not in subset]
    renumber = {vertex: index for index, vertex in enumerate(kept)}
    merged = len(kept)
    for vertex in subset:
        renumber[vertex] = merged

    pairs: List[Tuple[int, int]] = []
    weights: List[Fraction] = []
    copies: List[int] = []
    parent_edge: List[int] = []
    for edge in level.graph.edges:
        inside_src, inside_dst = edge.src in subset, edge.dst in subset
        if inside_src and inside_dst:
            continue
        weight = level.weights[edge.edge_id]
        copy = level.copies[edge.edge_id]
        if inside_dst:
            weight -= level.weights[heaviest[edge.dst]]
        if inside_src:
            copy *= level.quota[edge.src]
        pairs.append((renumber[edge.src], renumber[edge.dst]))
        weights.append(weight)
        copies.append(copy)
        parent_edge.append(edge.edge_id)

    members = tuple(sorted(member for vertex in subset for member in level.members[vertex]))  # noqa: E501
    child = _Level(
        graph=from_pairs(merged + 1, pairs),
        quota=tuple(level.quota[vertex] for vertex in kept) + (1,),
        portfolio=tuple(level.portfolio[vertex] for vertex in kept) + (0,),
        weights=tuple(weights),
        copies=tuple(copies),
        origin=tuple(level.origin[edge_id] for edge_id in parent_edge),
        members=tuple(level.members[vertex] for vertex in kept) + (members,),
    )
    return child, tuple(parent_edge)


def _expand(step: _Step, child_usage: Sequence[int]) -> Tuple[int, ...]:
    """Lift a child solution: one unit enters the cluster and replaces its heaviest edge."""  # noqa: E501
    usage = [0] * step.level.graph.edge_count
    for edge_id in step.internal:
        usage[edge_id] = step.greedy[edge_id]
    for child_id, edge_id in enumerate(step.parent_edge):
        units = child_usage[child_id]
        usage[edge_id] = units
        target = step.level.graph.edges[edge_id].dst
        if units and target in step.heaviest:
            usage[step.heaviest[target]] -= units
    return tuple(usage)


def _strip_zero_quota(
    graph: MultiGraph,
    quota: Vector,
    portfolio: Vector,
    weights: Tuple[Fraction, ...],
) -> _Level:
    kept = [vertex for vertex, entry in enumerate(quota) if entry > 0]
    renumber = {vertex: index for index, vertex in enumerate(kept)}
    edges = [
        edge for edge in graph.edges if edge.src in renumber and edge.dst in renumber
    ]
    return _Level(
        graph=from_pairs(len(kept), [(renumber[edge.src], renumber[edge.dst]) for edge in edges]),  # noqa: E501
        quota=tuple(quota[vertex] for vertex in kept),
        portfolio=tuple(portfolio[vertex] for vertex in kept),
        weights=tuple(weights[edge.edge_id] for edge in edges),
        copies=tuple(1 for _ in edges),
        origin=tuple(edge.edge_id for edge in edges),
        members=tuple((vertex,) for vertex in kept),
    )


def min_quota_inventory(  # noqa: WPS210
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    weights: WeightMap,
) -> MqfResult:
    """
    Inventory of a minimum-weight exact quota forest.

    Weights may be negative. The returned weight equals the weight of the
    last, uncontracted greedy choice plus the circuit weight of every
    contraction.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param weights: per-edge weights.
    :raises InfeasibleError: when no exact forest exists.
    :return: MqfResult with the inventory and the contraction trace.
    """
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    edge_weights = weights.check_against(graph).weights
    if not achievable(graph, quota, portfolio):
        raise InfeasibleError(f"no exact forest for quota {quota}, portfolio {portfolio}")  # noqa: E501

    level = _strip_zero_quota(graph, quota, portfolio, edge_weights)
    steps: List[_Step] = []
    contractions: List[Contraction] = []
    while True:  # noqa: WPS457
        greedy = greedy_inventory(
            level.graph, level.quota, level.portfolio, level.weights, level.copies,
        )
        subset = violating_subset(
            level.graph,
            level.quota,
            level.portfolio,
            Inventory(x=greedy, c=level.copies),
        )
        if subset is None:
            break
        inside = set(subset)
        internal = tuple(
            edge.edge_id
            for edge in level.graph.edges
            if edge.src in inside and edge.dst in inside
        )
        circuit_usage = [greedy[edge_id] if edge_id in internal else 0 for edge_id in range(level.graph.edge_count)]  # noqa: E501
        circuit = euler_circuit(level.graph, circuit_usage)
        heaviest = _heaviest_internal(level, greedy, inside)
        child, parent_edge = _contract(level, inside, heaviest)
        contractions.append(
            Contraction(
                members=child.members[-1],
                circuit_weight=sum(
                    (greedy[edge_id] * level.weights[edge_id] for edge_id in internal),
                    Fraction(0),
                ),
                circuit=None if circuit is None else tuple(level.origin[edge_id] for edge_id in circuit),  # noqa: E501
            ),
        )
        logger.debug(
            f"contracted {child.members[-1]} at circuit weight {contractions[-1].circuit_weight}",  # noqa: E501
        )
        steps.append(
            _Step(
                level=level,
                greedy=greedy,
                internal=internal,
                heaviest=heaviest,
                parent_edge=parent_edge,
            ),
        )
        level = child

    residual_weight = sum(
        (units * weight for units, weight in zip(greedy, level.weights)),
        Fraction(0),
    )
    usage: Tuple[int, ...] = greedy
    for step in reversed(steps):
        usage = _expand(step, usage)
        level = step.level

    result_usage = [0] * graph.edge_count
    for edge_id, units in enumerate(usage):
        result_usage[level.origin[edge_id]] = units
    inventory = Inventory(x=tuple(result_usage))
    total = inventory.weight(weights)
    assert total == residual_weight + sum(  # noqa: S101
        (contraction.circuit_weight for contraction in contractions),
        Fraction(0),
    ), "weight does not match the contraction trace"
    logger.info(f"minimum quota forest weight {total} after {len(contractions)} contractions")  # noqa: E501
    return MqfResult(
        inventory=inventory,
        weight=total,
        residual_weight=residual_weight,
        contractions=tuple(contractions),
    )


def inventory_to_forest(
    graph: MultiGraph,
    quota: Sequence[int],
    portfolio: Sequence[int],
    inventory: Inventory,
) -> ImmersedForest:
    """
    Build an exact quota forest whose edge preimage counts equal x.

    Roots are peeled in vertex and slot order, then nodes in FIFO order;
    every peeled node takes one unit of each of its out-edges with units
    left.

    Copy counts above one only occur on contracted graphs, where one edge
    stands for parallel edges a node may use several times. Such an
    inventory has no forest over this graph and is refused; the inventories
    min_quota_inventory returns are already expanded to unit copies.

    :param graph: host graph.
    :param quota: per-vertex quota.
    :param portfolio: per-vertex start portfolio.
    :param inventory: valid inventory.
    :raises InvalidInventoryError: when the inventory has copy counts above one, breaks a constraint or the peel gets stuck.
    :return: forest with the given inventory.
    """  # noqa: E501
    quota = graph.check_vector(quota, "quota")
    portfolio = graph.check_vector(portfolio, "portfolio")
    copied = [edge_id for edge_id, copies in enumerate(inventory.c) if copies > 1]
    if copied:
        raise InvalidInventoryError(f"edges {copied} carry several copies, expand the contraction first")  # noqa: E501
    check = check_inventory(graph, quota, portfolio, inventory)
    if not check.ok:
        raise InvalidInventoryError(f"inventory breaks the {check.constraint} constraint: {check}")  # noqa: E501
    if any(need < start for need, start in zip(quota, portfolio)):
        raise InvalidInventoryError("portfolio exceeds quota")

    left = list(inventory.x)
    nodes: List[ForestNode] = []
    root_slots: List[List[Optional[int]]] = [[] for _ in range(graph.vertex_count)]
    for vertex in range(graph.vertex_count):
        for _ in range(portfolio[vertex]):
            root_slots[vertex].append(len(nodes))
            nodes.append(ForestNode(node_id=len(nodes), image=vertex))

    peeled = 0
    while peeled < len(nodes):
        node = nodes[peeled]
        for edge_id in graph.outstar(node.image):
            if left[edge_id] == 0:
                continue
            left[edge_id] -= 1
            nodes.append(
                ForestNode(
                    node_id=len(nodes),
                    image=graph.edges[edge_id].dst,
                    parent=node.node_id,
                    parent_edge=edge_id,
                ),
            )
        peeled += 1

    if any(left):
        stuck = [edge_id for edge_id, units in enumerate(left) if units]
        raise InvalidInventoryError(f"peeling got stuck with units left on edges {stuck}")
    return ImmersedForest(
        nodes=tuple(nodes),
        root_slots=tuple(tuple(slot) for slot in root_slots),
    )
