"""Domain models shared by every module of the toolkit."""
import enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    field_serializer,
    field_validator,
    model_validator,
)

from quota_trees.exceptions import QuotaSpecError

Vector = Tuple[int, ...]


def to_fraction(value: Any) -> Fraction:
    """
    Convert an exact weight literal to a Fraction.

    :param value: decimal or rational string, integer or Fraction.
    :raises ValueError: for floats, booleans and unparsable strings.
    :return: exact rational value.
    """
    if isinstance(value, bool):
        raise ValueError(f"weight {value!r} is not a number")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"weight {value!r} is not an exact decimal or rational")
    raise ValueError(
        f"weight {value!r} must be written as a decimal string or an integer",
    )


class Edge(BaseModel):
    """Directed edge record, loops and parallel edges are distinct records."""

    model_config = ConfigDict(frozen=True)

    edge_id: int = Field(ge=0)
    src: int = Field(ge=0)
    dst: int = Field(ge=0)


class MultiGraph(BaseModel):
    """
    Directed multigraph with dense vertex indices and dense edge ids.

    Edge ids are exactly 0..E-1 in order; names are display sugar only.
    """

    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(ge=0)
    edges: Tuple[Edge, ...] = ()
    names: Optional[Tuple[str, ...]] = None

    _outstars: Tuple[Tuple[int, ...], ...] = PrivateAttr(default=())
    _instars: Tuple[Tuple[int, ...], ...] = PrivateAttr(default=())

    @model_validator(mode="after")
    def validate_edges(self) -> "MultiGraph":
        """
        Check edge id density and endpoint ranges.

        :raises ValueError: when an edge id is out of sequence or an endpoint is out of range.
        :return: validated graph.
        """  # noqa: E501
        for position, edge in enumerate(self.edges):
            if edge.edge_id != position:
                raise ValueError(
                    f"edge ids must be 0..E-1 in order, found {edge.edge_id} at position {position}",  # noqa: E501
                )
            if edge.src >= self.vertex_count or edge.dst >= self.vertex_count:
                raise ValueError(
                    f"edge {edge.edge_id} endpoint outside [0, {self.vertex_count})",
                )
        if self.names is not None and len(self.names) != self.vertex_count:
            raise ValueError("names must give exactly one name per vertex")
        return self

    def model_post_init(self, __context: Any) -> None:
        """
        Index outstars and instars once.

        :param __context: pydantic context, unused.
        """
        outstars: List[List[int]] = [[] for _ in range(self.vertex_count)]
        instars: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for edge in self.edges:
            outstars[edge.src].append(edge.edge_id)
            instars[edge.dst].append(edge.edge_id)
        self._outstars = tuple(tuple(star) for star in outstars)
        self._instars = tuple(tuple(star) for star in instars)

    @property
    def edge_count(self) -> int:
        """
        Number of edge records.

        :return: E.
        """
        return len(self.edges)

    def outstar(self, vertex: int) -> Tuple[int, ...]:
        """
        Edge ids leaving a vertex, in id order.

        :param vertex: vertex index.
        :return: tuple of edge ids.
        """
        return self._outstars[vertex]

    def instar(self, vertex: int) -> Tuple[int, ...]:
        """
        Edge ids entering a vertex, in id order.

        :param vertex: vertex index.
        :return: tuple of edge ids.
        """
        return self._instars[vertex]

    def vertex_name(self, vertex: int) -> str:
        """
        Display name of a vertex.

        :param vertex: vertex index.
        :return: the given name, or the index as text.
        """
        if self.names is None:
            return str(vertex)
        return self.names[vertex]

    def check_vector(self, vector: Sequence[int], label: str) -> Vector:
        """
        Validate a per-vertex nonnegative integer vector.

        :param vector: candidate vector.
        :param label: vector name used in messages.
        :raises QuotaSpecError: on length mismatch or negative entries.
        :return: the vector as a tuple.
        """
        if len(vector) != self.vertex_count:
            raise QuotaSpecError(
                f"{label} has length {len(vector)}, graph has {self.vertex_count} vertices",  # noqa: E501
            )
        checked = tuple(int(entry) for entry in vector)
        negative = [vertex for vertex, entry in enumerate(checked) if entry < 0]
        if negative:
            raise QuotaSpecError(f"{label} is negative at vertices {negative}")
        return checked


class Mode(str, enum.Enum):
    """Portfolio semantics: use all of s, or any sub-multiset of s."""

    EXACT = "exact"
    AT_MOST = "at_most"


class QuotaSpec(BaseModel):
    """Quota q and start portfolio s, one entry per vertex."""

    model_config = ConfigDict(frozen=True)

    q: Vector
    s: Vector

    @field_validator("q", "s", mode="after")
    def validate_nonnegative(cls, value: Vector) -> Vector:  # noqa: N805
        """
        Pydantic validation for the quota and portfolio entries.

        :param value: candidate vector.
        :raises ValueError: when an entry is negative.
        :return: validated vector.
        """
        if any(entry < 0 for entry in value):
            raise ValueError("quota and portfolio entries must be nonnegative")
        return value

    @model_validator(mode="after")
    def validate_lengths(self) -> "QuotaSpec":
        """
        Quota and portfolio must describe the same vertex set.

        :raises ValueError: on length mismatch.
        :return: validated quota and portfolio.
        """
        if len(self.q) != len(self.s):
            raise ValueError("quota and portfolio must have the same length")
        return self

    def check_against(self, graph: MultiGraph) -> "QuotaSpec":
        """
        Check quota and portfolio lengths against a graph.

        :param graph: host graph.
        :return: self, for chaining.
        """
        graph.check_vector(self.q, "quota")
        graph.check_vector(self.s, "portfolio")
        return self


class WeightMap(BaseModel):
    """Exact rational weight per edge id."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: Tuple[Fraction, ...]

    @field_validator("weights", mode="before")
    def validate_weights(cls, value: Sequence[Any]) -> Tuple[Fraction, ...]:  # noqa: N805, E501
        """
        Parse every weight exactly.

        :param value: sequence of weight literals.
        :raises ValueError: when a weight is not an exact literal.
        :return: tuple of Fractions.
        """
        return tuple(to_fraction(entry) for entry in value)

    @field_serializer("weights")
    def serialize_weights(self, weights: Tuple[Fraction, ...]) -> List[str]:
        """
        Weights as exact rational strings.

        :param weights: weights to dump.
        :return: list of strings.
        """
        return [str(weight) for weight in weights]

    @classmethod
    def unit(cls, graph: MultiGraph) -> "WeightMap":
        """
        Weight 1 on every edge.

        :param graph: host graph.
        :return: unit weight map.
        """
        return cls(weights=tuple(Fraction(1) for _ in graph.edges))

    def check_against(self, graph: MultiGraph) -> "WeightMap":
        """
        Weight map must have one entry per edge.

        :param graph: host graph.
        :raises QuotaSpecError: on length mismatch.
        :return: self, for chaining.
        """
        if len(self.weights) != graph.edge_count:
            raise QuotaSpecError(
                f"weight map has {len(self.weights)} entries, graph has {graph.edge_count} edges",  # noqa: E501
            )
        return self


class ForestNode(BaseModel):
    """Node of an immersed forest, parent fields are None for roots."""

    model_config = ConfigDict(frozen=True)

    node_id: int = Field(ge=0)
    image: int = Field(ge=0)
    parent: Optional[int] = None
    parent_edge: Optional[int] = None


class ImmersedForest(BaseModel):
    """
    Forest of rooted trees with an immersion into a host graph.

    root_slots[v] lists, in slot order, the root nodes with image v. An
    at-most forest keeps one entry per portfolio slot and marks unused slots
    with None, so forests differing only in which slots they use stay distinct.
    """

    model_config = ConfigDict(frozen=True)

    nodes: Tuple[ForestNode, ...] = ()
    root_slots: Tuple[Tuple[Optional[int], ...], ...] = ()

    @property
    def node_count(self) -> int:
        """
        Number of nodes.

        :return: node count.
        """
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        """
        Number of tree edges.

        :return: nodes minus roots.
        """
        return sum(1 for node in self.nodes if node.parent is not None)

    def root_count(self) -> int:
        """
        Number of roots over all slots.

        :return: root count.
        """
        return sum(
            1 for slot in self.root_slots for root in slot if root is not None
        )

    def preimage_counts(self, vertex_count: int) -> Vector:
        """
        Number of nodes over every host vertex.

        :param vertex_count: host vertex count.
        :return: per-vertex counts.
        """
        counts = [0] * vertex_count
        for node in self.nodes:
            counts[node.image] += 1
        return tuple(counts)


class Discipline(str, enum.Enum):
    """Queue extraction rule of quota search."""

    FIFO = "fifo"
    LIFO = "lifo"
    MIN_WEIGHT_EDGE = "min_weight_edge"
    MIN_PATH_WEIGHT = "min_path_weight"
    RANDOM = "random"


class SearchConfig(BaseModel):
    """Quota search configuration."""

    model_config = ConfigDict(frozen=True)

    discipline: Discipline = Discipline.FIFO
    seed: Optional[int] = Field(default=None, ge=0)
    mode: Mode = Mode.EXACT
    relaxation: bool = False

    @model_validator(mode="after")
    def validate_discipline(self) -> "SearchConfig":
        """
        RANDOM needs a seed, relaxation needs weight-sum keys.

        :raises ValueError: on an inconsistent combination.
        :return: validated config.
        """
        if self.discipline is Discipline.RANDOM and self.seed is None:
            raise ValueError("random discipline requires a seed")
        if self.relaxation and self.discipline is not Discipline.MIN_PATH_WEIGHT:
            raise ValueError("relaxation is only valid with min_path_weight keys")
        return self

    @property
    def needs_weights(self) -> bool:
        """
        Whether the discipline orders by weight.

        :return: True for the weighted disciplines.
        """
        return self.discipline in {
            Discipline.MIN_WEIGHT_EDGE,
            Discipline.MIN_PATH_WEIGHT,
        }


class SearchReport(BaseModel):
    """Outcome of a quota search, the forest is partial on failure."""

    model_config = ConfigDict(frozen=True)

    forest: ImmersedForest
    residual: Vector

    @property
    def succeeded(self) -> bool:
        """
        Whether every quota reached zero.

        :return: True on success.
        """
        return not any(self.residual)


class ForestDiagnosis(BaseModel):
    """Result of validate_forest, violation names the first broken rule."""

    model_config = ConfigDict(frozen=True)

    valid: bool
    violation: Optional[str] = None
    detail: str = ""


class PathEntry(BaseModel):
    """Weighted path given as edge ids from its root."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weight: Fraction
    edges: Tuple[int, ...] = ()

    @field_serializer("weight")
    def serialize_weight(self, weight: Fraction) -> str:
        """
        Weight as exact rational string.

        :param weight: path weight.
        :return: string form.
        """
        return str(weight)


class KLightestPaths(BaseModel):
    """Up to k lightest paths per vertex, sorted by weight."""

    model_config = ConfigDict(frozen=True)

    k: int
    paths: Tuple[Tuple[PathEntry, ...], ...]

    def weights(self, vertex: int) -> List[Fraction]:
        """
        Sorted path weights at a vertex.

        :param vertex: vertex index.
        :return: list of weights.
        """
        return [entry.weight for entry in self.paths[vertex]]


class FeasibilityReport(BaseModel):
    """Everything the check subcommand reports."""

    model_config = ConfigDict(frozen=True)

    connected: bool
    unreachable: Tuple[int, ...]
    enough_arrows_violations: Tuple[int, ...]
    portfolio_exceeds_quota: Tuple[int, ...]
    achievable_exact: bool
    achievable_at_most: bool


class QuotaSymbolArgs(BaseModel):
    """Arguments (a, b, M) of the quota symbol."""

    model_config = ConfigDict(frozen=True)

    a: Vector
    b: Vector
    graph: MultiGraph

    @model_validator(mode="after")
    def validate_lengths(self) -> "QuotaSymbolArgs":
        """
        Both vectors index the graph's vertices.

        :raises ValueError: on length mismatch.
        :return: validated arguments.
        """
        count = self.graph.vertex_count
        if len(self.a) != count or len(self.b) != count:
            raise ValueError(f"a and b must both have length {count}")
        return self


class Inventory(BaseModel):
    """Edge usage counts x and copy counts c, indexed by edge id."""

    model_config = ConfigDict(frozen=True)

    x: Vector
    c: Vector

    @model_validator(mode="before")
    def default_copies(cls, data: Any) -> Any:  # noqa: N805
        """
        Copy counts default to one per edge.

        :param data: raw model input.
        :return: input with copy counts filled in.
        """
        if isinstance(data, dict) and data.get("c") is None and "x" in data:
            return {**data, "c": tuple(1 for _ in data["x"])}
        return data

    @field_validator("x", mode="after")
    def validate_usage(cls, value: Vector) -> Vector:  # noqa: N805
        """
        Usage counts are nonnegative.

        :param value: usage counts.
        :raises ValueError: when a count is negative.
        :return: validated counts.
        """
        if any(entry < 0 for entry in value):
            raise ValueError("inventory counts must be nonnegative")
        return value

    @field_validator("c", mode="after")
    def validate_copies(cls, value: Vector) -> Vector:  # noqa: N805
        """
        Copy counts are positive.

        :param value: copy counts.
        :raises ValueError: when a count is not positive.
        :return: validated counts.
        """
        if any(entry < 1 for entry in value):
            raise ValueError("copy counts must be positive")
        return value

    @model_validator(mode="after")
    def validate_lengths(self) -> "Inventory":
        """
        One usage count and one copy count per edge.

        :raises ValueError: on length mismatch.
        :return: validated inventory.
        """
        if len(self.c) != len(self.x):
            raise ValueError("x and c must have the same length")
        return self

    def weight(self, weights: "WeightMap") -> Fraction:
        """
        Total weight of the inventory.

        :param weights: per-edge weights.
        :return: sum of x_e times w_e.
        """
        return sum(
            (count * weight for count, weight in zip(self.x, weights.weights)),
            Fraction(0),
        )


class InventoryCheck(BaseModel):
    """Diagnosis of an inventory against the edge, node and subset constraints."""

    model_config = ConfigDict(frozen=True)

    ok: bool
    constraint: Optional[str] = None
    edge: Optional[int] = None
    vertex: Optional[int] = None
    subset: Optional[Tuple[int, ...]] = None


class Contraction(BaseModel):
    """One contraction step of the minimum quota forest computation."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    members: Tuple[int, ...]
    circuit_weight: Fraction
    circuit: Optional[Tuple[int, ...]] = None

    @field_serializer("circuit_weight")
    def serialize_circuit_weight(self, weight: Fraction) -> str:
        """
        Weight as exact rational string.

        :param weight: circuit weight.
        :return: string form.
        """
        return str(weight)


class MqfResult(BaseModel):
    """Minimum-weight inventory plus the contraction trace that produced it."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    inventory: Inventory
    weight: Fraction
    residual_weight: Fraction
    contractions: Tuple[Contraction, ...] = ()

    @field_serializer("weight", "residual_weight")
    def serialize_weight(self, weight: Fraction) -> str:
        """
        Weight as exact rational string.

        :param weight: weight to dump.
        :return: string form.
        """
        return str(weight)


class Dfa(BaseModel):
    """Deterministic finite automaton with a total transition table."""

    model_config = ConfigDict(frozen=True)

    alphabet: Tuple[str, ...]
    delta: Tuple[Tuple[int, ...], ...]
    initial: int = 0
    accepts: Tuple[int, ...] = ()
    names: Optional[Tuple[str, ...]] = None

    @field_validator("alphabet", mode="after")
    def validate_alphabet(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:  # noqa: N805, E501
        """
        Alphabet symbols are distinct and there is at least one.

        :param value: alphabet.
        :raises ValueError: on an empty alphabet or repeated symbols.
        :return: validated alphabet.
        """
        if not value:
            raise ValueError("alphabet must not be empty")
        if len(set(value)) != len(value):
            raise ValueError("alphabet symbols must be distinct")
        return value

    @field_validator("accepts", mode="after")
    def normalize_accepts(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:  # noqa: N805, E501
        """
        Accept states are kept as a sorted set.

        :param value: accept states.
        :return: sorted distinct states.
        """
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def validate_table(self) -> "Dfa":
        """
        Transition table is total and every state reference is in range.

        :raises ValueError: on a malformed table or state reference.
        :return: validated automaton.
        """
        count = len(self.delta)
        if count == 0:
            raise ValueError("automaton needs at least one state")
        for state, row in enumerate(self.delta):
            if len(row) != len(self.alphabet):
                raise ValueError(f"state {state} must have one transition per symbol")
            if any(not 0 <= target < count for target in row):
                raise ValueError(f"state {state} has a transition outside the state set")
        if not 0 <= self.initial < count:
            raise ValueError("initial state outside the state set")
        if any(not 0 <= state < count for state in self.accepts):
            raise ValueError("accept state outside the state set")
        if self.names is not None and len(self.names) != count:
            raise ValueError("names must give exactly one name per state")
        return self

    @property
    def state_count(self) -> int:
        """
        Number of states.

        :return: state count.
        """
        return len(self.delta)

    def state_name(self, state: int) -> str:
        """
        Display name of a state.

        :param state: state index.
        :return: the given name, or the index as text.
        """
        if self.names is None:
            return str(state)
        return self.names[state]


def as_dict(vector: Sequence[int]) -> Dict[int, int]:
    """
    Sparse view of a vector, handy in log messages.

    :param vector: dense vector.
    :return: index to value for the nonzero entries.
    """
    return {index: entry for index, entry in enumerate(vector) if entry}
