import enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, FilePath, field_validator, model_validator

from quota_trees.counting import CountMethod
from quota_trees.graph import from_pairs
from quota_trees.models import (
    Contraction,
    Dfa,
    Discipline,
    ImmersedForest,
    Mode,
    MqfResult,
    MultiGraph,
    WeightMap,
    to_fraction,
)

VertexRef = Union[int, str]


class Command(str, enum.Enum):
    """Subcommands of the command line tool."""

    CHECK = "check"
    COUNT = "count"
    SAMPLE = "sample"
    SEARCH = "search"
    KLP = "klp"
    MQF = "mqf"
    ENUMERATE = "enumerate"
    DFA_EXPAND = "dfa-expand"
    DFA_MIN = "dfa-min"
    DFA_EQ = "dfa-eq"


class EdgeDocument(BaseModel):
    """Edge entry of a graph file."""

    model_config = ConfigDict(extra="forbid")

    src: VertexRef
    dst: VertexRef
    weight: Union[int, str] = 1

    @field_validator("weight", mode="after")
    def validate_weight(cls, value: Union[int, str]) -> Union[int, str]:  # noqa: N805
        """
        Pydantic validation for the weight field.

        :param value: weight literal.
        :raises ValueError: when the weight is not an exact number.
        :return: validated literal.
        """
        to_fraction(value)
        return value


def _resolve(ref: VertexRef, names: Dict[str, int], count: int, label: str) -> int:
    if isinstance(ref, str):
        if ref not in names:
            raise ValueError(f"{label} names unknown vertex {ref!r}")
        return names[ref]
    if not 0 <= ref < count:
        raise ValueError(f"{label} {ref} outside [0, {count})")
    return ref


class GraphDocument(BaseModel):
    """Graph file: vertices, edges in edge id order, optional quota and portfolio."""

    model_config = ConfigDict(extra="forbid")

    vertices: Union[int, List[str]]
    edges: List[EdgeDocument] = []
    quota: Optional[List[int]] = None
    portfolio: Optional[List[int]] = None

    @field_validator("vertices", mode="after")
    def validate_vertices(cls, value: Union[int, List[str]]) -> Union[int, List[str]]:  # noqa: N805, E501
        """
        Pydantic validation for the vertices field.

        :param value: vertex count or list of names.
        :raises ValueError: on a negative count or repeated names.
        :return: validated value.
        """
        if isinstance(value, int) and value < 0:
            raise ValueError("vertex count must be nonnegative")
        if isinstance(value, list) and len(set(value)) != len(value):
            raise ValueError("vertex names must be distinct")
        return value

    @model_validator(mode="after")
    def validate_references(self) -> "GraphDocument":
        """
        Every edge endpoint names an existing vertex, vectors have one entry per vertex.

        :raises ValueError: on an unknown endpoint or a vector of the wrong length.
        :return: validated document.
        """  # noqa: E501
        for edge in self.edges:
            _resolve(edge.src, self.name_index, self.vertex_count, "src")
            _resolve(edge.dst, self.name_index, self.vertex_count, "dst")
        for label, vector in (("quota", self.quota), ("portfolio", self.portfolio)):
            if vector is None:
                continue
            if len(vector) != self.vertex_count:
                raise ValueError(f"{label} needs {self.vertex_count} entries")
            if any(entry < 0 for entry in vector):
                raise ValueError(f"{label} entries must be nonnegative")
        return self

    @property
    def vertex_count(self) -> int:
        """
        Number of vertices.

        :return: vertex count.
        """
        if isinstance(self.vertices, int):
            return self.vertices
        return len(self.vertices)

    @property
    def name_index(self) -> Dict[str, int]:
        """
        Vertex index by name.

        :return: empty when vertices are unnamed.
        """
        if isinstance(self.vertices, int):
            return {}
        return {name: index for index, name in enumerate(self.vertices)}

    def to_graph(self) -> MultiGraph:
        """
        Domain graph, edge ids follow the file order.

        :return: MultiGraph.
        """
        names = self.name_index
        pairs = [
            (
                _resolve(edge.src, names, self.vertex_count, "src"),
                _resolve(edge.dst, names, self.vertex_count, "dst"),
            )
            for edge in self.edges
        ]
        return from_pairs(
            self.vertex_count,
            pairs,
            names=None if isinstance(self.vertices, int) else self.vertices,
        )

    def to_weights(self) -> WeightMap:
        """
        Edge weights, 1 where the file gives none.

        :return: WeightMap.
        """
        return WeightMap(weights=tuple(edge.weight for edge in self.edges))


class DfaDocument(BaseModel):
    """DFA file; delta has one row per state in symbol order."""

    model_config = ConfigDict(extra="forbid")

    alphabet: List[str]
    states: Union[int, List[str]]
    initial: VertexRef = 0
    accepts: List[VertexRef] = []
    delta: List[List[VertexRef]]

    @model_validator(mode="after")
    def validate_states(self) -> "DfaDocument":
        """
        State references resolve and the table is total.

        :raises ValueError: on an unknown state or a short row.
        :return: validated document.
        """
        self.to_dfa()
        return self

    @property
    def state_index(self) -> Dict[str, int]:
        """
        State index by name.

        :return: empty when states are unnamed.
        """
        if isinstance(self.states, int):
            return {}
        return {name: index for index, name in enumerate(self.states)}

    @property
    def state_count(self) -> int:
        """
        Number of states.

        :return: state count.
        """
        if isinstance(self.states, int):
            return self.states
        return len(self.states)

    def to_dfa(self) -> Dfa:
        """
        Domain automaton.

        :return: Dfa.
        """
        names = self.state_index
        count = self.state_count
        return Dfa(
            alphabet=tuple(self.alphabet),
            delta=tuple(
                tuple(_resolve(target, names, count, "delta") for target in row)
                for row in self.delta
            ),
            initial=_resolve(self.initial, names, count, "initial"),
            accepts=tuple(_resolve(state, names, count, "accepts") for state in self.accepts),  # noqa: E501
            names=None if isinstance(self.states, int) else tuple(self.states),
        )

    @classmethod
    def from_dfa(cls, dfa: Dfa) -> "DfaDocument":
        """
        Document for an automaton, states by name when it has names.

        :param dfa: automaton.
        :return: DfaDocument.
        """
        if dfa.names is None:
            return cls(
                alphabet=list(dfa.alphabet),
                states=dfa.state_count,
                initial=dfa.initial,
                accepts=list(dfa.accepts),
                delta=[list(row) for row in dfa.delta],
            )
        names = dfa.names
        return cls(
            alphabet=list(dfa.alphabet),
            states=list(names),
            initial=names[dfa.initial],
            accepts=[names[state] for state in dfa.accepts],
            delta=[[names[target] for target in row] for row in dfa.delta],
        )


def _parse_vector(value: Any) -> Any:
    if isinstance(value, str):
        try:
            return tuple(int(part) for part in value.split(",") if part.strip())
        except ValueError:
            raise ValueError(f"{value!r} is not a comma separated list of integers")
    return value


class CliArguments(BaseModel):
    """Pydantic model for cli args."""

    command: Command
    input_path: FilePath
    output_path: Optional[Path] = None
    json_output: bool = False
    mode: Mode = Mode.EXACT
    method: CountMethod = CountMethod.DET
    discipline: Discipline = Discipline.FIFO
    relaxation: bool = False
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    samples: int = Field(default=1, ge=0)
    k: int = Field(default=1, ge=1)
    quota: Optional[Tuple[int, ...]] = None
    portfolio: Optional[Tuple[int, ...]] = None
    sizes: Optional[Tuple[int, ...]] = None
    other_path: Optional[FilePath] = None
    force: bool = False
    with_forest: bool = False
    slow: bool = False

    @field_validator("mode", mode="before")
    def validate_mode(cls, value: Any) -> Any:  # noqa: N805
        """
        Accept atmost and at-most as spellings of at_most.

        :param value: raw mode.
        :return: normalized mode.
        """
        if isinstance(value, str):
            return value.replace("-", "_").replace("atmost", "at_most")
        return value

    @field_validator("quota", "portfolio", "sizes", mode="before")
    def validate_vectors(cls, value: Any) -> Any:  # noqa: N805
        """
        Parse comma separated integer lists.

        :param value: raw vector.
        :return: tuple of ints.
        """
        return _parse_vector(value)

    @model_validator(mode="after")
    def validate_command(self) -> "CliArguments":
        """
        Randomized subcommands need a seed, dfa-eq needs a second file.

        :raises ValueError: when a required option is missing.
        :return: validated arguments.
        """
        randomized = {Command.SAMPLE, Command.DFA_EXPAND}
        if self.discipline is Discipline.RANDOM:
            randomized.add(Command.SEARCH)
        if self.command in randomized and self.seed is None:
            raise ValueError(f"{self.command.value} requires --seed")
        if self.command is Command.DFA_EQ and self.other_path is None:
            raise ValueError("dfa-eq requires --other")
        if self.command is Command.DFA_EXPAND and self.sizes is None:
            raise ValueError("dfa-expand requires --sizes")
        return self


class CountOutput(BaseModel):
    """Result of the count subcommand."""

    count: int


class EquivalenceOutput(BaseModel):
    """Result of the dfa-eq subcommand."""

    equivalent: bool


class MqfOutput(BaseModel):
    """Result of the mqf subcommand, the inventory lists used edges only."""

    weight: str
    residual_weight: str
    inventory: Dict[int, int]
    contractions: List[Contraction]
    forest: Optional[ImmersedForest] = None

    @classmethod
    def from_result(cls, result: MqfResult, forest: Optional[ImmersedForest] = None) -> "MqfOutput":  # noqa: E501
        """
        Output document for a minimum quota forest result.

        :param result: MqfResult.
        :param forest: forest realizing the inventory, when requested.
        :return: MqfOutput.
        """
        return cls(
            weight=str(result.weight),
            residual_weight=str(result.residual_weight),
            inventory={
                edge_id: units
                for edge_id, units in enumerate(result.inventory.x)
                if units
            },
            contractions=list(result.contractions),
            forest=forest,
        )
