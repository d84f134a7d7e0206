"""Domain types for the plant and the two scheduled relay networks."""

import enum
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Edge = tuple[str, str]


class Side(str, enum.Enum):
    """Which relay network a node, schedule or fault belongs to."""

    CONTROLLABILITY = "controllability"
    OBSERVABILITY = "observability"

    @property
    def tag(self) -> str:
        return "R" if self is Side.CONTROLLABILITY else "O"


class PlantKind(str, enum.Enum):
    """Time domain of the plant matrices."""

    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


def format_edge(edge: Edge) -> str:
    return f"{edge[0]}->{edge[1]}"


class Plant(BaseModel):
    """LTI plant (A, B, C) with n states, m inputs and ell outputs."""

    model_config = ConfigDict(frozen=True)

    kind: PlantKind = PlantKind.CONTINUOUS
    A: tuple[tuple[float, ...], ...]
    B: tuple[tuple[float, ...], ...]
    C: tuple[tuple[float, ...], ...]

    @model_validator(mode="after")
    def check_dimensions(self) -> "Plant":
        n = len(self.A)
        if n < 1:
            raise ValueError("plant must have at least one state (n >= 1)")
        if any(len(row) != n for row in self.A):
            raise ValueError(f"A must be {n}x{n}")
        if len(self.B) != n:
            raise ValueError(f"B must have {n} rows, got {len(self.B)}")
        m = len(self.B[0])
        if m < 1 or any(len(row) != m for row in self.B):
            raise ValueError("B rows must share one positive column count (m >= 1)")
        if len(self.C) < 1:
            raise ValueError("plant must have at least one output (ell >= 1)")
        if any(len(row) != n for row in self.C):
            raise ValueError(f"C must have {n} columns")
        for name in ("A", "B", "C"):
            if not np.all(np.isfinite(getattr(self, name.lower()))):
                raise ValueError(f"{name} contains non-finite entries")
        return self

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def m(self) -> int:
        return len(self.B[0])

    @property
    def ell(self) -> int:
        return len(self.C)

    @property
    def a(self) -> np.ndarray:
        return np.array(self.A, dtype=float)

    @property
    def b(self) -> np.ndarray:
        return np.array(self.B, dtype=float)

    @property
    def c(self) -> np.ndarray:
        return np.array(self.C, dtype=float)


class RadioGraph(BaseModel):
    """Radio connectivity graph of one side of the network.

    On the controllability side the controller is the source of every
    component and the terminals are the actuators; on the observability side
    the terminals (sensors) are sources and the controller is the sink.
    Induced subgraphs carry a single terminal and the component they were
    induced for.
    """

    model_config = ConfigDict(frozen=True)

    side: Side
    nodes: frozenset[str]
    edges: frozenset[Edge] = frozenset()
    controller: str
    terminals: tuple[str, ...]
    component: int | None = None

    @model_validator(mode="after")
    def check_membership(self) -> "RadioGraph":
        if self.controller not in self.nodes:
            raise ValueError(f"unknown node '{self.controller}' declared as controller")
        for terminal in self.terminals:
            if terminal not in self.nodes:
                raise ValueError(f"unknown node '{terminal}' declared as terminal")
        if len(set(self.terminals)) != len(self.terminals):
            raise ValueError("terminal nodes must be pairwise distinct")
        if self.controller in self.terminals:
            raise ValueError("controller cannot also be a terminal")
        for edge in self.edges:
            if edge[0] == edge[1]:
                raise ValueError(f"self-loop {format_edge(edge)} is not a radio link")
            for node in edge:
                if node not in self.nodes:
                    raise ValueError(f"unknown node '{node}' in edge {format_edge(edge)}")
        return self

    def terminal(self, i: int) -> str:
        """Terminal of component i (1-based); induced subgraphs hold exactly one."""
        if self.component is not None:
            return self.terminals[0]
        return self.terminals[i - 1]

    def source(self, i: int) -> str:
        if self.side is Side.CONTROLLABILITY:
            return self.controller
        return self.terminal(i)

    def sink(self, i: int) -> str:
        if self.side is Side.CONTROLLABILITY:
            return self.terminal(i)
        return self.controller

    @property
    def special_nodes(self) -> frozenset[str]:
        return frozenset((self.controller, *self.terminals))

    @property
    def relay_nodes(self) -> frozenset[str]:
        return self.nodes - self.special_nodes


class ComponentSchedule(BaseModel):
    """Periodic slot schedule eta_i of one signal component."""

    model_config = ConfigDict(frozen=True)

    frame_length: int = Field(..., ge=1)
    slots: dict[int, frozenset[Edge]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_slots(self) -> "ComponentSchedule":
        seen: dict[Edge, int] = {}
        for slot in sorted(self.slots):
            if not 1 <= slot <= self.frame_length:
                raise ValueError(f"slot {slot} outside frame 1..{self.frame_length}")
            for edge in sorted(self.slots[slot]):
                if edge in seen:
                    raise ValueError(
                        f"link scheduled twice: {format_edge(edge)} in slots {seen[edge]} and {slot}"
                    )
                seen[edge] = slot
        return self

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(edge for edges in self.slots.values() for edge in edges)

    def slot_of(self, edge: Edge) -> int | None:
        for slot, edges in self.slots.items():
            if edge in edges:
                return slot
        return None


class ComponentWeights(BaseModel):
    """Weight function W_i of one signal component."""

    model_config = ConfigDict(frozen=True)

    weights: dict[Edge, float] = Field(default_factory=dict)

    @field_validator("weights")
    @classmethod
    def check_finite(cls, v: dict[Edge, float]) -> dict[Edge, float]:
        for edge, weight in v.items():
            if not math.isfinite(weight):
                raise ValueError(f"weight of {format_edge(edge)} is not finite")
        return v

    def weight(self, edge: Edge) -> float:
        return self.weights[edge]

    @classmethod
    def unit(cls, edges: frozenset[Edge]) -> "ComponentWeights":
        return cls(weights=dict.fromkeys(sorted(edges), 1.0))


class ViolationKind(str, enum.Enum):
    CYCLIC = "cyclic"
    NOT_WEAKLY_CONNECTED = "not_weakly_connected"
    NODE_NOT_ON_ROUTING_PATH = "node_not_on_routing_path"
    NO_ROUTE = "no_route"


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ViolationKind
    message: str


class ValidationReport(BaseModel):
    """Routing-shape violations of one induced subgraph."""

    side: Side
    component: int
    violations: list[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations
