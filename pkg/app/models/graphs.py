"""Typed-vertex structured graphs and the analysis graph."""

import enum

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from app.models.network import Side


class VertexKind(str, enum.Enum):
    INPUT = "input"  # u_i
    INTERCONNECT_U = "interconnect_u"  # u~_i
    INTERCONNECT_Y = "interconnect_y"  # y~_i
    NETWORK_STATE = "network_state"  # x_{i,d}
    PLANT_STATE = "plant_state"
    OUTPUT = "output"  # y_i
    FAULT = "fault"  # f_v or f_{v,i}
    RELAY = "relay"  # copy of a radio node in the analysis graph


STATE_KINDS = frozenset({VertexKind.NETWORK_STATE, VertexKind.PLANT_STATE})
INTERCONNECT_KINDS = frozenset({VertexKind.INTERCONNECT_U, VertexKind.INTERCONNECT_Y})


class Vertex(BaseModel):
    """A typed vertex; ids are unique within one graph and never parsed back."""

    model_config = ConfigDict(frozen=True)

    id: str
    kind: VertexKind
    index: int | None = None
    side: Side | None = None
    component: int | None = None
    delay: int | None = None
    node: str | None = None

    def attrs(self) -> str:
        parts = []
        for name in ("index", "side", "component", "delay", "node"):
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, Side):
                value = value.tag
            parts.append(f"{name}={value}")
        return ",".join(parts) or "-"


# Vertex id builders
def input_id(i: int) -> str:
    return f"u{i}"


def interconnect_u_id(i: int) -> str:
    return f"u~{i}"


def interconnect_y_id(i: int) -> str:
    return f"y~{i}"


def output_id(i: int) -> str:
    return f"y{i}"


def plant_state_id(k: int) -> str:
    return f"x{k}"


def network_state_id(side: Side, i: int, d: int) -> str:
    return f"x{side.tag.lower()}{i}.{d}"


def fault_id(node: str, component: int | None = None) -> str:
    return f"f[{node}]" if component is None else f"f[{node}].{component}"


def copy_id(node: str, side: Side, component: int) -> str:
    return f"{node}#{side.tag}{component}"


class StructuredGraph(BaseModel):
    """Directed graph over typed vertices representing a structured system."""

    model_config = ConfigDict(frozen=True)

    vertices: dict[str, Vertex] = Field(default_factory=dict)
    edges: frozenset[tuple[str, str]] = frozenset()

    def ids_of(self, *kinds: VertexKind) -> list[str]:
        return sorted(v.id for v in self.vertices.values() if v.kind in kinds)

    @property
    def state_vertices(self) -> list[str]:
        return self.ids_of(*STATE_KINDS)

    @property
    def output_vertices(self) -> list[str]:
        return self.ids_of(VertexKind.OUTPUT)

    @property
    def fault_vertices(self) -> list[str]:
        return self.ids_of(VertexKind.FAULT)

    @property
    def interconnect_vertices(self) -> list[str]:
        return self.ids_of(*INTERCONNECT_KINDS)

    def digraph(self) -> nx.DiGraph:
        """networkx view with sorted insertion order."""
        g = nx.DiGraph()
        for vid in sorted(self.vertices):
            g.add_node(vid, kind=self.vertices[vid].kind)
        g.add_edges_from(sorted(self.edges))
        return g

    def union(self, other: "StructuredGraph") -> "StructuredGraph":
        """Union gluing vertices with equal ids."""
        vertices = dict(self.vertices)
        for vid, vertex in other.vertices.items():
            if vid in vertices and vertices[vid] != vertex:
                raise ValueError(f"vertex '{vid}' has conflicting types in union")
            vertices[vid] = vertex
        return StructuredGraph(vertices=vertices, edges=self.edges | other.edges)

    def without(self, *kinds: VertexKind) -> "StructuredGraph":
        keep = {vid: v for vid, v in self.vertices.items() if v.kind not in kinds}
        edges = frozenset(e for e in self.edges if e[0] in keep and e[1] in keep)
        return StructuredGraph(vertices=keep, edges=edges)

    def weak_bridges(self, candidates: list[str]) -> list[str]:
        """Candidates whose removal increases the number of weak components."""
        g = self.digraph()
        base = nx.number_weakly_connected_components(g)
        bridges = []
        for vid in candidates:
            h = g.copy()
            h.remove_node(vid)
            if nx.number_weakly_connected_components(h) > base:
                bridges.append(vid)
        return bridges


class AnalysisGraph(BaseModel):
    """Disjoint union of the routing subgraphs and the plant graph, with copy maps."""

    model_config = ConfigDict(frozen=True)

    graph: StructuredGraph
    gamma_r: dict[str, tuple[str, ...]]
    gamma_o: dict[str, tuple[str, ...]]
    sink_set: tuple[str, ...]

    def gamma(self, side: Side) -> dict[str, tuple[str, ...]]:
        return self.gamma_r if side is Side.CONTROLLABILITY else self.gamma_o

    def copies(self, node: str) -> tuple[str, ...]:
        if node in self.gamma_r:
            return self.gamma_r[node]
        return self.gamma_o.get(node, ())
