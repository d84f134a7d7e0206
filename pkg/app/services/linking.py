"""Linking engines: vertex-disjoint paths, grouped linkings, structural observability, connectivity.

Vertex-disjoint paths are unit flows on the node-split graph: every vertex v
becomes (v, IN) -> (v, OUT) with capacity 1 and every edge (u, v) becomes
(u, OUT) -> (v, IN).
"""

import itertools
import logging
from collections.abc import Hashable, Iterable, Mapping, Sequence

import networkx as nx
from networkx.algorithms.flow import edmonds_karp
from pydantic import BaseModel, Field

from app.core.errors import Errors, inconsistency
from app.models.graphs import AnalysisGraph, StructuredGraph, VertexKind

logger = logging.getLogger(__name__)

IN, OUT = 0, 1
SOURCE, SINK = ("source",), ("sink",)


class Linking(BaseModel):
    """Maximum linking size and a witness family of disjoint paths."""

    size: int
    paths: list[list[str]] = Field(default_factory=list)


class GroupedLinking(BaseModel):
    found: bool
    size: int
    required: int
    chosen_copies: dict[str, str] = Field(default_factory=dict)
    paths: list[list[str]] = Field(default_factory=list)


class ObservabilityCheck(BaseModel):
    observable: bool
    unreached_states: list[str] = Field(default_factory=list)
    matching_size: int
    required: int


def _split_graph(g: nx.DiGraph) -> nx.DiGraph:
    split = nx.DiGraph()
    for v in sorted(g.nodes, key=str):
        split.add_edge((v, IN), (v, OUT), capacity=1)
    for u, v in sorted(g.edges, key=str):
        split.add_edge((u, OUT), (v, IN), capacity=1)
    return split


def _flow_paths(
    flow: dict, starts: Sequence[tuple[Hashable, Hashable]]
) -> list[list[Hashable]]:
    """Walk the integral flow from each start (group label, first vertex)."""
    residual = {u: dict(targets) for u, targets in flow.items()}
    paths = []
    for _, first in starts:
        path = [first]
        node = (first, OUT)
        while True:
            nxt = next(
                (t for t in sorted(residual.get(node, {}), key=str) if residual[node][t] > 0),
                None,
            )
            if nxt is None:
                raise inconsistency("WITNESS_INVALID", f"flow ends early at {node!r}")
            residual[node][nxt] -= 1
            if nxt == SINK:
                break
            vertex = nxt[0]
            path.append(vertex)
            node = (vertex, OUT)
        paths.append(path)
    return paths


def _grouped_flow(
    g: nx.DiGraph, groups: Mapping[str, Sequence[Hashable]], sinks: Iterable[Hashable]
) -> tuple[int, dict[str, Hashable], list[list[Hashable]]]:
    """Max number of disjoint paths using at most one start vertex per group."""
    split = _split_graph(g)
    for label in sorted(groups):
        selector = ("group", label)
        split.add_edge(SOURCE, selector, capacity=1)
        for v in sorted(groups[label], key=str):
            split.add_edge(selector, (v, IN), capacity=1)
    for t in sorted(set(sinks), key=str):
        split.add_edge((t, OUT), SINK, capacity=1)
    if SINK not in split or not groups:
        return 0, {}, []

    value, flow = nx.maximum_flow(split, SOURCE, SINK, flow_func=edmonds_karp)
    chosen: dict[str, Hashable] = {}
    for label in sorted(groups):
        selector = ("group", label)
        for target, amount in sorted(flow.get(selector, {}).items(), key=lambda kv: str(kv[0])):
            if amount > 0:
                chosen[label] = target[0]
    starts = [(label, chosen[label]) for label in sorted(chosen)]
    paths = _flow_paths(flow, starts)
    return int(value), chosen, paths


def validate_witness(
    g: nx.DiGraph, paths: list[list[Hashable]], sources: set, sinks: set
) -> None:
    """Raise InternalInconsistency unless paths are simple, disjoint and source-to-sink."""
    seen: set[Hashable] = set()
    for path in paths:
        if not path or path[0] not in sources or path[-1] not in sinks:
            raise inconsistency("WITNESS_INVALID", f"path {path} does not link sources to sinks")
        if len(set(path)) != len(path):
            raise inconsistency("WITNESS_INVALID", f"path {path} is not simple")
        if seen & set(path):
            raise inconsistency("WITNESS_INVALID", f"path {path} is not vertex-disjoint")
        seen |= set(path)
        for u, v in zip(path, path[1:]):
            if not g.has_edge(u, v):
                raise inconsistency("WITNESS_INVALID", f"path {path} uses missing edge {u}->{v}")


def _as_digraph(g: nx.DiGraph | StructuredGraph) -> nx.DiGraph:
    return g.digraph() if isinstance(g, StructuredGraph) else g


def max_linking(
    g: nx.DiGraph | StructuredGraph, sources: Iterable[Hashable], sinks: Iterable[Hashable]
) -> Linking:
    """Maximum number of vertex-disjoint simple paths from sources to sinks."""
    digraph = _as_digraph(g)
    source_set = {s for s in sources if s in digraph}
    sink_set = {t for t in sinks if t in digraph}
    groups = {str(s): [s] for s in source_set}
    size, _, paths = _grouped_flow(digraph, groups, sink_set)
    validate_witness(digraph, paths, source_set, sink_set)
    paths.sort(key=lambda p: [str(v) for v in p])
    return Linking(size=size, paths=[[str(v) for v in p] for p in paths])


def has_grouped_linking(ag: AnalysisGraph, fault_nodes: Sequence[str], r: int) -> GroupedLinking:
    """Whether one copy per fault node can start an r-linking into the sink set."""
    if len(fault_nodes) != r:
        raise Errors.precondition(f"{len(fault_nodes)} fault nodes given for r={r}")
    groups = {}
    for v in fault_nodes:
        copies = ag.copies(v)
        if not copies:
            raise Errors.empty_gamma(v)
        groups[v] = list(copies)
    digraph = ag.graph.digraph()
    size, chosen, paths = _grouped_flow(digraph, groups, ag.sink_set)
    all_copies = {c for copies in groups.values() for c in copies}
    validate_witness(digraph, paths, all_copies, set(ag.sink_set))
    return GroupedLinking(
        found=size == r,
        size=size,
        required=r,
        chosen_copies={label: str(v) for label, v in chosen.items()},
        paths=[[str(v) for v in p] for p in sorted(paths, key=lambda p: [str(v) for v in p])],
    )


def observability_check(sg: StructuredGraph) -> ObservabilityCheck:
    """Output reachability plus full generic column rank.

    Interconnect vertices are kept as algebraic variables: each gets its own
    defining row, so a single interconnect still bounds the rank of
    everything funnelled through it.
    """
    g = sg.digraph()
    states = sg.state_vertices
    outputs = set(sg.output_vertices)
    interconnects = sg.interconnect_vertices

    unreached = [x for x in states if not (nx.descendants(g, x) & outputs)]

    columns = [*states, *interconnects]
    rows = set(columns) | outputs
    bipartite = nx.Graph()
    left = [("col", v) for v in columns]
    bipartite.add_nodes_from(left, bipartite=0)
    bipartite.add_nodes_from((("row", v) for v in sorted(rows)), bipartite=1)
    for v in columns:
        for succ in g.successors(v):
            if succ in rows:
                bipartite.add_edge(("col", v), ("row", succ))
    for w in interconnects:
        bipartite.add_edge(("col", w), ("row", w))
    matching = nx.bipartite.hopcroft_karp_matching(bipartite, top_nodes=left)
    matched = sum(1 for node in left if node in matching)

    return ObservabilityCheck(
        observable=not unreached and matched == len(columns),
        unreached_states=unreached,
        matching_size=matched,
        required=len(columns),
    )


def structurally_observable(sg: StructuredGraph) -> bool:
    return observability_check(sg).observable


def local_connectivity(g: nx.DiGraph, s: Hashable, t: Hashable) -> int:
    """Internally vertex-disjoint s->t paths; a direct edge counts as one path."""
    split = _split_graph(g)
    value, _ = nx.maximum_flow(split, (s, OUT), (t, IN), flow_func=edmonds_karp)
    return int(value)


def vertex_connectivity(g: nx.DiGraph | StructuredGraph) -> int:
    """Minimum local connectivity over ordered vertex pairs; 0 for fewer than two vertices."""
    digraph = _as_digraph(g)
    nodes = sorted(digraph.nodes, key=str)
    if len(nodes) < 2:
        return 0
    best = None
    for s, t in itertools.permutations(nodes, 2):
        k = local_connectivity(digraph, s, t)
        best = k if best is None else min(best, k)
        if best == 0:
            break
    return int(best or 0)


def plant_state_graph(sg: StructuredGraph) -> nx.DiGraph:
    """Plant states and the state-to-state edges among them."""
    states = set(sg.ids_of(VertexKind.PLANT_STATE))
    g = nx.DiGraph()
    g.add_nodes_from(sorted(states))
    g.add_edges_from(sorted(e for e in sg.edges if e[0] in states and e[1] in states and e[0] != e[1]))
    return g
