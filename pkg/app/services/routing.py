"""Induced routing subgraphs, routing-shape validation and node/component maps."""

import logging
from collections.abc import Iterable

import networkx as nx

from app.core.errors import Errors, unknown_node
from app.models.mcn import Mcn
from app.models.network import (
    ComponentSchedule,
    RadioGraph,
    Side,
    ValidationReport,
    Violation,
    ViolationKind,
)
from app.models.scenario import FaultNode, FaultScenario

logger = logging.getLogger(__name__)


def induced_subgraph(
    g: RadioGraph, sched: ComponentSchedule, component: int | None = None
) -> RadioGraph:
    """Union of the edges scheduled over one frame, on their incident nodes.

    The controller and the component's terminal are always kept, so an empty
    schedule yields a graph with those two nodes and no edge.
    """
    edges = sched.edges
    nodes = {node for edge in edges for node in edge}
    nodes.add(g.controller)
    terminals: tuple[str, ...]
    if component is not None:
        terminals = (g.terminals[component - 1],)
    else:
        terminals = tuple(t for t in g.terminals if t in nodes)
    nodes.update(terminals)
    return RadioGraph(
        side=g.side,
        nodes=frozenset(nodes),
        edges=edges,
        controller=g.controller,
        terminals=terminals,
        component=component,
    )


def routing_digraph(sub: RadioGraph) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(sub.nodes))
    graph.add_edges_from(sorted(sub.edges))
    return graph


def validate_routing_shape(sub: RadioGraph, i: int) -> ValidationReport:
    """Check that sub is a weakly connected DAG covered by source-to-sink paths."""
    report = ValidationReport(side=sub.side, component=i)
    where = f"{sub.side.tag}{i}"
    source, sink = sub.source(i), sub.sink(i)
    graph = routing_digraph(sub)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = [edge[0] for edge in nx.find_cycle(graph)]
        report.violations.append(
            Violation(
                kind=ViolationKind.CYCLIC,
                message=f"{where}: cyclic routing subgraph ({' -> '.join(cycle + cycle[:1])})",
            )
        )

    if not nx.is_weakly_connected(graph):
        parts = sorted(sorted(c) for c in nx.weakly_connected_components(graph))
        report.violations.append(
            Violation(
                kind=ViolationKind.NOT_WEAKLY_CONNECTED,
                message=f"{where}: routing subgraph is not weakly connected: {parts}",
            )
        )

    reachable = nx.descendants(graph, source) | {source}
    if sink not in reachable:
        report.violations.append(
            Violation(
                kind=ViolationKind.NO_ROUTE,
                message=f"{where}: no routing path from '{source}' to '{sink}'",
            )
        )
        return report

    # in a DAG a node lies on a simple source->sink path iff it is reachable
    # from the source and reaches the sink
    co_reachable = nx.ancestors(graph, sink) | {sink}
    for node in sorted(sub.nodes):
        if node not in reachable or node not in co_reachable:
            report.violations.append(
                Violation(
                    kind=ViolationKind.NODE_NOT_ON_ROUTING_PATH,
                    message=f"{where}: node not on routing path: '{node}'",
                )
            )
    return report


def component_subgraph(mcn: Mcn, side: Side, i: int) -> RadioGraph:
    return induced_subgraph(mcn.graph(side), mcn.schedules(side)[i - 1], component=i)


def validate_mcn(mcn: Mcn) -> list[ValidationReport]:
    """Routing-shape report for every component on both sides."""
    reports = []
    for side in Side:
        for i in mcn.components(side):
            reports.append(validate_routing_shape(component_subgraph(mcn, side, i), i))
    return reports


def side_of(mcn: Mcn, v: str) -> Side:
    side = mcn.side_of(v)
    if side is None:
        raise unknown_node(v)
    return side


def phi(mcn: Mcn, v: str, side: Side | None = None) -> frozenset[int]:
    """Components whose schedule has an outgoing edge at v."""
    side = side or side_of(mcn, v)
    if v not in mcn.graph(side).nodes:
        raise unknown_node(v, where=f"{side.value} network")
    return frozenset(
        i
        for i, sched in zip(mcn.components(side), mcn.schedules(side))
        if any(edge[0] == v for edge in sched.edges)
    )


def fault_candidates(mcn: Mcn) -> list[FaultNode]:
    """Nodes that may fail, sorted by id.

    Relays routed by at least one schedule by default; an explicit list in the
    config replaces the default but must only name routed nodes.
    """
    if mcn.fault_candidates is not None:
        names: Iterable[str] = mcn.fault_candidates
    else:
        names = [
            v
            for side in Side
            for v in mcn.graph(side).relay_nodes
            if phi(mcn, v, side)
        ]
    return [FaultNode(node=v, side=side_of(mcn, v)) for v in sorted(set(names))]


def make_scenario(mcn: Mcn, names: Iterable[str], assumption1: bool = True) -> FaultScenario:
    """Build a scenario from node ids, checking each against the candidate set."""
    candidates = {c.node: c for c in fault_candidates(mcn)}
    nodes = []
    for name in names:
        if name not in candidates:
            if mcn.side_of(name) is None:
                raise unknown_node(name)
            raise Errors.unknown_fault_node(name)
        nodes.append(candidates[name])
    if not nodes:
        raise Errors.precondition("a fault scenario needs at least one node")
    if len({n.node for n in nodes}) != len(nodes):
        raise Errors.precondition("scenario nodes must be distinct")
    return FaultScenario(nodes=tuple(nodes), assumption1=assumption1)


def check_scenario(mcn: Mcn, scenario: FaultScenario) -> None:
    candidates = {c.node: c.side for c in fault_candidates(mcn)}
    for fault in scenario.nodes:
        if candidates.get(fault.node) is not fault.side:
            raise Errors.unknown_fault_node(fault.node)
