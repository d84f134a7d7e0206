"""Structured-graph builders: network blocks, plant, the full cascade and the analysis graph.

The plant graph is built from the nonzero pattern of the plant sampled at the
frame duration, the same system the numeric oracle evaluates.
"""

import logging
from collections.abc import Iterable

import numpy as np

from app.core.config import settings
from app.core.errors import Errors, inconsistency
from app.models.graphs import (
    AnalysisGraph,
    StructuredGraph,
    Vertex,
    VertexKind,
    copy_id,
    fault_id,
    input_id,
    interconnect_u_id,
    interconnect_y_id,
    network_state_id,
    output_id,
    plant_state_id,
)
from app.models.mcn import Mcn
from app.models.network import Side
from app.models.transfer import StateSpace
from app.services.dynamics import BlockCache, chain_length
from app.services.routing import fault_candidates, phi

logger = logging.getLogger(__name__)


def _block_terminals(side: Side, i: int) -> tuple[Vertex, Vertex]:
    if side is Side.CONTROLLABILITY:
        return (
            Vertex(id=input_id(i), kind=VertexKind.INPUT, index=i),
            Vertex(id=interconnect_u_id(i), kind=VertexKind.INTERCONNECT_U, index=i),
        )
    return (
        Vertex(id=interconnect_y_id(i), kind=VertexKind.INTERCONNECT_Y, index=i),
        Vertex(id=output_id(i), kind=VertexKind.OUTPUT, index=i),
    )


def build_block_structured(
    mcn: Mcn,
    side: Side,
    fault_nodes: Iterable[str] = (),
    merge_fault_components: bool = True,
    cache: BlockCache | None = None,
) -> StructuredGraph:
    """Graph of the R (or O) block: one shift chain per component plus fault vertices.

    Edges: input -> x_{i,d} when gamma_i(d) != 0, x_{i,d+1} -> x_{i,d},
    x_{i,1} -> output, and fault -> x_{i,d} when the fault coefficient is nonzero.
    Each chain covers the longest of the block and its attached fault transfers.
    """
    cache = cache or BlockCache(mcn)
    allowed = {c.node for c in fault_candidates(mcn) if c.side is side}
    faults = sorted(set(fault_nodes))
    for v in faults:
        if v not in allowed:
            raise Errors.unknown_fault_node(v)

    vertices: dict[str, Vertex] = {}
    edges: set[tuple[str, str]] = set()
    for i in mcn.components(side):
        fir = cache.block(side, i)
        attached = [cache.fault(side, i, v) for v in faults if i in phi(mcn, v, side)]
        source, sink = _block_terminals(side, i)
        vertices[source.id] = source
        vertices[sink.id] = sink
        for d in range(1, chain_length(fir, attached) + 1):
            sid = network_state_id(side, i, d)
            vertices[sid] = Vertex(
                id=sid, kind=VertexKind.NETWORK_STATE, side=side, component=i, delay=d
            )
            if d > 1:
                edges.add((sid, network_state_id(side, i, d - 1)))
        for d in fir.support():
            edges.add((source.id, network_state_id(side, i, d)))
        edges.add((network_state_id(side, i, 1), sink.id))

    for v in faults:
        for i in sorted(phi(mcn, v, side)):
            fid = fault_id(v) if merge_fault_components else fault_id(v, i)
            if fid not in vertices:
                vertices[fid] = Vertex(
                    id=fid,
                    kind=VertexKind.FAULT,
                    side=side,
                    node=v,
                    component=None if merge_fault_components else i,
                )
            for d in cache.fault(side, i, v).support():
                edges.add((fid, network_state_id(side, i, d)))

    return _checked_graph(vertices, edges)


def _checked_graph(vertices: dict[str, Vertex], edges: set[tuple[str, str]]) -> StructuredGraph:
    dangling = sorted(e for e in edges if e[0] not in vertices or e[1] not in vertices)
    if dangling:
        raise inconsistency("UNTYPED_VERTEX", f"edges reach undeclared vertices: {dangling}")
    return StructuredGraph(vertices=vertices, edges=frozenset(edges))


def _nonzero(matrix: np.ndarray, tol: float) -> np.ndarray:
    scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    return np.abs(matrix) > tol * scale


def build_plant_structured(plant: StateSpace, tol: float | None = None) -> StructuredGraph:
    """Plant graph: u~_j -> x_k (B), x_j -> x_k (A), x_k -> y~_i (C), u~_j -> y~_i (D)."""
    tol = settings.NONZERO_TOL if tol is None else tol
    vertices: dict[str, Vertex] = {}
    for j in range(1, plant.n_inputs + 1):
        vertices[interconnect_u_id(j)] = Vertex(
            id=interconnect_u_id(j), kind=VertexKind.INTERCONNECT_U, index=j
        )
    for k in range(1, plant.n_states + 1):
        vertices[plant_state_id(k)] = Vertex(
            id=plant_state_id(k), kind=VertexKind.PLANT_STATE, index=k
        )
    for i in range(1, plant.n_outputs + 1):
        vertices[interconnect_y_id(i)] = Vertex(
            id=interconnect_y_id(i), kind=VertexKind.INTERCONNECT_Y, index=i
        )

    edges: set[tuple[str, str]] = set()
    for k, j in zip(*np.nonzero(_nonzero(plant.A, tol))):
        edges.add((plant_state_id(j + 1), plant_state_id(k + 1)))
    for k, j in zip(*np.nonzero(_nonzero(plant.B, tol))):
        edges.add((interconnect_u_id(j + 1), plant_state_id(k + 1)))
    for i, k in zip(*np.nonzero(_nonzero(plant.C, tol))):
        edges.add((plant_state_id(k + 1), interconnect_y_id(i + 1)))
    for i, j in zip(*np.nonzero(_nonzero(plant.D, tol))):
        edges.add((interconnect_u_id(j + 1), interconnect_y_id(i + 1)))
    return _checked_graph(vertices, edges)


def plant_pattern(mcn: Mcn, cache: BlockCache | None = None) -> StateSpace:
    """The sampled plant, whose pattern defines the plant graph."""
    return (cache or BlockCache(mcn)).plant()


def build_mcn_structured(
    mcn: Mcn,
    fault_nodes: Iterable[str] = (),
    merge_flag: bool = True,
    cache: BlockCache | None = None,
) -> StructuredGraph:
    """Union of the R block, plant and O block graphs glued at the interconnects."""
    cache = cache or BlockCache(mcn)
    faults = sorted(set(fault_nodes))
    by_side: dict[Side, list[str]] = {side: [] for side in Side}
    for v in faults:
        side = mcn.side_of(v)
        if side is None:
            raise Errors.unknown_fault_node(v)
        by_side[side].append(v)

    graph = (
        build_block_structured(mcn, Side.CONTROLLABILITY, by_side[Side.CONTROLLABILITY], merge_flag, cache)
        .union(build_plant_structured(plant_pattern(mcn, cache)))
        .union(build_block_structured(mcn, Side.OBSERVABILITY, by_side[Side.OBSERVABILITY], merge_flag, cache))
    )
    _assert_bridges(graph)
    return graph


def _assert_bridges(graph: StructuredGraph) -> None:
    # merged fault vertices may legitimately join lanes, so check the fault-free skeleton
    skeleton = graph.without(VertexKind.FAULT)
    g = skeleton.digraph()
    candidates = [
        vid
        for vid in skeleton.interconnect_vertices
        if g.in_degree(vid) > 0 and g.out_degree(vid) > 0
    ]
    bridges = set(skeleton.weak_bridges(candidates))
    missing = [vid for vid in candidates if vid not in bridges]
    if missing:
        raise inconsistency("BRIDGE_ASSERTION", f"interconnect vertices are not bridges: {missing}")


def build_analysis_graph(mcn: Mcn, cache: BlockCache | None = None) -> AnalysisGraph:
    """Disjoint union of all routing subgraphs and the plant graph.

    Each radio node gets one copy per component whose routing subgraph
    contains it; actuator copies feed u~_i and y~_i feeds the sensor copy.
    """
    cache = cache or BlockCache(mcn)
    vertices: dict[str, Vertex] = {}
    edges: set[tuple[str, str]] = set()
    gamma: dict[Side, dict[str, list[str]]] = {
        side: {v: [] for v in mcn.graph(side).nodes} for side in Side
    }

    for side in Side:
        for i in mcn.components(side):
            sub = cache.subgraph(side, i)
            for node in sub.nodes:
                cid = copy_id(node, side, i)
                vertices[cid] = Vertex(
                    id=cid, kind=VertexKind.RELAY, side=side, component=i, node=node
                )
                gamma[side][node].append(cid)
            for a, b in sub.edges:
                edges.add((copy_id(a, side, i), copy_id(b, side, i)))

    plant = build_plant_structured(plant_pattern(mcn, cache))
    vertices.update(plant.vertices)
    edges |= plant.edges
    for i in mcn.components(Side.CONTROLLABILITY):
        actuator = mcn.g_r.terminal(i)
        edges.add((copy_id(actuator, Side.CONTROLLABILITY, i), interconnect_u_id(i)))
    for i in mcn.components(Side.OBSERVABILITY):
        sensor = mcn.g_o.terminal(i)
        edges.add((interconnect_y_id(i), copy_id(sensor, Side.OBSERVABILITY, i)))

    sink_set = tuple(
        copy_id(mcn.g_o.controller, Side.OBSERVABILITY, i) for i in mcn.components(Side.OBSERVABILITY)
    )
    logger.debug(f"Analysis graph: {len(vertices)} vertices, {len(edges)} edges")
    return AnalysisGraph(
        graph=StructuredGraph(vertices=vertices, edges=frozenset(edges)),
        gamma_r={v: tuple(sorted(c)) for v, c in gamma[Side.CONTROLLABILITY].items()},
        gamma_o={v: tuple(sorted(c)) for v, c in gamma[Side.OBSERVABILITY].items()},
        sink_set=sink_set,
    )


def export_graph(graph: StructuredGraph | AnalysisGraph) -> str:
    """Plain-text export: sorted, tab-separated vertex and edge sections."""
    analysis = graph if isinstance(graph, AnalysisGraph) else None
    sg = analysis.graph if analysis else graph
    lines = ["# mcn-fdi graph v1", "# vertices"]
    for vid in sorted(sg.vertices):
        vertex = sg.vertices[vid]
        lines.append(f"{vid}\t{vertex.kind.value}\t{vertex.attrs()}")
    lines.append("# edges")
    lines.extend(f"{a}\t{b}" for a, b in sorted(sg.edges))
    if analysis:
        lines.append("# gamma")
        for side in Side:
            for node, copies in sorted(analysis.gamma(side).items()):
                lines.append(f"{node}\t{side.tag}\t{','.join(copies) or '-'}")
        lines.append("# sinks")
        lines.extend(analysis.sink_set)
    return "\n".join(lines) + "\n"
