"""Config ingestion: JSON document -> validated Mcn."""

import logging
from pathlib import Path

from pydantic import ValidationError

from app.core.error_handlers import from_validation_error
from app.core.errors import Errors, config_error, unknown_node
from app.models.mcn import Mcn
from app.models.network import (
    ComponentSchedule,
    ComponentWeights,
    Edge,
    Plant,
    RadioGraph,
    Side,
    format_edge,
)
from app.schemas.config import McnDocument, NetworkDocument, ScheduleDocument, WeightsDocument
from app.services.routing import phi, validate_mcn

logger = logging.getLogger(__name__)


def _radio_graph(doc: NetworkDocument, side: Side, terminals: list[str]) -> RadioGraph:
    section = side.value
    nodes = set(doc.nodes)
    if len(nodes) != len(doc.nodes):
        dupes = sorted({v for v in doc.nodes if doc.nodes.count(v) > 1})
        raise config_error(f"{section}: duplicate node ids {dupes}")
    for role, node in [("controller", doc.controller), *(("terminal", t) for t in terminals)]:
        if node not in nodes:
            raise unknown_node(node, where=f"{section} {role}")
    edges = set()
    for edge in doc.edges:
        for node in edge:
            if node not in nodes:
                raise unknown_node(node, where=f"{section} edge {format_edge(edge)}")
        if edge in edges:
            raise config_error(f"{section}: duplicate edge {format_edge(edge)}")
        edges.add(edge)
    return RadioGraph(
        side=side,
        nodes=frozenset(nodes),
        edges=frozenset(edges),
        controller=doc.controller,
        terminals=tuple(terminals),
    )


def _schedule(
    doc: ScheduleDocument, graph: RadioGraph, frame_length: int, where: str
) -> ComponentSchedule:
    slots: dict[int, frozenset[Edge]] = {}
    seen: dict[Edge, int] = {}
    for key in sorted(doc, key=lambda k: (len(k), k)):
        try:
            slot = int(key)
        except ValueError:
            raise config_error(f"{where}: slot key '{key}' is not an integer")
        if not 1 <= slot <= frame_length:
            raise config_error(f"{where}: slot {slot} outside frame 1..{frame_length}")
        if slot in slots:
            raise config_error(f"{where}: slot {slot} listed twice")
        for edge in doc[key]:
            for node in edge:
                if node not in graph.nodes:
                    raise unknown_node(node, where=f"{where} slot {slot}")
            if edge not in graph.edges:
                raise config_error(f"{where}: {format_edge(edge)} is not a declared radio link")
            if edge in seen:
                raise Errors.link_scheduled_twice(format_edge(edge), [seen[edge], slot])
            seen[edge] = slot
        slots[slot] = frozenset(doc[key])
    return ComponentSchedule(frame_length=frame_length, slots=slots)


def _weights(
    doc: WeightsDocument | None, sched: ComponentSchedule, where: str
) -> ComponentWeights:
    if doc is None:
        return ComponentWeights.unit(sched.edges)
    weights: dict[Edge, float] = {}
    for key, value in doc.items():
        parts = key.split("->")
        if len(parts) != 2 or not all(p.strip() for p in parts):
            raise config_error(f"{where}: weight key '{key}' is not of the form 'a->b'")
        edge = (parts[0].strip(), parts[1].strip())
        if edge not in sched.edges:
            raise config_error(f"{where}: weight given for unscheduled link {key}")
        weights[edge] = value
    missing = sorted(format_edge(e) for e in sched.edges - weights.keys())
    if missing:
        raise config_error(f"{where}: missing weights for {missing}")
    return ComponentWeights(weights=weights)


def build_mcn(doc: McnDocument, *, strict: bool = True) -> Mcn:
    """Turn a parsed document into a validated Mcn."""
    plant = Plant(kind=doc.plant.kind, A=doc.plant.A, B=doc.plant.B, C=doc.plant.C)
    dims = [
        ("actuators", len(doc.controllability.actuators), plant.m),
        ("sensors", len(doc.observability.sensors), plant.ell),
        ("schedules_r", len(doc.schedules_r), plant.m),
        ("schedules_o", len(doc.schedules_o), plant.ell),
    ]
    if doc.weights_r is not None:
        dims.append(("weights_r", len(doc.weights_r), plant.m))
    if doc.weights_o is not None:
        dims.append(("weights_o", len(doc.weights_o), plant.ell))
    for name, got, expected in dims:
        if got != expected:
            raise Errors.dimension_mismatch(f"{name} has {got} entries, plant needs {expected}")

    g_r = _radio_graph(doc.controllability, Side.CONTROLLABILITY, doc.controllability.actuators)
    g_o = _radio_graph(doc.observability, Side.OBSERVABILITY, doc.observability.sensors)
    shared = sorted(g_r.nodes & g_o.nodes)
    if shared:
        raise config_error(f"node ids must be unique across both networks: {shared}")

    schedules: dict[Side, list[ComponentSchedule]] = {}
    weights: dict[Side, list[ComponentWeights]] = {}
    for side, graph, sched_docs, weight_docs in (
        (Side.CONTROLLABILITY, g_r, doc.schedules_r, doc.weights_r),
        (Side.OBSERVABILITY, g_o, doc.schedules_o, doc.weights_o),
    ):
        schedules[side] = []
        weights[side] = []
        for i, sched_doc in enumerate(sched_docs, start=1):
            where = f"{'schedules_r' if side is Side.CONTROLLABILITY else 'schedules_o'}[{i}]"
            sched = _schedule(sched_doc, graph, doc.frame_length, where)
            schedules[side].append(sched)
            weight_doc = weight_docs[i - 1] if weight_docs is not None else None
            weights[side].append(_weights(weight_doc, sched, where.replace("schedules", "weights")))

    if doc.fault_candidates is not None:
        for node in doc.fault_candidates:
            if node not in g_r.nodes and node not in g_o.nodes:
                raise unknown_node(node, where="fault_candidates")

    mcn = Mcn(
        plant=plant,
        g_r=g_r,
        g_o=g_o,
        schedules_r=tuple(schedules[Side.CONTROLLABILITY]),
        schedules_o=tuple(schedules[Side.OBSERVABILITY]),
        weights_r=tuple(weights[Side.CONTROLLABILITY]),
        weights_o=tuple(weights[Side.OBSERVABILITY]),
        delta=doc.delta,
        fault_candidates=tuple(doc.fault_candidates) if doc.fault_candidates is not None else None,
    )

    if mcn.fault_candidates is not None:
        for node in mcn.fault_candidates:
            if not phi(mcn, node):
                raise config_error(
                    f"fault candidate '{node}' has no outgoing scheduled link", {"node": node}
                )

    if strict:
        violations = [v for report in validate_mcn(mcn) for v in report.violations]
        if violations:
            for violation in violations:
                logger.warning(f"Routing violation: {violation.message}")
            raise Errors.routing_violation(
                violations[0].message,
                [{"kind": v.kind.value, "message": v.message} for v in violations],
            )
    return mcn


def load_mcn(config_document: str, *, strict: bool = True) -> Mcn:
    """Parse a JSON config document into a validated Mcn.

    Raises ConfigError on syntax errors (with line/column), schema errors
    (with field path), dimension mismatches, unknown nodes, doubly
    scheduled links and, when strict, routing-shape violations.
    """
    try:
        doc = McnDocument.model_validate_json(config_document)
        mcn = build_mcn(doc, strict=strict)
    except ValidationError as exc:
        raise from_validation_error(exc)
    logger.info(
        f"Loaded MCN: n={mcn.plant.n} m={mcn.m} ell={mcn.ell} "
        f"|V_R|={len(mcn.g_r.nodes)} |V_O|={len(mcn.g_o.nodes)}"
    )
    return mcn


def load_mcn_file(path: str | Path, *, strict: bool = True) -> Mcn:
    text = Path(path).read_text(encoding="utf-8")
    logger.debug(f"Read config {path} ({len(text)} bytes)")
    return load_mcn(text, strict=strict)
