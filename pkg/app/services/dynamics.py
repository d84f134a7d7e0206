"""Network FIR transfers, their realizations, plant discretization and the R-P-O cascade.

Delay rule: a datum crosses consecutive links within one frame while slot
numbers strictly increase and waits for the next frame otherwise, so a path
needs 1 + (number of non-increasing consecutive slot pairs) frames.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Sequence

import networkx as nx
import numpy as np
from scipy.linalg import block_diag, expm

from app.core.config import settings
from app.core.errors import Errors, no_path, precondition
from app.models.mcn import Mcn
from app.models.network import (
    ComponentSchedule,
    ComponentWeights,
    Edge,
    Plant,
    PlantKind,
    RadioGraph,
    Side,
    format_edge,
)
from app.models.scenario import FaultScenario
from app.models.transfer import FaultChannel, FaultTap, FirTransfer, StateSpace
from app.services.routing import component_subgraph, phi, routing_digraph

logger = logging.getLogger(__name__)


def path_delay(path: Sequence[Edge], sched: ComponentSchedule) -> int:
    """Frames needed to traverse path under per-frame slot order."""
    slots = []
    for edge in path:
        slot = sched.slot_of(edge)
        if slot is None:
            raise Errors.unscheduled_edge(format_edge(edge))
        slots.append(slot)
    return 1 + sum(1 for a, b in zip(slots, slots[1:]) if b <= a)


def _label(sub: RadioGraph) -> str:
    return f"{sub.side.tag}{sub.component}" if sub.component is not None else sub.side.tag


def block_transfer(
    sub: RadioGraph,
    w: ComponentWeights,
    sched: ComponentSchedule,
    source: str,
    sink: str,
) -> FirTransfer:
    """gamma(d) = sum over simple source->sink paths of delay d of the weight products."""
    where = _label(sub)
    if source == sink or source not in sub.nodes or sink not in sub.nodes:
        raise no_path(source, sink, where)
    graph = routing_digraph(sub)

    terms: dict[int, list[float]] = defaultdict(list)
    for path in sorted(nx.all_simple_edge_paths(graph, source, sink)):
        product = math.prod(w.weight(edge) for edge in path)
        terms[path_delay(path, sched)].append(product)
    if not terms:
        raise no_path(source, sink, where)

    raw_max = max(terms)
    gamma = []
    for d in range(1, raw_max + 1):
        values = terms.get(d, [])
        total = math.fsum(values)
        scale = math.fsum(abs(v) for v in values)
        gamma.append(0.0 if abs(total) <= settings.NONZERO_TOL * scale else total)
    while gamma and gamma[-1] == 0.0:
        gamma.pop()
    if not gamma:
        raise Errors.degenerate_cancellation(source, sink, where)
    return FirTransfer(gamma=tuple(gamma))


def fault_transfer(
    sub: RadioGraph, w: ComponentWeights, sched: ComponentSchedule, v: str, sink: str
) -> FirTransfer:
    """Transfer from a signal injected at node v to the sink of the component."""
    return block_transfer(sub, w, sched, v, sink)


def chain_length(f: FirTransfer, attached_faults: Sequence[FirTransfer] = ()) -> int:
    return max([f.max_delay, *(fault.max_delay for fault in attached_faults)])


def fir_realization(
    f: FirTransfer,
    attached_faults: Sequence[FirTransfer] = (),
    *,
    prefix: str = "x",
) -> StateSpace:
    """Shift-register realization with one state per delay.

    The chain is as long as the longest of f and the attached faults: partial
    cancellation can trim f below a fault transfer of the same component.
    """
    if f is None:
        raise precondition("cannot realize an empty FIR transfer")
    size = chain_length(f, attached_faults)
    a = np.eye(size, k=1)
    b = np.zeros((size, 1))
    b[: f.max_delay, 0] = f.gamma
    c = np.zeros((1, size))
    c[0, 0] = 1.0
    fault_matrix = None
    if attached_faults:
        fault_matrix = np.zeros((size, len(attached_faults)))
        for col, fault in enumerate(attached_faults):
            fault_matrix[: fault.max_delay, col] = fault.gamma
    return StateSpace(
        A=a,
        B=b,
        C=c,
        F=fault_matrix,
        state_labels=tuple(f"{prefix}.{d}" for d in range(1, size + 1)),
    )


def discretize_plant(p: Plant, T: float) -> StateSpace:
    """Zero-order-hold discretization through exp([[A, B], [0, 0]] T)."""
    n, m = p.n, p.m
    labels = {
        "state_labels": tuple(f"x{k}" for k in range(1, n + 1)),
        "input_labels": tuple(f"u~{j}" for j in range(1, m + 1)),
        "output_labels": tuple(f"y~{i}" for i in range(1, p.ell + 1)),
    }
    if p.kind is PlantKind.DISCRETE:
        logger.debug("Plant already discrete, used as sampled at the frame duration")
        return StateSpace(A=p.a, B=p.b, C=p.c, **labels)
    augmented = np.block([[p.a, p.b], [np.zeros((m, n)), np.zeros((m, m))]])
    phi_matrix = expm(augmented * T)
    return StateSpace(A=phi_matrix[:n, :n], B=phi_matrix[:n, n:], C=p.c, **labels)


def compose_mcn(
    r_blocks: Sequence[StateSpace],
    plant_d: StateSpace,
    o_blocks: Sequence[StateSpace],
    fault_wiring: Sequence[FaultChannel] = (),
) -> StateSpace:
    """Cascade O(z) P(z) R(z) with global fault inputs.

    Composite state (x_R, x_P, x_O):
        A = [[A_R, 0, 0], [B_P C_R, A_P, 0], [B_O D_P C_R, B_O C_P, A_O]]
        B = [B_R; 0; 0], F = [F_R; 0; F_O], C = [0, 0, C_O]
    """
    m, ell = plant_d.n_inputs, plant_d.n_outputs
    if len(r_blocks) != m or len(o_blocks) != ell:
        raise Errors.dimension_mismatch(
            f"{len(r_blocks)} R blocks / {len(o_blocks)} O blocks for a {ell}x{m} plant"
        )
    for block in (*r_blocks, *o_blocks):
        if block.n_inputs != 1 or block.n_outputs != 1:
            raise Errors.dimension_mismatch("network blocks must be single-input single-output")

    a_r = block_diag(*(b.A for b in r_blocks))
    b_r = block_diag(*(b.B for b in r_blocks))
    c_r = block_diag(*(b.C for b in r_blocks))
    a_o = block_diag(*(b.A for b in o_blocks))
    b_o = block_diag(*(b.B for b in o_blocks))
    c_o = block_diag(*(b.C for b in o_blocks))
    n_r, n_p, n_o = a_r.shape[0], plant_d.n_states, a_o.shape[0]
    total = n_r + n_p + n_o

    a = np.zeros((total, total))
    a[:n_r, :n_r] = a_r
    a[n_r : n_r + n_p, :n_r] = plant_d.B @ c_r
    a[n_r : n_r + n_p, n_r : n_r + n_p] = plant_d.A
    a[n_r + n_p :, :n_r] = b_o @ plant_d.D @ c_r
    a[n_r + n_p :, n_r : n_r + n_p] = b_o @ plant_d.C
    a[n_r + n_p :, n_r + n_p :] = a_o
    b = np.zeros((total, m))
    b[:n_r, :] = b_r
    c = np.zeros((ell, total))
    c[:, n_r + n_p :] = c_o

    offsets = {
        Side.CONTROLLABILITY: np.cumsum([0, *(blk.n_states for blk in r_blocks)]),
        Side.OBSERVABILITY: n_r + n_p + np.cumsum([0, *(blk.n_states for blk in o_blocks)]),
    }
    blocks = {Side.CONTROLLABILITY: r_blocks, Side.OBSERVABILITY: o_blocks}

    fault_matrix = None
    if fault_wiring:
        fault_matrix = np.zeros((total, len(fault_wiring)))
        for col, channel in enumerate(fault_wiring):
            for tap in channel.taps:
                block = blocks[tap.side][tap.component - 1]
                if block.F is None or tap.column >= block.n_faults:
                    raise Errors.dimension_mismatch(
                        f"fault channel '{channel.label}' taps a missing block column"
                    )
                start = int(offsets[tap.side][tap.component - 1])
                fault_matrix[start : start + block.n_states, col] += block.F[:, tap.column]

    state_labels = (
        *(lbl for i, blk in enumerate(r_blocks, 1) for lbl in _state_labels(blk, f"r{i}.x")),
        *(f"p.{lbl}" for lbl in _state_labels(plant_d, "x")),
        *(lbl for i, blk in enumerate(o_blocks, 1) for lbl in _state_labels(blk, f"o{i}.x")),
    )
    return StateSpace(
        A=a,
        B=b,
        C=c,
        F=fault_matrix,
        state_labels=state_labels,
        input_labels=tuple(f"u{j}" for j in range(1, m + 1)),
        output_labels=tuple(f"y{i}" for i in range(1, ell + 1)),
        fault_labels=tuple(ch.label for ch in fault_wiring),
    )


def _state_labels(block: StateSpace, prefix: str) -> tuple[str, ...]:
    return block.state_labels or tuple(f"{prefix}{k}" for k in range(1, block.n_states + 1))


class BlockCache:
    """Lazily computed per-component subgraphs and FIR transfers of one Mcn."""

    def __init__(self, mcn: Mcn):
        self.mcn = mcn
        self._subgraphs: dict[tuple[Side, int], RadioGraph] = {}
        self._blocks: dict[tuple[Side, int], FirTransfer] = {}
        self._faults: dict[tuple[Side, int, str], FirTransfer] = {}
        self._plant: StateSpace | None = None

    def subgraph(self, side: Side, i: int) -> RadioGraph:
        key = (side, i)
        if key not in self._subgraphs:
            self._subgraphs[key] = component_subgraph(self.mcn, side, i)
        return self._subgraphs[key]

    def block(self, side: Side, i: int) -> FirTransfer:
        key = (side, i)
        if key not in self._blocks:
            sub = self.subgraph(side, i)
            self._blocks[key] = block_transfer(
                sub,
                self.mcn.weights(side)[i - 1],
                self.mcn.schedules(side)[i - 1],
                sub.source(i),
                sub.sink(i),
            )
        return self._blocks[key]

    def fault(self, side: Side, i: int, v: str) -> FirTransfer:
        key = (side, i, v)
        if key not in self._faults:
            sub = self.subgraph(side, i)
            self._faults[key] = fault_transfer(
                sub,
                self.mcn.weights(side)[i - 1],
                self.mcn.schedules(side)[i - 1],
                v,
                sub.sink(i),
            )
        return self._faults[key]

    def plant(self) -> StateSpace:
        """The plant sampled at the frame duration."""
        if self._plant is None:
            self._plant = discretize_plant(self.mcn.plant, self.mcn.frame_duration)
        return self._plant


def realize_mcn(
    mcn: Mcn, scenario: FaultScenario | None = None, cache: BlockCache | None = None
) -> StateSpace:
    """Composed state-space model of mcn with the scenario's fault inputs.

    With merged fault signals each faulty node drives one input shared by all the
    components it routes; otherwise every (node, component) pair gets its own.
    """
    cache = cache or BlockCache(mcn)
    attached: dict[tuple[Side, int], list[str]] = defaultdict(list)
    channels: list[FaultChannel] = []
    for fault in scenario.nodes if scenario else ():
        components = sorted(phi(mcn, fault.node, fault.side))
        taps = []
        for i in components:
            column = len(attached[(fault.side, i)])
            attached[(fault.side, i)].append(fault.node)
            taps.append(FaultTap(side=fault.side, component=i, column=column))
        if scenario is not None and scenario.assumption1:
            channels.append(FaultChannel(label=f"f[{fault.node}]", taps=tuple(taps)))
        else:
            channels.extend(
                FaultChannel(label=f"f[{fault.node}].{tap.component}", taps=(tap,)) for tap in taps
            )

    blocks = {}
    for side in Side:
        blocks[side] = [
            fir_realization(
                cache.block(side, i),
                [cache.fault(side, i, v) for v in attached[(side, i)]],
                prefix=f"x{side.tag.lower()}{i}",
            )
            for i in mcn.components(side)
        ]
    return compose_mcn(
        blocks[Side.CONTROLLABILITY], cache.plant(), blocks[Side.OBSERVABILITY], channels
    )
