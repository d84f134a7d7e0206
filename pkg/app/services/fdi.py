"""FDI decision procedures.

FdiService bundles the procedures around one Mcn and caches the routing
subgraphs, FIR transfers and the analysis graph they share. The module-level
functions are single-call conveniences around it.
"""

import itertools
import logging
import math
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from functools import cached_property

import networkx as nx

from app.core.config import settings
from app.core.errors import Errors, inconsistency, precondition
from app.models.graphs import AnalysisGraph, StructuredGraph, VertexKind, fault_id
from app.models.mcn import Mcn
from app.models.network import Side
from app.models.scenario import (
    EnumerationSummary,
    FaultScenario,
    FdiReport,
    Method,
    ScenarioEnumeration,
    SignatureCheck,
    SufficientConditionResult,
    Verdict,
)
from app.services.dynamics import BlockCache
from app.services.linking import (
    has_grouped_linking,
    max_linking,
    observability_check,
    plant_state_graph,
    vertex_connectivity,
)
from app.services.routing import check_scenario, fault_candidates, phi, side_of
from app.services.structured import (
    build_analysis_graph,
    build_mcn_structured,
    build_plant_structured,
    plant_pattern,
)

logger = logging.getLogger(__name__)

ENUMERATION_METHODS = ("mlambda", "analysis", "both", "no_assumption1")


class FdiService:
    """Service class for FDI solvability questions on one Mcn."""

    def __init__(self, mcn: Mcn):
        self.mcn = mcn
        self.cache = BlockCache(mcn)

    @cached_property
    def analysis_graph(self) -> AnalysisGraph:
        return build_analysis_graph(self.mcn, self.cache)

    @cached_property
    def fault_free_graph(self) -> StructuredGraph:
        return build_mcn_structured(self.mcn, (), True, self.cache)

    def warm_up(self) -> None:
        """Compute the shared graphs before scenarios run on worker threads."""
        for side in Side:
            for i in self.mcn.components(side):
                self.cache.block(side, i)
        _ = self.analysis_graph
        _ = self.fault_free_graph

    # ------------------------------------------------------------------
    # Single scenarios
    # ------------------------------------------------------------------
    def mlambda(self, scenario: FaultScenario) -> FdiReport:
        """Observability of the cascade plus an r-linking from merged faults to outputs."""
        if not scenario.assumption1:
            raise precondition("the cascade-graph test needs merged fault signals")
        check_scenario(self.mcn, scenario)
        sg = build_mcn_structured(self.mcn, scenario.names, True, self.cache)
        obs = observability_check(sg)
        link = max_linking(sg, [fault_id(v) for v in scenario.names], sg.output_vertices)

        diagnostics = []
        if not obs.observable:
            diagnostics.append(_observability_diagnostic(obs.unreached_states, obs.matching_size, obs.required))
        if link.size < scenario.r:
            diagnostics.append(
                f"condition (ii) failed: max linking from faults to outputs is {link.size} < r={scenario.r}"
            )
        solvable = obs.observable and link.size == scenario.r
        logger.debug(f"mlambda {scenario.label()}: k={link.size} observable={obs.observable}")
        return FdiReport(
            scenario=scenario,
            method=Method.MLAMBDA,
            verdict=Verdict.SOLVABLE if solvable else Verdict.UNSOLVABLE,
            required=scenario.r,
            linking_size=link.size,
            observable=obs.observable,
            witness=link.paths,
            diagnostics=diagnostics,
        )

    def analysis(self, scenario: FaultScenario) -> FdiReport:
        """One copy per faulty node starting an r-linking into the controller copies."""
        if not scenario.assumption1:
            raise precondition("the analysis-graph test needs merged fault signals")
        check_scenario(self.mcn, scenario)
        grouped = has_grouped_linking(self.analysis_graph, list(scenario.names), scenario.r)
        diagnostics = []
        if not grouped.found:
            diagnostics.append(
                f"no {scenario.r}-linking from one copy per node to the sink set "
                f"(best {grouped.size})"
            )
        return FdiReport(
            scenario=scenario,
            method=Method.ANALYSIS_GRAPH,
            verdict=Verdict.SOLVABLE if grouped.found else Verdict.UNSOLVABLE,
            required=scenario.r,
            linking_size=grouped.size,
            witness=grouped.paths,
            chosen_copies=grouped.chosen_copies,
            diagnostics=diagnostics,
        )

    def cross_check(self, scenario: FaultScenario) -> tuple[FdiReport, FdiReport]:
        """Run both linking tests; they must agree."""
        by_cascade = self.mlambda(scenario)
        by_analysis = self.analysis(scenario)
        if by_cascade.linking_found != by_analysis.linking_found:
            raise inconsistency(
                "LINKING_DISAGREEMENT",
                f"cascade and analysis graphs disagree on {scenario.label()}: "
                f"k={by_cascade.linking_size} vs {by_analysis.linking_size}",
                {"scenario": list(scenario.names)},
            )
        by_cascade.agreement = True
        by_analysis.agreement = True
        if by_cascade.solvable != by_analysis.solvable:
            # agreement covers the linkings; only the cascade test checks observability
            note = (
                f"linking tests agree (k={by_cascade.linking_size}), verdicts differ: "
                "the cascade graph is not structurally observable"
            )
            by_cascade.diagnostics.append(note)
            by_analysis.diagnostics.append(note)
        return by_cascade, by_analysis

    def no_assumption1(self, scenario: FaultScenario) -> FdiReport:
        """Per-component fault signals: each signal must be isolable from all the others."""
        if scenario.assumption1:
            raise precondition("the per-component test needs unmerged fault signals")
        check_scenario(self.mcn, scenario)
        sg = build_mcn_structured(self.mcn, scenario.names, False, self.cache)
        obs = observability_check(sg)
        signals = {
            (f.node, i): fault_id(f.node, i)
            for f in scenario.nodes
            for i in sorted(phi(self.mcn, f.node, f.side))
        }
        checks = []
        for (node, component) in sorted(signals):
            sources = [
                fid for (v, i), fid in sorted(signals.items()) if v != node or i == component
            ]
            link = max_linking(sg, sources, sg.output_vertices)
            checks.append(
                SignatureCheck(
                    node=node,
                    component=component,
                    sources=sources,
                    linking_size=link.size,
                    required=len(sources),
                    witness=link.paths,
                )
            )

        diagnostics = []
        if not obs.observable:
            diagnostics.append(_observability_diagnostic(obs.unreached_states, obs.matching_size, obs.required))
        failed = [c for c in checks if not c.passed]
        for check in failed:
            diagnostics.append(
                f"signal {fault_id(check.node, check.component)}: linking {check.linking_size} "
                f"< {check.required} from {check.sources}"
            )
        solvable = obs.observable and not failed
        return FdiReport(
            scenario=scenario,
            method=Method.NO_ASSUMPTION1,
            verdict=Verdict.SOLVABLE if solvable else Verdict.UNSOLVABLE,
            required=scenario.r,
            linking_size=min((c.linking_size for c in checks), default=0),
            observable=obs.observable,
            witness=failed[0].witness if failed else (checks[0].witness if checks else []),
            checks=checks,
            diagnostics=diagnostics,
        )

    def evaluate(self, scenario: FaultScenario, method: str) -> FdiReport:
        if method == "mlambda":
            return self.mlambda(scenario)
        if method == "analysis":
            return self.analysis(scenario)
        if method == "both":
            report, other = self.cross_check(scenario)
            report.chosen_copies = other.chosen_copies
            return report
        if method == "no_assumption1":
            return self.no_assumption1(scenario)
        raise precondition(f"unknown method '{method}', expected one of {ENUMERATION_METHODS}")

    # ------------------------------------------------------------------
    # Enumeration and sufficient condition
    # ------------------------------------------------------------------
    def enumerate(
        self,
        r: int,
        method: str = "both",
        *,
        cap: int | None = None,
        workers: int | None = None,
    ) -> ScenarioEnumeration:
        """Evaluate every r-subset of the fault candidates in lexicographic order.

        Solvability of every r-subset implies it for every smaller subset.
        """
        if r < 1:
            raise precondition(f"r must be at least 1, got {r}")
        if method not in ENUMERATION_METHODS:
            raise precondition(f"unknown method '{method}', expected one of {ENUMERATION_METHODS}")
        cap = settings.SCENARIO_CAP if cap is None else cap
        workers = settings.WORKERS if workers is None else workers
        candidates = fault_candidates(self.mcn)
        count = math.comb(len(candidates), r)
        if count > cap:
            raise Errors.combinatorial_guard(count, cap)

        assumption1 = method != "no_assumption1"
        scenarios = [
            FaultScenario(nodes=combo, assumption1=assumption1)
            for combo in itertools.combinations(candidates, r)
        ]
        logger.info(f"Enumerating {len(scenarios)} scenarios (r={r}, method={method}, workers={workers})")

        if workers > 1 and len(scenarios) > 1:
            self.warm_up()
            with ThreadPoolExecutor(max_workers=workers) as executor:
                reports = list(executor.map(lambda s: self.evaluate(s, method), scenarios))
        else:
            reports = [self.evaluate(s, method) for s in scenarios]

        summary = EnumerationSummary(
            total=len(reports),
            solvable=sum(1 for rep in reports if rep.solvable),
            unsolvable=sum(1 for rep in reports if not rep.solvable),
            disagreements=sum(1 for rep in reports if rep.agreement is False),
        )
        logger.info(f"Enumeration finished: {summary.solvable}/{summary.total} solvable")
        return ScenarioEnumeration(r=r, method=method, reports=reports, summary=summary)

    def sufficient(self, r: int) -> SufficientConditionResult:
        """Copy-count and plant-connectivity test that guarantees every r-scenario solvable."""
        if r < 1:
            raise precondition(f"r must be at least 1, got {r}")
        mcn = self.mcn
        reasons = []
        if r > min(mcn.m, mcn.ell):
            reasons.append(f"r={r} exceeds min(m, ell)={min(mcn.m, mcn.ell)}")

        ag = self.analysis_graph
        for candidate in fault_candidates(mcn):
            copies = len(ag.gamma(candidate.side)[candidate.node])
            if copies < r:
                reasons.append(
                    f"|Gamma_{candidate.side.tag}({candidate.node})| = {copies} < {r}"
                )

        plant = build_plant_structured(plant_pattern(mcn, self.cache))
        kappa = vertex_connectivity(plant_state_graph(plant))
        if kappa < r:
            reasons.append(f"plant state connectivity {kappa} < {r}")
        reasons.extend(_plant_matching_reasons(plant, r))

        obs = observability_check(self.fault_free_graph)
        if not obs.observable:
            reasons.append(_observability_diagnostic(obs.unreached_states, obs.matching_size, obs.required))

        return SufficientConditionResult(
            r=r,
            holds=not reasons,
            reasons=reasons,
            within_hypothesis=r >= min(mcn.m, mcn.ell),
            plant_connectivity=kappa,
        )


def _observability_diagnostic(unreached: list[str], matched: int, required: int) -> str:
    if unreached:
        return f"condition (i) failed: states with no path to an output: {unreached}"
    return f"condition (i) failed: generic rank {matched} < {required}"


def _matching_size(edges: Iterable[tuple[str, str]], left: list[str]) -> int:
    graph = nx.Graph()
    top = [("l", v) for v in left]
    graph.add_nodes_from(top)
    graph.add_edges_from((("l", a), ("r", b)) for a, b in edges if a in left)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    return sum(1 for node in top if node in matching)


def _plant_matching_reasons(plant: StructuredGraph, r: int) -> list[str]:
    inputs = plant.ids_of(VertexKind.INTERCONNECT_U)
    states = set(plant.ids_of(VertexKind.PLANT_STATE))
    outputs = set(plant.ids_of(VertexKind.INTERCONNECT_Y))
    input_edges = [e for e in plant.edges if e[1] in states]
    reasons = []
    size = min(r, len(inputs))
    for subset in itertools.combinations(inputs, size):
        if _matching_size(input_edges, list(subset)) < size:
            reasons.append(f"inputs {list(subset)} cannot drive distinct plant states")
            break
    output_edges = [e for e in plant.edges if e[1] in outputs]
    reach = _matching_size(output_edges, sorted(states))
    if reach < r:
        reasons.append(f"plant states reach only {reach} distinct outputs < {r}")
    return reasons


# Single-call conveniences
def fdi_solvable_mlambda(mcn: Mcn, scenario: FaultScenario) -> FdiReport:
    return FdiService(mcn).mlambda(scenario)


def fdi_solvable_analysis(mcn: Mcn, scenario: FaultScenario) -> FdiReport:
    return FdiService(mcn).analysis(scenario)


def cross_check_linkings(mcn: Mcn, scenario: FaultScenario) -> bool:
    FdiService(mcn).cross_check(scenario)
    return True


def enumerate_scenarios(mcn: Mcn, r: int, method: str = "both", **kwargs) -> ScenarioEnumeration:
    return FdiService(mcn).enumerate(r, method, **kwargs)


def sufficient_condition(mcn: Mcn, r: int) -> SufficientConditionResult:
    return FdiService(mcn).sufficient(r)


def fdi_solvable_no_assumption1(mcn: Mcn, scenario: FaultScenario) -> FdiReport:
    return FdiService(mcn).no_assumption1(scenario)


def necessary_phi_disjoint(mcn: Mcn, v1: str, v2: str) -> bool:
    """phi(v1) and phi(v2) are disjoint; nodes on different sides are trivially so."""
    if v1 == v2:
        raise precondition("scenario nodes must be distinct")
    side1, side2 = side_of(mcn, v1), side_of(mcn, v2)
    if side1 is not side2:
        return True
    return not (phi(mcn, v1, side1) & phi(mcn, v2, side2))
