"""Text and structured renderings of analysis results.

Both renderings depend only on their inputs, so repeated runs with the same
config and seed produce byte-identical output.
"""

import json

from app.models.mcn import Mcn
from app.models.network import ValidationReport
from app.models.scenario import FdiReport, ScenarioEnumeration, SufficientConditionResult
from app.schemas.report import ConsistencyReport, ReportDocument, ValidationEntry
from app.services.routing import fault_candidates


def render_structured(document: ReportDocument) -> str:
    payload = document.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, indent=2, sort_keys=True)


def validation_entries(reports: list[ValidationReport]) -> list[ValidationEntry]:
    return [
        ValidationEntry(
            side=report.side.value,
            component=report.component,
            violations=[{"kind": v.kind.value, "message": v.message} for v in report.violations],
        )
        for report in reports
    ]


def header(mcn: Mcn, config: str) -> list[str]:
    candidates = ", ".join(c.node for c in fault_candidates(mcn)) or "-"
    return [
        f"config: {config}",
        f"plant: n={mcn.plant.n} m={mcn.m} ell={mcn.ell} ({mcn.plant.kind.value})",
        f"networks: |V_R|={len(mcn.g_r.nodes)} |V_O|={len(mcn.g_o.nodes)} "
        f"frame_length={mcn.frame_length} delta={mcn.delta:g}",
        f"fault candidates: {candidates}",
    ]


def render_validation(mcn: Mcn, config: str, reports: list[ValidationReport]) -> str:
    lines = header(mcn, config)
    for report in reports:
        status = "ok" if report.ok else f"{len(report.violations)} violation(s)"
        lines.append(f"{report.side.tag}{report.component}: {status}")
        lines.extend(f"  {v.kind.value}: {v.message}" for v in report.violations)
    bad = sum(1 for report in reports if not report.ok)
    lines.append("valid" if not bad else f"invalid: {bad} routing subgraph(s) rejected")
    return "\n".join(lines)


def _scenario_line(report: FdiReport) -> str:
    verdict = "solvable" if report.solvable else "UNSOLVABLE"
    parts = [f"{report.scenario.label():<16}", f"{verdict:<10}"]
    if report.linking_size is not None:
        parts.append(f"k={report.linking_size}/{report.required}")
    if report.observable is False:
        parts.append("unobservable")
    if report.agreement:
        parts.append("agree")
    return "  ".join(parts)


def render_report(report: FdiReport, *, verbose: bool = False) -> list[str]:
    lines = [_scenario_line(report)]
    if not verbose:
        return lines
    lines.append(f"  method: {report.method.value}")
    for label, copy in sorted(report.chosen_copies.items()):
        lines.append(f"  copy {label}: {copy}")
    for path in report.witness:
        lines.append(f"  path: {' -> '.join(path)}")
    for check in report.checks:
        status = "ok" if check.passed else "FAILED"
        lines.append(
            f"  signal {check.node}.{check.component}: {check.linking_size}/{check.required} {status}"
        )
    lines.extend(f"  {d}" for d in report.diagnostics)
    return lines


def render_enumeration(
    mcn: Mcn,
    config: str,
    enumeration: ScenarioEnumeration,
    sufficient: SufficientConditionResult | None = None,
) -> str:
    lines = header(mcn, config)
    lines.append(
        f"method: {enumeration.method}  r={enumeration.r}  scenarios: {enumeration.summary.total}"
    )
    for report in enumeration.reports:
        lines.extend(render_report(report, verbose=not report.solvable))
    summary = enumeration.summary
    lines.append(
        f"summary: {summary.solvable} solvable, {summary.unsolvable} unsolvable, "
        f"{summary.disagreements} disagreement(s)"
    )
    if sufficient is not None:
        lines.extend(render_sufficient(sufficient))
    return "\n".join(lines)


def render_sufficient(result: SufficientConditionResult) -> list[str]:
    lines = [
        f"sufficient condition (r={result.r}): {'holds' if result.holds else 'does not hold'}",
        f"  plant state connectivity: {result.plant_connectivity}",
        f"  r >= min(m, ell): {'yes' if result.within_hypothesis else 'no'}",
    ]
    lines.extend(f"  {reason}" for reason in result.reasons)
    return lines


def render_check(mcn: Mcn, config: str, reports: list[FdiReport]) -> str:
    lines = header(mcn, config)
    for report in reports:
        lines.extend(render_report(report, verbose=True))
    return "\n".join(lines)


def render_consistency(mcn: Mcn, config: str, result: ConsistencyReport) -> str:
    oracle = result.oracle
    lines = header(mcn, config)
    lines += [
        f"scenario: {oracle.scenario.label()}",
        f"seed: {oracle.seed}",
        f"trials: {oracle.trials}  tol: {oracle.tol:g}",
        f"ranks: {' '.join(str(r) for r in oracle.ranks)}",
        f"z: {' '.join(f'{z:.6g}' for z in oracle.z_values)}",
        f"modal rank: {oracle.modal_rank} (r={oracle.required})",
        f"structural: {'solvable' if result.structural_solvable else 'unsolvable'}",
        "consistent" if result.consistent else f"INCONSISTENT: {result.detail}",
    ]
    return "\n".join(lines)
