"""CLI commands.

One command per verb: validate, analyze, check, oracle, simulate and
export-graph. Reports go to stdout; logs go to stderr. Every command returns
through the shared exit-status contract:

    0  success, every analyzed scenario solvable
    1  analysis found unsolvable scenarios
    2  configuration or precondition error
    3  internal inconsistency
"""

import enum
import logging
from pathlib import Path
from typing import Annotated

import numpy as np
import typer

from app.api.deps import get_fdi_service, get_mcn, get_scenario
from app.core.error_handlers import handle_exception
from app.core.errors import EXIT_CONFIG, EXIT_INTERNAL, EXIT_OK, EXIT_UNSOLVABLE
from app.models.signals import FaultSignalSpec, SignalShape
from app.schemas.report import ReportDocument
from app.services.dynamics import realize_mcn
from app.services.oracle import (
    consistency_check,
    default_seed,
    signal_values,
    simulate,
    trajectory_to_csv,
)
from app.services.reporting import (
    render_check,
    render_consistency,
    render_enumeration,
    render_structured,
    render_validation,
    validation_entries,
)
from app.services.routing import validate_mcn
from app.services.structured import build_analysis_graph, build_mcn_structured, export_graph

logger = logging.getLogger(__name__)

router = typer.Typer()


class OutputFormat(str, enum.Enum):
    TEXT = "text"
    STRUCTURED = "structured"


class AnalysisMethod(str, enum.Enum):
    MLAMBDA = "mlambda"
    ANALYSIS = "analysis"
    BOTH = "both"


class GraphKind(str, enum.Enum):
    MLAMBDA = "mlambda"
    ANALYSIS = "analysis"


ConfigArg = Annotated[
    Path, typer.Argument(help="MCN config document (JSON)", dir_okay=False)
]
FormatOpt = Annotated[
    OutputFormat, typer.Option("--format", help="text or structured (JSON)")
]


def _emit(text: str) -> None:
    typer.echo(text)


@router.command()
def validate(config: ConfigArg, output_format: FormatOpt = OutputFormat.TEXT) -> None:
    """Check the config and the routing shape of every induced subgraph."""
    try:
        mcn = get_mcn(config, strict=False)
        reports = validate_mcn(mcn)
        code = EXIT_OK if all(r.ok for r in reports) else EXIT_CONFIG
        if output_format is OutputFormat.STRUCTURED:
            _emit(
                render_structured(
                    ReportDocument(
                        command="validate",
                        config=str(config),
                        exit_code=code,
                        validation=validation_entries(reports),
                    )
                )
            )
        else:
            _emit(render_validation(mcn, str(config), reports))
    except Exception as exc:
        code = handle_exception(exc, output_format.value)
    raise typer.Exit(code)


@router.command()
def analyze(
    config: ConfigArg,
    max_faults: Annotated[int, typer.Option("--max-faults", min=1, help="scenario size r")],
    no_assumption1: Annotated[
        bool, typer.Option("--no-assumption1", help="one fault signal per routed component")
    ] = False,
    method: Annotated[
        AnalysisMethod, typer.Option("--method", help="linking test to run")
    ] = AnalysisMethod.BOTH,
    sufficient: Annotated[
        bool, typer.Option("--sufficient", help="append the sufficient-condition test")
    ] = False,
    workers: Annotated[int | None, typer.Option("--workers", min=1)] = None,
    cap: Annotated[int | None, typer.Option("--cap", min=1, help="max scenario count")] = None,
    output_format: FormatOpt = OutputFormat.TEXT,
) -> None:
    """Enumerate every r-node fault scenario and report FDI solvability."""
    try:
        mcn = get_mcn(config)
        service = get_fdi_service(mcn)
        chosen = "no_assumption1" if no_assumption1 else method.value
        enumeration = service.enumerate(max_faults, chosen, cap=cap, workers=workers)
        condition = service.sufficient(max_faults) if sufficient else None
        code = EXIT_OK if enumeration.summary.unsolvable == 0 else EXIT_UNSOLVABLE
        if output_format is OutputFormat.STRUCTURED:
            _emit(
                render_structured(
                    ReportDocument(
                        command="analyze",
                        config=str(config),
                        exit_code=code,
                        enumeration=enumeration,
                        sufficient=condition,
                    )
                )
            )
        else:
            _emit(render_enumeration(mcn, str(config), enumeration, condition))
    except Exception as exc:
        code = handle_exception(exc, output_format.value)
    raise typer.Exit(code)


@router.command()
def check(
    config: ConfigArg,
    faults: Annotated[str, typer.Option("--faults", help="comma-separated node ids")],
    no_assumption1: Annotated[bool, typer.Option("--no-assumption1")] = False,
    method: Annotated[AnalysisMethod, typer.Option("--method")] = AnalysisMethod.BOTH,
    output_format: FormatOpt = OutputFormat.TEXT,
) -> None:
    """Report one scenario with its witness paths."""
    try:
        mcn = get_mcn(config)
        service = get_fdi_service(mcn)
        scenario = get_scenario(mcn, faults, assumption1=not no_assumption1)
        if no_assumption1:
            reports = [service.no_assumption1(scenario)]
        elif method is AnalysisMethod.BOTH:
            reports = list(service.cross_check(scenario))
        else:
            reports = [service.evaluate(scenario, method.value)]
        code = EXIT_OK if all(r.solvable for r in reports[:1]) else EXIT_UNSOLVABLE
        if output_format is OutputFormat.STRUCTURED:
            _emit(
                render_structured(
                    ReportDocument(
                        command="check", config=str(config), exit_code=code, scenario=reports
                    )
                )
            )
        else:
            _emit(render_check(mcn, str(config), reports))
    except Exception as exc:
        code = handle_exception(exc, output_format.value)
    raise typer.Exit(code)


@router.command()
def oracle(
    config: ConfigArg,
    faults: Annotated[str, typer.Option("--faults", help="comma-separated node ids")],
    trials: Annotated[int | None, typer.Option("--trials", min=1)] = None,
    tol: Annotated[float | None, typer.Option("--tol", min=0.0)] = None,
    seed: Annotated[int | None, typer.Option("--seed", help="generated and printed when omitted")] = None,
    output_format: FormatOpt = OutputFormat.TEXT,
) -> None:
    """Compare the structural verdict with the numerical rank of the fault transfer matrix."""
    try:
        mcn = get_mcn(config)
        scenario = get_scenario(mcn, faults)
        seed = default_seed() if seed is None else seed
        result = consistency_check(
            mcn, scenario, trials, tol, seed, service=get_fdi_service(mcn)
        )
        if not result.consistent:
            code = EXIT_INTERNAL
        elif result.structural_solvable:
            code = EXIT_OK
        else:
            code = EXIT_UNSOLVABLE
        if output_format is OutputFormat.STRUCTURED:
            _emit(
                render_structured(
                    ReportDocument(
                        command="oracle", config=str(config), exit_code=code, oracle=result
                    )
                )
            )
        else:
            _emit(render_consistency(mcn, str(config), result))
    except Exception as exc:
        code = handle_exception(exc, output_format.value)
    raise typer.Exit(code)


@router.command("simulate")
def simulate_command(
    config: ConfigArg,
    horizon: Annotated[int, typer.Option("--horizon", min=0, help="frames to simulate")],
    faults: Annotated[str | None, typer.Option("--faults")] = None,
    signal: Annotated[SignalShape, typer.Option("--signal")] = SignalShape.STEP,
    amplitude: Annotated[float, typer.Option("--amplitude")] = 1.0,
    onset: Annotated[int, typer.Option("--onset", min=0)] = 0,
    input_signal: Annotated[
        SignalShape | None, typer.Option("--input", help="same shape on every input")
    ] = None,
    seed: Annotated[int | None, typer.Option("--seed")] = None,
) -> None:
    """Dump a simulated trajectory of the composed system as CSV."""
    try:
        mcn = get_mcn(config)
        scenario = get_scenario(mcn, faults) if faults else None
        system = realize_mcn(mcn, scenario)
        randomized = SignalShape.RANDOM in (signal, input_signal)
        if randomized and seed is None:
            seed = default_seed()
        rng = np.random.default_rng(seed)

        def spec(shape: SignalShape) -> FaultSignalSpec:
            draw = int(rng.integers(2**32)) if shape is SignalShape.RANDOM else None
            return FaultSignalSpec(shape=shape, amplitude=amplitude, onset=onset, seed=draw)

        fault_specs = [spec(signal) for _ in range(system.n_faults)]
        u = None
        if input_signal is not None:
            u = np.column_stack(
                [signal_values(spec(input_signal), horizon) for _ in range(system.n_inputs)]
            )
        trajectory = simulate(system, u, fault_specs, horizon)
        if randomized:
            _emit(f"# seed: {seed}")
        typer.echo(trajectory_to_csv(trajectory), nl=False)
        code = EXIT_OK
    except Exception as exc:
        code = handle_exception(exc)
    raise typer.Exit(code)


@router.command("export-graph")
def export_graph_command(
    config: ConfigArg,
    which: Annotated[GraphKind, typer.Option("--which")] = GraphKind.MLAMBDA,
    faults: Annotated[
        str | None, typer.Option("--faults", help="fault vertices to include (mlambda only)")
    ] = None,
) -> None:
    """Print the cascade structured graph or the analysis graph as text."""
    try:
        mcn = get_mcn(config)
        if which is GraphKind.ANALYSIS:
            text = export_graph(build_analysis_graph(mcn))
        else:
            names = get_scenario(mcn, faults).names if faults else ()
            text = export_graph(build_mcn_structured(mcn, names))
        typer.echo(text, nl=False)
        code = EXIT_OK
    except Exception as exc:
        code = handle_exception(exc)
    raise typer.Exit(code)
