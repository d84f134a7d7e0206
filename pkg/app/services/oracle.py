"""Simulation of the composed system and the numeric rank oracle.

The oracle redraws every scheduled weight, evaluates the fault-to-output
transfer matrix at a real point outside the spectrum and counts singular
values above tol * sigma_1. Structural solvability should coincide with
full column rank for almost every draw.
"""

import csv
import io
import logging
from collections import Counter
from collections.abc import Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import AnalysisError, Errors, precondition
from app.models.mcn import Mcn
from app.models.network import ComponentWeights, Side
from app.models.scenario import FaultScenario
from app.models.signals import FaultSignalSpec, SignalShape, Trajectory
from app.models.transfer import StateSpace
from app.schemas.report import ConsistencyReport, OracleReport
from app.services.dynamics import realize_mcn
from app.services.fdi import FdiService

logger = logging.getLogger(__name__)


def signal_values(spec: FaultSignalSpec, horizon: int) -> np.ndarray:
    """Sampled fault signal over frames 0..horizon-1."""
    k = np.arange(horizon)
    active = k >= spec.onset
    if spec.shape is SignalShape.IMPULSE:
        return np.where(k == spec.onset, spec.amplitude, 0.0)
    if spec.shape is SignalShape.STEP:
        return np.where(active, spec.amplitude, 0.0)
    if spec.shape is SignalShape.SINUSOID:
        period = settings.DEFAULT_SIGNAL_PERIOD if spec.period is None else spec.period
        return np.where(active, spec.amplitude * np.sin(2 * np.pi * (k - spec.onset) / period), 0.0)
    rng = np.random.default_rng(spec.seed)
    amplitude = spec.amplitude if spec.amplitude != 0.0 else 1.0
    return np.where(active, amplitude * rng.standard_normal(horizon), 0.0)


def simulate(
    system: StateSpace,
    u: np.ndarray | None,
    faults: Sequence[FaultSignalSpec],
    horizon: int,
) -> Trajectory:
    """x(k+1) = A x(k) + B u(k) + F f(k), y(k) = C x(k) + D u(k), x(0) = 0."""
    if horizon < 0:
        raise precondition(f"horizon must be non-negative, got {horizon}")
    m, k_f = system.n_inputs, system.n_faults
    if u is None:
        u = np.zeros((horizon, m))
    u = np.asarray(u, dtype=float).reshape(horizon, -1) if horizon else np.zeros((0, m))
    if u.shape != (horizon, m):
        raise Errors.dimension_mismatch(f"input sequence is {u.shape}, expected ({horizon}, {m})")
    if len(faults) != k_f:
        raise Errors.dimension_mismatch(f"{len(faults)} fault signals for {k_f} fault inputs")

    f = np.column_stack([signal_values(spec, horizon) for spec in faults]) if k_f else np.zeros((horizon, 0))
    n = system.n_states
    states = np.zeros((horizon, n))
    y = np.zeros((horizon, system.n_outputs))
    x = np.zeros(n)
    for k in range(horizon):
        states[k] = x
        y[k] = system.C @ x + system.D @ u[k]
        x = system.A @ x + system.B @ u[k]
        if k_f:
            x = x + system.F @ f[k]
    return Trajectory(
        horizon=horizon,
        u=u,
        y=y,
        faults=f,
        states=states,
        input_labels=system.input_labels,
        output_labels=system.output_labels,
        fault_labels=system.fault_labels,
        state_labels=system.state_labels,
    )


def markov_parameters(system: StateSpace, count: int) -> list[np.ndarray]:
    """[D, C B, C A B, ..., C A^(count-2) B]: the impulse response frame by frame."""
    params = [system.D.copy()]
    power = system.B.copy()
    for _ in range(1, count):
        params.append(system.C @ power)
        power = system.A @ power
    return params


def impulse_response(system: StateSpace, input_index: int, horizon: int) -> np.ndarray:
    u = np.zeros((horizon, system.n_inputs))
    if horizon:
        u[0, input_index] = 1.0
    faults = [FaultSignalSpec(shape=SignalShape.STEP, amplitude=1.0, onset=horizon)] * system.n_faults
    return simulate(system, u, faults, horizon).y


def trajectory_to_csv(trajectory: Trajectory) -> str:
    """One row per frame: k, inputs, faults, outputs, states."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    labels = {
        "u": trajectory.input_labels or tuple(f"u{j + 1}" for j in range(trajectory.u.shape[1])),
        "f": trajectory.fault_labels or tuple(f"f{j + 1}" for j in range(trajectory.faults.shape[1])),
        "y": trajectory.output_labels or tuple(f"y{j + 1}" for j in range(trajectory.y.shape[1])),
        "x": trajectory.state_labels or tuple(f"x{j + 1}" for j in range(trajectory.states.shape[1])),
    }
    writer.writerow(["k", *labels["u"], *labels["f"], *labels["y"], *labels["x"]])
    for k in range(trajectory.horizon):
        row = [trajectory.u[k], trajectory.faults[k], trajectory.y[k], trajectory.states[k]]
        writer.writerow([k, *(f"{v:.12g}" for part in row for v in part)])
    return buffer.getvalue()


def _random_weights(mcn: Mcn, rng: np.random.Generator) -> Mcn:
    update = {}
    for side, key in ((Side.CONTROLLABILITY, "weights_r"), (Side.OBSERVABILITY, "weights_o")):
        drawn = []
        for sched in mcn.schedules(side):
            weights = {}
            for edge in sorted(sched.edges):
                magnitude = rng.uniform(settings.ORACLE_WEIGHT_LOW, settings.ORACLE_WEIGHT_HIGH)
                weights[edge] = float(magnitude * rng.choice([-1.0, 1.0]))
            drawn.append(ComponentWeights(weights=weights))
        update[key] = tuple(drawn)
    return mcn.model_copy(update=update)


def _normalized_rank(matrix: np.ndarray, tol: float) -> int:
    """Rank after scaling columns, dropping round-off entries, then scaling rows.

    Entries at most tol times their column norm count as zero, so
    rows that only hold solver round-off stay zero under row scaling.
    """
    g = np.real_if_close(matrix)
    norms = np.linalg.norm(g, axis=0, keepdims=True)
    norms[norms == 0] = 1.0
    g = g / norms
    g = np.where(np.abs(g) > tol, g, 0.0)
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    g = g / norms
    sigma = np.linalg.svd(g, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0:
        return 0
    return int(np.sum(sigma > tol * sigma[0]))


def fault_transfer_rank(
    mcn: Mcn,
    scenario: FaultScenario,
    trials: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
) -> OracleReport:
    """Modal numerical rank of the fault-to-output transfer matrix over random draws."""
    if not scenario.assumption1:
        raise precondition("the rank oracle works on merged fault signals")
    trials = settings.ORACLE_TRIALS if trials is None else trials
    tol = settings.ORACLE_TOL if tol is None else tol
    if trials < 1:
        raise precondition(f"trials must be at least 1, got {trials}")
    if tol < 0:
        raise precondition(f"tol must be non-negative, got {tol}")
    seed = 0 if seed is None else seed
    rng = np.random.default_rng(seed)

    ranks, z_values = [], []
    for trial in range(trials):
        for _ in range(1, settings.ORACLE_RETRY_CAP + 1):
            try:
                system = realize_mcn(_random_weights(mcn, rng), scenario)
            except AnalysisError as exc:
                logger.debug(f"Trial {trial}: redraw after {exc.code}")
                continue
            eigenvalues = np.linalg.eigvals(system.A) if system.n_states else np.zeros(0)
            rho = max(float(np.max(np.abs(eigenvalues), initial=0.0)), 1.0)
            z = rho * rng.uniform(settings.ORACLE_Z_LOW, settings.ORACLE_Z_HIGH)
            resolvent = z * np.eye(system.n_states) - system.A
            if np.linalg.cond(resolvent) > settings.ORACLE_MAX_CONDITION:
                logger.debug(f"Trial {trial}: ill-conditioned at z={z:.4g}, redraw")
                continue
            ranks.append(_normalized_rank(system.fault_transfer(z), tol))
            z_values.append(float(z))
            break
        else:
            raise Errors.ill_conditioned(settings.ORACLE_RETRY_CAP)

    counts = Counter(ranks)
    modal = min(counts, key=lambda rank: (-counts[rank], rank))
    logger.info(f"Oracle {scenario.label()}: ranks={ranks} modal={modal} seed={seed}")
    return OracleReport(
        scenario=scenario,
        seed=seed,
        trials=trials,
        tol=tol,
        ranks=ranks,
        z_values=z_values,
        modal_rank=modal,
        required=scenario.r,
    )


def consistency_check(
    mcn: Mcn,
    scenario: FaultScenario,
    trials: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
    service: FdiService | None = None,
) -> ConsistencyReport:
    """Structural linking verdict versus full numerical rank."""
    service = service or FdiService(mcn)
    structural = service.mlambda(scenario).linking_found
    oracle = fault_transfer_rank(mcn, scenario, trials, tol, seed)
    numeric = oracle.modal_rank == scenario.r
    consistent = structural == numeric
    detail = (
        f"structural {'solvable' if structural else 'unsolvable'}, "
        f"modal rank {oracle.modal_rank} of r={scenario.r}"
    )
    if not consistent:
        logger.warning(f"Oracle inconsistency on {scenario.label()}: {detail}")
    return ConsistencyReport(
        consistent=consistent, structural_solvable=structural, oracle=oracle, detail=detail
    )


def default_seed() -> int:
    """Fresh 32-bit seed for commands run without --seed."""
    return int(np.random.SeedSequence().entropy % (2**32))

