"""
Pytest configuration and fixtures for mcn-fdi tests.

Provides the Example-1 networks, a seeded random-network factory and a CLI runner.
"""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from typer.testing import CliRunner

from app.models.mcn import Mcn
from app.schemas.config import McnDocument
from app.services.loader import build_mcn, load_mcn_file

EXAMPLES_DIR = Path(__file__).resolve().parent.parent / "docs" / "examples"
EXAMPLE1_PAIRS = [
    ("v1", "v2"),
    ("v1", "v3"),
    ("v1", "v4"),
    ("v2", "v3"),
    ("v2", "v4"),
    ("v3", "v4"),
]


# ============================================================================
# Example Networks
# ============================================================================
@pytest.fixture(scope="session")
def example1_path() -> Path:
    return EXAMPLES_DIR / "example1.json"


@pytest.fixture
def example1_doc(example1_path) -> dict[str, Any]:
    """Example-1 config as a mutable dict, for tests that break it on purpose."""
    return json.loads(example1_path.read_text())


@pytest.fixture(scope="session")
def example1_mcn(example1_path) -> Mcn:
    return load_mcn_file(example1_path)


@pytest.fixture(scope="session")
def augmented_r_mcn() -> Mcn:
    """Example 1 with (v_uc, v2), (v2, v_u1) added to the first controllability schedule."""
    return load_mcn_file(EXAMPLES_DIR / "example1-augmented-r.json")


@pytest.fixture(scope="session")
def augmented_o_mcn() -> Mcn:
    """Example 1 with (v_y1, v4), (v4, v_yc) added to the first observability schedule."""
    return load_mcn_file(EXAMPLES_DIR / "example1-augmented-o.json")


@pytest.fixture(scope="session")
def literal_mcn() -> Mcn:
    """Example 1 with the upper-triangular plant coupling x2 -> x1."""
    return load_mcn_file(EXAMPLES_DIR / "example1-literal.json")


# ============================================================================
# Small Hand-Built Networks
# ============================================================================
def chain_plant_document() -> dict[str, Any]:
    """Plant x1 -> x2 -> x3 behind single-relay networks.

    u~1 drives x1, u~2 drives x2, y~1 reads x3 and y~2 reads x2, so every
    continuous-time path passes x2. The second observability component
    routes through o2 then o3.
    """
    return {
        "plant": {
            "kind": "continuous",
            "A": [[-1.0, 0.0, 0.0], [1.0, -1.0, 0.0], [0.0, 1.0, -1.0]],
            "B": [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
            "C": [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
        },
        "delta": 0.5,
        "frame_length": 2,
        "controllability": {
            "nodes": ["r_c", "r1", "r2", "r_a1", "r_a2"],
            "edges": [["r_c", "r1"], ["r_c", "r2"], ["r1", "r_a1"], ["r2", "r_a2"]],
            "controller": "r_c",
            "actuators": ["r_a1", "r_a2"],
        },
        "observability": {
            "nodes": ["o_s1", "o_s2", "o1", "o2", "o3", "o_c"],
            "edges": [["o_s1", "o1"], ["o1", "o_c"], ["o_s2", "o2"], ["o2", "o3"], ["o3", "o_c"]],
            "controller": "o_c",
            "sensors": ["o_s1", "o_s2"],
        },
        "schedules_r": [
            {"1": [["r_c", "r1"]], "2": [["r1", "r_a1"]]},
            {"1": [["r_c", "r2"]], "2": [["r2", "r_a2"]]},
        ],
        "schedules_o": [
            {"1": [["o_s1", "o1"]], "2": [["o1", "o_c"]]},
            {"1": [["o_s2", "o2"], ["o3", "o_c"]], "2": [["o2", "o3"]]},
        ],
    }


def cancelling_block_document() -> dict[str, Any]:
    """One-input network whose two delay-2 paths cancel.

    c->v->w->a and c->u->w->a both take two frames with weight products +1
    and -1; c->p->a takes one. The block trims to one tap while faults at v
    and u keep their delay-2 tap.
    """
    return {
        "plant": {"kind": "continuous", "A": [[-1.0]], "B": [[1.0]], "C": [[1.0]]},
        "delta": 0.5,
        "frame_length": 2,
        "controllability": {
            "nodes": ["c", "v", "u", "w", "p", "a"],
            "edges": [["c", "v"], ["c", "u"], ["c", "p"], ["v", "w"], ["u", "w"], ["w", "a"], ["p", "a"]],
            "controller": "c",
            "actuators": ["a"],
        },
        "observability": {
            "nodes": ["s", "o1", "oc"],
            "edges": [["s", "o1"], ["o1", "oc"]],
            "controller": "oc",
            "sensors": ["s"],
        },
        "schedules_r": [
            {"1": [["c", "v"], ["c", "u"], ["c", "p"], ["w", "a"]], "2": [["v", "w"], ["u", "w"], ["p", "a"]]}
        ],
        "schedules_o": [{"1": [["s", "o1"]], "2": [["o1", "oc"]]}],
        "weights_r": [
            {"c->v": 1.0, "c->u": 1.0, "c->p": 1.0, "v->w": 1.0, "u->w": -1.0, "w->a": 1.0, "p->a": 1.0}
        ],
    }


def replicated_document(
    rng: np.random.Generator, relays: int = 2, io: int = 2, n: int = 3
) -> dict[str, Any]:
    """Every relay routes every component, over a fully coupled plant."""
    a = rng.uniform(0.5, 1.5, size=(n, n))
    b = np.zeros((n, io))
    c = np.zeros((io, n))
    for k in range(io):
        b[k, k] = 1.0
        c[k, k] = 1.0
    doc: dict[str, Any] = {
        "plant": {"kind": "continuous", "A": a.tolist(), "B": b.tolist(), "C": c.tolist()},
        "delta": 0.2,
        "frame_length": 2,
    }
    for side, prefix, terminal_key in (
        ("controllability", "r", "actuators"),
        ("observability", "o", "sensors"),
    ):
        hubs = [f"{prefix}{k}" for k in range(1, relays + 1)]
        controller = f"{prefix}_c"
        terminals = [f"{prefix}_t{i}" for i in range(1, io + 1)]
        schedules, all_edges = [], set()
        for terminal in terminals:
            source, sink = (controller, terminal) if prefix == "r" else (terminal, controller)
            slots: dict[str, list[list[str]]] = {}
            for hub in hubs:
                for edge in ((source, hub), (hub, sink)):
                    all_edges.add(edge)
                    slots.setdefault(str(int(rng.integers(1, 3))), []).append(list(edge))
            schedules.append(slots)
        doc[side] = {
            "nodes": [controller, *hubs, *terminals],
            "edges": [list(e) for e in sorted(all_edges)],
            "controller": controller,
            terminal_key: terminals,
        }
        doc[f"schedules_{prefix}"] = schedules
    return doc


@pytest.fixture(scope="session")
def chain_plant_mcn() -> Mcn:
    return mcn_from_document(chain_plant_document())


@pytest.fixture(scope="session")
def cancelling_block_mcn() -> Mcn:
    return mcn_from_document(cancelling_block_document())


@pytest.fixture(scope="session")
def replicated_mcn() -> Mcn:
    """Two relays in every component on both sides; sufficient for r = 2."""
    return mcn_from_document(replicated_document(np.random.default_rng(0)))


# ============================================================================
# Random Networks
# ============================================================================
def _route_component(
    rng: np.random.Generator, source: str, sink: str, relays: list[str], frame_length: int
) -> tuple[list[tuple[str, str]], dict[str, list[list[str]]]]:
    """Random DAG from source to sink through a random relay subset.

    Relays are kept in list order, every relay gets a predecessor earlier in
    the order and a successor later in it, so each one lies on a
    source-to-sink path.
    """
    count = int(rng.integers(1, min(3, len(relays)) + 1))
    chosen = sorted(rng.choice(len(relays), size=count, replace=False).tolist())
    order = [source, *(relays[k] for k in chosen), sink]
    edges: set[tuple[str, str]] = set()
    for pos in range(1, len(order) - 1):
        edges.add((order[int(rng.integers(0, pos))], order[pos]))
        edges.add((order[pos], order[int(rng.integers(pos + 1, len(order)))]))
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if (a, b) != (0, len(order) - 1) and rng.random() < 0.25:
                edges.add((order[a], order[b]))
    slots: dict[str, list[list[str]]] = {}
    for edge in sorted(edges):
        slot = str(int(rng.integers(1, frame_length + 1)))
        slots.setdefault(slot, []).append(list(edge))
    return sorted(edges), slots


def _random_matrix(rng: np.random.Generator, rows: int, cols: int, density: float) -> list:
    values = rng.uniform(0.5, 2.0, size=(rows, cols)) * rng.choice([-1.0, 1.0], size=(rows, cols))
    mask = rng.random((rows, cols)) < density
    return np.where(mask, values, 0.0).tolist()


def random_mcn_document(
    rng: np.random.Generator, max_states: int = 3, max_io: int = 3, max_relays: int = 8
) -> dict[str, Any]:
    """Seeded random config document with valid routing on both sides."""
    n = int(rng.integers(1, max_states + 1))
    m = int(rng.integers(1, max_io + 1))
    ell = int(rng.integers(1, max_io + 1))
    frame_length = int(rng.integers(1, 4))
    doc: dict[str, Any] = {
        "plant": {
            "kind": "continuous",
            "A": _random_matrix(rng, n, n, 0.5),
            "B": _random_matrix(rng, n, m, 0.6),
            "C": _random_matrix(rng, ell, n, 0.6),
        },
        "delta": 0.1,
        "frame_length": frame_length,
    }
    for side, prefix, count, terminal_key in (
        ("controllability", "r", m, "actuators"),
        ("observability", "o", ell, "sensors"),
    ):
        relays = [f"{prefix}{k}" for k in range(1, int(rng.integers(1, max_relays + 1)) + 1)]
        controller = f"{prefix}_c"
        terminals = [f"{prefix}_t{i}" for i in range(1, count + 1)]
        all_edges: set[tuple[str, str]] = set()
        schedules, weights = [], []
        for terminal in terminals:
            source, sink = (controller, terminal) if prefix == "r" else (terminal, controller)
            edges, slots = _route_component(rng, source, sink, relays, frame_length)
            all_edges.update(edges)
            schedules.append(slots)
            weights.append(
                {
                    f"{a}->{b}": float(rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0]))
                    for a, b in edges
                }
            )
        doc[side] = {
            "nodes": [controller, *relays, *terminals],
            "edges": [list(e) for e in sorted(all_edges)],
            "controller": controller,
            terminal_key: terminals,
        }
        doc[f"schedules_{prefix}"] = schedules
        doc[f"weights_{prefix}"] = weights
    return doc


def mcn_from_document(doc: dict[str, Any]) -> Mcn:
    return build_mcn(McnDocument.model_validate(doc))


@pytest.fixture
def random_mcn_factory() -> Callable[..., Mcn]:
    """Build a random valid Mcn from an integer seed."""

    def factory(seed: int, **kwargs: Any) -> Mcn:
        return mcn_from_document(random_mcn_document(np.random.default_rng(seed), **kwargs))

    return factory


# ============================================================================
# Environment Fixtures
# ============================================================================
@pytest.fixture
def mock_environment_vars(monkeypatch):
    """Mock environment variables for settings tests."""
    monkeypatch.setenv("MCN_FDI_ENVIRONMENT", "test")
    monkeypatch.setenv("MCN_FDI_SCENARIO_CAP", "50")
    monkeypatch.setenv("MCN_FDI_WORKERS", "2")


# ============================================================================
# CLI Fixtures
# ============================================================================
@pytest.fixture
def runner() -> CliRunner:
    """Create typer CLI runner."""
    return CliRunner()
