from .graphs import AnalysisGraph, StructuredGraph, Vertex, VertexKind
from .mcn import Mcn
from .network import (
    ComponentSchedule,
    ComponentWeights,
    Plant,
    PlantKind,
    RadioGraph,
    Side,
    ValidationReport,
    Violation,
    ViolationKind,
)
from .scenario import FaultNode, FaultScenario, FdiReport, Method, Verdict
from .signals import FaultSignalSpec, SignalShape, Trajectory
from .transfer import FaultChannel, FaultTap, FirTransfer, StateSpace

__all__ = [
    "AnalysisGraph",
    "ComponentSchedule",
    "ComponentWeights",
    "FaultChannel",
    "FaultNode",
    "FaultScenario",
    "FaultSignalSpec",
    "FaultTap",
    "FdiReport",
    "FirTransfer",
    "Mcn",
    "Method",
    "Plant",
    "PlantKind",
    "RadioGraph",
    "Side",
    "SignalShape",
    "StateSpace",
    "StructuredGraph",
    "Trajectory",
    "ValidationReport",
    "Verdict",
    "Vertex",
    "VertexKind",
    "Violation",
    "ViolationKind",
]
