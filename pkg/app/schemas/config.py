"""Config document schema (JSON).

Edges are two-element lists, schedules map slot numbers (as strings) to edge
lists and weights map ``"a->b"`` keys to reals. Omitted weights mean unit
weights on every scheduled edge.
"""

from pydantic import BaseModel, ConfigDict, Field

from app.models.network import PlantKind


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PlantDocument(StrictModel):
    kind: PlantKind = PlantKind.CONTINUOUS
    A: list[list[float]]
    B: list[list[float]]
    C: list[list[float]]


class NetworkDocument(StrictModel):
    nodes: list[str] = Field(..., min_length=1)
    edges: list[tuple[str, str]] = Field(default_factory=list)
    controller: str


class ControllabilityDocument(NetworkDocument):
    actuators: list[str] = Field(..., min_length=1)


class ObservabilityDocument(NetworkDocument):
    sensors: list[str] = Field(..., min_length=1)


ScheduleDocument = dict[str, list[tuple[str, str]]]
WeightsDocument = dict[str, float]


class McnDocument(StrictModel):
    """Top-level config document."""

    plant: PlantDocument
    delta: float = Field(..., gt=0)
    frame_length: int = Field(..., ge=1)
    controllability: ControllabilityDocument
    observability: ObservabilityDocument
    schedules_r: list[ScheduleDocument]
    schedules_o: list[ScheduleDocument]
    weights_r: list[WeightsDocument] | None = None
    weights_o: list[WeightsDocument] | None = None
    fault_candidates: list[str] | None = None
