"""Fault scenarios and FDI verdicts."""

import enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.network import Side


class Method(str, enum.Enum):
    MLAMBDA = "mlambda"
    ANALYSIS_GRAPH = "analysis_graph"
    SUFFICIENT = "sufficient"
    NO_ASSUMPTION1 = "no_assumption1"


class Verdict(str, enum.Enum):
    SOLVABLE = "solvable"
    UNSOLVABLE = "unsolvable"


class FaultNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    node: str
    side: Side


class FaultScenario(BaseModel):
    """r distinct faulty nodes; assumption1 merges a node's per-component signals."""

    model_config = ConfigDict(frozen=True)

    nodes: tuple[FaultNode, ...] = Field(..., min_length=1)
    assumption1: bool = True

    @model_validator(mode="after")
    def check_distinct(self) -> "FaultScenario":
        names = [f.node for f in self.nodes]
        if len(set(names)) != len(names):
            raise ValueError(f"scenario nodes must be distinct: {names}")
        return self

    @property
    def r(self) -> int:
        return len(self.nodes)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.node for f in self.nodes)

    def on_side(self, side: Side) -> list[str]:
        return [f.node for f in self.nodes if f.side is side]

    def label(self) -> str:
        return "{" + ", ".join(self.names) + "}"


class SignatureCheck(BaseModel):
    """One per-signal linking check of the per-component fault model."""

    node: str
    component: int
    sources: list[str]
    linking_size: int
    required: int
    witness: list[list[str]] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.linking_size == self.required


class FdiReport(BaseModel):
    """Verdict for one scenario and one decision method."""

    scenario: FaultScenario
    method: Method
    verdict: Verdict
    required: int
    linking_size: int | None = None
    observable: bool | None = None
    witness: list[list[str]] = Field(default_factory=list)
    chosen_copies: dict[str, str] = Field(default_factory=dict)
    checks: list[SignatureCheck] = Field(default_factory=list)
    diagnostics: list[str] = Field(default_factory=list)
    agreement: bool | None = None

    @property
    def solvable(self) -> bool:
        return self.verdict is Verdict.SOLVABLE

    @property
    def linking_found(self) -> bool:
        return self.linking_size == self.required


class EnumerationSummary(BaseModel):
    total: int = 0
    solvable: int = 0
    unsolvable: int = 0
    disagreements: int = 0


class ScenarioEnumeration(BaseModel):
    r: int
    method: str
    reports: list[FdiReport] = Field(default_factory=list)
    summary: EnumerationSummary = Field(default_factory=EnumerationSummary)


class SufficientConditionResult(BaseModel):
    r: int
    holds: bool
    reasons: list[str] = Field(default_factory=list)
    within_hypothesis: bool
    plant_connectivity: int
