"""Report schemas shared by the oracle and the structured CLI output."""

from pydantic import BaseModel, Field

from app.models.scenario import FaultScenario, FdiReport, ScenarioEnumeration, SufficientConditionResult

REPORT_SCHEMA_VERSION = 1


class OracleReport(BaseModel):
    """Numerical rank of the fault-to-output transfer matrix over random draws."""

    scenario: FaultScenario
    seed: int
    trials: int
    tol: float
    ranks: list[int] = Field(default_factory=list)
    z_values: list[float] = Field(default_factory=list)
    modal_rank: int
    required: int

    @property
    def full_rank(self) -> bool:
        return self.modal_rank == self.required


class ConsistencyReport(BaseModel):
    consistent: bool
    structural_solvable: bool
    oracle: OracleReport
    detail: str


class ValidationEntry(BaseModel):
    side: str
    component: int
    violations: list[dict[str, str]] = Field(default_factory=list)


class ReportDocument(BaseModel):
    """Top-level document of ``--format structured``."""

    schema_version: int = REPORT_SCHEMA_VERSION
    command: str
    config: str
    exit_code: int
    validation: list[ValidationEntry] | None = None
    enumeration: ScenarioEnumeration | None = None
    scenario: list[FdiReport] | None = None
    sufficient: SufficientConditionResult | None = None
    oracle: ConsistencyReport | None = None
