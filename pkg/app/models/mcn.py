from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.network import (
    ComponentSchedule,
    ComponentWeights,
    Plant,
    RadioGraph,
    Side,
    format_edge,
)


class Mcn(BaseModel):
    """Multi-hop control network: plant, radio graphs, weights, schedules, slot length."""

    model_config = ConfigDict(frozen=True)

    plant: Plant
    g_r: RadioGraph
    g_o: RadioGraph
    schedules_r: tuple[ComponentSchedule, ...]
    schedules_o: tuple[ComponentSchedule, ...]
    weights_r: tuple[ComponentWeights, ...]
    weights_o: tuple[ComponentWeights, ...]
    delta: float = Field(..., gt=0)
    fault_candidates: tuple[str, ...] | None = None

    @model_validator(mode="after")
    def check_consistency(self) -> "Mcn":
        if self.g_r.side is not Side.CONTROLLABILITY or self.g_o.side is not Side.OBSERVABILITY:
            raise ValueError("g_r must be the controllability graph and g_o the observability graph")
        m, ell = self.plant.m, self.plant.ell
        checks = [
            ("actuators", len(self.g_r.terminals), m),
            ("schedules_r", len(self.schedules_r), m),
            ("weights_r", len(self.weights_r), m),
            ("sensors", len(self.g_o.terminals), ell),
            ("schedules_o", len(self.schedules_o), ell),
            ("weights_o", len(self.weights_o), ell),
        ]
        for name, got, expected in checks:
            if got != expected:
                raise ValueError(f"dimension mismatch: {name} has {got} entries, expected {expected}")
        shared = self.g_r.nodes & self.g_o.nodes
        if shared:
            raise ValueError(f"node ids must be unique across both networks: {sorted(shared)}")
        lengths = {s.frame_length for s in (*self.schedules_r, *self.schedules_o)}
        if len(lengths) != 1:
            raise ValueError(f"all schedules must share one frame length, got {sorted(lengths)}")
        for side in Side:
            graph = self.graph(side)
            for i, (sched, weights) in enumerate(
                zip(self.schedules(side), self.weights(side)), start=1
            ):
                for edge in sorted(sched.edges):
                    if edge not in graph.edges:
                        raise ValueError(
                            f"{side.tag}{i} schedules {format_edge(edge)} which is not a radio link"
                        )
                    if edge not in weights.weights:
                        raise ValueError(f"{side.tag}{i} has no weight for {format_edge(edge)}")
        return self

    @property
    def m(self) -> int:
        return self.plant.m

    @property
    def ell(self) -> int:
        return self.plant.ell

    @property
    def frame_length(self) -> int:
        return self.schedules_r[0].frame_length

    @property
    def frame_duration(self) -> float:
        """T = frame_length * delta."""
        return self.frame_length * self.delta

    def graph(self, side: Side) -> RadioGraph:
        return self.g_r if side is Side.CONTROLLABILITY else self.g_o

    def schedules(self, side: Side) -> tuple[ComponentSchedule, ...]:
        return self.schedules_r if side is Side.CONTROLLABILITY else self.schedules_o

    def weights(self, side: Side) -> tuple[ComponentWeights, ...]:
        return self.weights_r if side is Side.CONTROLLABILITY else self.weights_o

    def components(self, side: Side) -> range:
        return range(1, (self.m if side is Side.CONTROLLABILITY else self.ell) + 1)

    def side_of(self, node: str) -> Side | None:
        if node in self.g_r.nodes:
            return Side.CONTROLLABILITY
        if node in self.g_o.nodes:
            return Side.OBSERVABILITY
        return None
