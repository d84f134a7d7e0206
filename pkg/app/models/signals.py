"""Fault signal specifications and simulated trajectories."""

import enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SignalShape(str, enum.Enum):
    IMPULSE = "impulse"
    STEP = "step"
    SINUSOID = "sinusoid"
    RANDOM = "random"


class FaultSignalSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    shape: SignalShape
    amplitude: float = 1.0
    onset: int = Field(default=0, ge=0)
    period: int | None = Field(default=None, ge=2)  # sinusoid only
    seed: int | None = None  # random only

    @model_validator(mode="after")
    def check_amplitude(self) -> "FaultSignalSpec":
        if self.shape is not SignalShape.RANDOM and self.amplitude == 0.0:
            raise ValueError(f"{self.shape.value} signal needs a nonzero amplitude")
        return self


class Trajectory(BaseModel):
    """Per-frame arrays, one row per frame."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    horizon: int = Field(..., ge=0)
    u: np.ndarray
    y: np.ndarray
    faults: np.ndarray
    states: np.ndarray
    input_labels: tuple[str, ...] = ()
    output_labels: tuple[str, ...] = ()
    fault_labels: tuple[str, ...] = ()
    state_labels: tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_lengths(self) -> "Trajectory":
        for name in ("u", "y", "faults", "states"):
            if getattr(self, name).shape[0] != self.horizon:
                raise ValueError(f"{name} must have {self.horizon} rows")
        return self
