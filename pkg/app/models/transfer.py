"""FIR transfer functions and state-space systems."""

from typing import Any

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)

from app.models.network import Side


class FirTransfer(BaseModel):
    """FIR transfer sum_{d=1..D} gamma(d) z^-d; gamma[d-1] holds gamma(d)."""

    model_config = ConfigDict(frozen=True)

    gamma: tuple[float, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_last_coefficient(self) -> "FirTransfer":
        if self.gamma[-1] == 0.0:
            raise ValueError("gamma(D) must be nonzero")
        return self

    @property
    def max_delay(self) -> int:
        return len(self.gamma)

    def coefficient(self, d: int) -> float:
        if 1 <= d <= self.max_delay:
            return self.gamma[d - 1]
        return 0.0

    def support(self) -> list[int]:
        """Delays with a nonzero coefficient."""
        return [d for d, g in enumerate(self.gamma, start=1) if g != 0.0]

    def evaluate(self, z: complex) -> complex:
        return sum(g * z ** (-d) for d, g in enumerate(self.gamma, start=1))


def _matrix(value: Any, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix")
    return arr


class StateSpace(BaseModel):
    """Discrete-time system x+ = A x + B u + F f, y = C x + D u."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray | None = None
    F: np.ndarray | None = None
    state_labels: tuple[str, ...] = ()
    input_labels: tuple[str, ...] = ()
    output_labels: tuple[str, ...] = ()
    fault_labels: tuple[str, ...] = ()

    @field_validator("A", "B", "C", mode="before")
    @classmethod
    def as_matrix(cls, v: Any, info: ValidationInfo) -> np.ndarray:
        return _matrix(v, info.field_name)

    @field_validator("D", "F", mode="before")
    @classmethod
    def as_optional_matrix(cls, v: Any, info: ValidationInfo) -> np.ndarray | None:
        return None if v is None else _matrix(v, info.field_name)

    @model_validator(mode="after")
    def check_dimensions(self) -> "StateSpace":
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise ValueError(f"A must be square, got {self.A.shape}")
        if self.B.shape[0] != n:
            raise ValueError(f"B must have {n} rows, got {self.B.shape[0]}")
        if self.C.shape[1] != n:
            raise ValueError(f"C must have {n} columns, got {self.C.shape[1]}")
        p, q = self.B.shape[1], self.C.shape[0]
        if self.D is None:
            object.__setattr__(self, "D", np.zeros((q, p)))
        elif self.D.shape != (q, p):
            raise ValueError(f"D must be {q}x{p}, got {self.D.shape}")
        if self.F is not None and self.F.shape[0] != n:
            raise ValueError(f"F must have {n} rows, got {self.F.shape[0]}")
        labels = {
            "state_labels": n,
            "input_labels": p,
            "output_labels": q,
            "fault_labels": self.n_faults,
        }
        for name, size in labels.items():
            given = getattr(self, name)
            if given and len(given) != size:
                raise ValueError(f"{name} has {len(given)} entries, expected {size}")
        if self.fault_labels == () and self.n_faults:
            object.__setattr__(self, "fault_labels", tuple(f"f{k + 1}" for k in range(self.n_faults)))
        return self

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.B.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.C.shape[0]

    @property
    def n_faults(self) -> int:
        return 0 if self.F is None else self.F.shape[1]

    def _resolvent(self, z: complex, rhs: np.ndarray) -> np.ndarray:
        n = self.n_states
        if n == 0:
            return np.zeros((0, rhs.shape[1]), dtype=complex)
        return np.linalg.solve(z * np.eye(n) - self.A, rhs.astype(complex))

    def input_transfer(self, z: complex) -> np.ndarray:
        """C (zI - A)^-1 B + D."""
        return self.C @ self._resolvent(z, self.B) + self.D

    def fault_transfer(self, z: complex) -> np.ndarray:
        """C (zI - A)^-1 F (empty when no faults are attached)."""
        if self.F is None:
            return np.zeros((self.n_outputs, 0), dtype=complex)
        return self.C @ self._resolvent(z, self.F)

    def transfer(self, z: complex) -> np.ndarray:
        """[input_transfer, fault_transfer] side by side."""
        return np.hstack([self.input_transfer(z), self.fault_transfer(z)])


class FaultTap(BaseModel):
    """One block F column feeding a global fault input."""

    model_config = ConfigDict(frozen=True)

    side: Side
    component: int = Field(..., ge=1)
    column: int = Field(..., ge=0)


class FaultChannel(BaseModel):
    """Global fault input: the sum of its tapped block columns."""

    model_config = ConfigDict(frozen=True)

    label: str
    taps: tuple[FaultTap, ...] = Field(..., min_length=1)
