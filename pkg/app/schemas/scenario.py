from pydantic import BaseModel, Field, validator, model_validator
from typing import List, Optional, Union
from enum import Enum
import numpy as np

from app.schemas.robot import RobotSpec


class ControllerKind(str, Enum):
    ADAPTIVE = "adaptive"
    BASELINE = "baseline"


class TrajectoryKind(str, Enum):
    CIRCLE = "circle"
    SPIRAL = "spiral"
    HOLD = "hold"


class LambdaScaling(str, Enum):
    IDENTITY = "identity"
    NOMINAL = "nominal"


GainValue = Union[float, List[float]]


class TrajectorySpec(BaseModel):
    kind: TrajectoryKind = Field(..., description="Trajectory family")
    center: List[float] = Field(..., description="Circle center, or hold point (m)")
    radius: float = Field(default=0.0, description="Circle radius (m)")
    period: float = Field(default=5.0, description="Revolution period (s)")
    vertical_rate: float = Field(default=0.0, description="Constant rate along the last axis (m/s)")

    @validator('radius')
    def validate_radius(cls, v):
        if v < 0:
            raise ValueError('Radius cannot be negative')
        return v

    @validator('period')
    def validate_period(cls, v):
        if v <= 0:
            raise ValueError('Period must be greater than 0')
        return v

    @validator('center')
    def validate_center(cls, v):
        if len(v) < 2:
            raise ValueError('Center needs at least two coordinates')
        return v

    @model_validator(mode='after')
    def validate_spiral(self):
        if self.kind == TrajectoryKind.SPIRAL and len(self.center) < 3:
            raise ValueError('Spiral trajectory needs a three-dimensional center')
        return self


class ControllerGains(BaseModel):
    gamma: GainValue = Field(..., description="Sliding-surface gain, scalar or diagonal (1/s)")
    k: GainValue = Field(..., description="Damping gain, scalar or diagonal")
    lambda_: GainValue = Field(
        ..., alias="lambda",
        description="Adaptation gain, scalar or per-block [a, eta, mu, b]",
    )
    lambda_scaling: LambdaScaling = Field(default=LambdaScaling.IDENTITY, description="Adaptation gain units")

    model_config = {"populate_by_name": True}

    @validator('gamma', 'k', 'lambda_')
    def validate_positive(cls, v):
        values = v if isinstance(v, list) else [v]
        if not values or any(x <= 0 for x in values):
            raise ValueError('Gains must be positive')
        return v

    @validator('lambda_')
    def validate_lambda_blocks(cls, v):
        if isinstance(v, list) and len(v) != 4:
            raise ValueError('Per-block adaptation gain needs exactly four values [a, eta, mu, b]')
        return v

    @staticmethod
    def _diag(value: GainValue, n: int) -> np.ndarray:
        if isinstance(value, list):
            if len(value) != n:
                raise ValueError(f"Gain has {len(value)} entries, expected {n}")
            return np.diag(np.asarray(value, dtype=float))
        return float(value) * np.eye(n)

    def gamma_matrix(self, n: int) -> np.ndarray:
        return self._diag(self.gamma, n)

    def k_matrix(self, n: int) -> np.ndarray:
        return self._diag(self.k, n)

    def lambda_blocks(self) -> List[float]:
        if isinstance(self.lambda_, list):
            return [float(x) for x in self.lambda_]
        return [float(self.lambda_)] * 4


class Scenario(BaseModel):
    name: str = Field(..., description="Scenario name")
    robot: RobotSpec = Field(..., discriminator="kind")
    controller: ControllerKind = Field(default=ControllerKind.ADAPTIVE, description="Control law")
    perturbation_pct: float = Field(default=0.0, description="Seeded parameter perturbation (fraction)")
    bound_pct: float = Field(default=0.15, description="Projection half-width (fraction)")
    gains: ControllerGains = Field(..., description="Controller gains")
    trajectory: TrajectorySpec = Field(..., description="Desired trajectory")
    x0: List[float] = Field(..., description="Initial position (m)")
    v0: Optional[List[float]] = Field(None, description="Initial velocity (m/s)")
    duration: float = Field(..., description="Run length (s)")
    dt: float = Field(default=1e-3, description="Integration step (s)")
    seed: int = Field(default=0, description="Perturbation and noise seed")
    noise_std: float = Field(default=0.0, description="Position measurement noise (m)")

    @validator('perturbation_pct')
    def validate_perturbation(cls, v):
        if v < 0 or v >= 1:
            raise ValueError('Perturbation must be in [0, 1)')
        return v

    @validator('bound_pct')
    def validate_bound(cls, v):
        if v <= 0 or v >= 1:
            raise ValueError('Bound half-width must be in (0, 1)')
        return v

    @validator('dt', 'duration')
    def validate_time(cls, v):
        if v <= 0:
            raise ValueError('Time values must be greater than 0')
        return v

    @validator('noise_std')
    def validate_noise(cls, v):
        if v < 0:
            raise ValueError('Noise standard deviation cannot be negative')
        return v

    @model_validator(mode='after')
    def validate_consistency(self):
        n = 2 if self.robot.kind == "rpr2" else 3
        if self.duration < self.dt:
            raise ValueError('Duration must be at least one step')
        if self.perturbation_pct >= self.bound_pct:
            raise ValueError('Perturbation must be smaller than the projection bound')
        if len(self.x0) != n:
            raise ValueError(f'x0 must have {n} entries')
        if self.v0 is not None and len(self.v0) != n:
            raise ValueError(f'v0 must have {n} entries')
        if len(self.trajectory.center) != n:
            raise ValueError(f'Trajectory center must have {n} entries')
        return self

    @property
    def n(self) -> int:
        return len(self.x0)

    @property
    def steps(self) -> int:
        return int(round(self.duration / self.dt))
