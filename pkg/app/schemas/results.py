from pydantic import BaseModel, Field, computed_field
from typing import List, Optional


class LyapunovSummary(BaseModel):
    v_initial: float = Field(..., description="V at t = 0")
    v_final: float = Field(..., description="V at the last sample")
    max_step_increase: float = Field(..., description="Largest one-step increase of V")
    longest_increase_run: int = Field(..., description="Longest run of consecutive increases")
    bound_fraction: Optional[float] = Field(None, description="Share of samples with dV/dt <= -S'KS + tol")
    monotone: bool = Field(..., description="Step increases and increase runs within their limits")
    criterion_met: Optional[bool] = Field(None, description="Monotone and bound fraction at or above its limit")


class MetricsSummary(BaseModel):
    scenario: str = Field(..., description="Scenario name")
    robot: str = Field(..., description="Robot kind")
    controller: str = Field(..., description="Control law")
    steps: int = Field(..., description="Integration steps")
    tail_fraction: float = Field(..., description="Tail window as a fraction of the run")
    tail_max_error: List[float] = Field(..., description="Per-axis max |error| over the tail (m)")
    tail_rms_error: List[float] = Field(..., description="Per-axis RMS error over the tail (m)")
    settling_time: List[Optional[float]] = Field(..., description="Per-axis time to stay inside the band (s)")
    settling_band: float = Field(..., description="Settling band (m)")
    final_error: List[float] = Field(..., description="Per-axis error at the last sample (m)")
    max_abs_tau: float = Field(..., description="Largest actuator force magnitude (N)")
    max_tau_step: float = Field(..., description="Largest per-step actuator force change (N)")
    min_tau: float = Field(..., description="Smallest actuator force (N)")
    min_abs_t_hat: float = Field(..., description="Smallest |estimated determinant|")
    lyapunov: LyapunovSummary
    consistency_residual: float = Field(default=0.0, description="Largest gap between adapted eta/mu errors and their bilinear counterparts")


class PropertyResult(BaseModel):
    robot: str = Field(..., description="Robot kind")
    name: str = Field(..., description="Property name")
    residual: float = Field(..., description="Worst observed residual")
    threshold: float = Field(..., description="Pass threshold")
    passed: bool = Field(..., description="Whether the residual is within the threshold")


class ValidationReport(BaseModel):
    samples: int = Field(..., description="Samples per robot")
    seed: int = Field(..., description="Sampling seed")
    results: List[PropertyResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


class ComparisonSummary(BaseModel):
    adaptive: MetricsSummary
    baseline: MetricsSummary

    @computed_field
    @property
    def adaptive_better(self) -> List[bool]:
        """Per axis: adaptive tail max error strictly below the baseline's"""
        return [a < b for a, b in zip(self.adaptive.tail_max_error, self.baseline.tail_max_error)]
