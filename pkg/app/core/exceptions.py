"""
Error hierarchy for model evaluation, control and scenario handling
"""
from typing import List, Optional


class RobotControlError(Exception):
    """Base class for all package errors"""


class ScenarioConfigError(RobotControlError, ValueError):
    """Scenario file cannot be read or does not validate"""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        return base + "\n" + "\n".join(f"  - {d}" for d in self.diagnostics)


class PathOutsideWorkspaceError(RobotControlError, ValueError):
    """Desired path leaves the workspace or passes too close to a singularity"""


class ControlFault(RobotControlError, RuntimeError):
    """A closed-loop run had to stop"""

    kind = "fault"


class SingularConfigurationError(ControlFault):
    kind = "singular_configuration"


class DegenerateGeometryError(SingularConfigurationError):
    kind = "degenerate_geometry"


class EstimatedSingularityError(ControlFault):
    kind = "estimated_singularity"


class NumericalFault(ControlFault):
    kind = "numerical_fault"


class LogSchemaError(RobotControlError, ValueError):
    """A run log does not have the expected CSV columns, or has no rows"""
