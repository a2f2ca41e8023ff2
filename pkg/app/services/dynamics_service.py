from typing import Tuple
import logging

import numpy as np

from app.config import settings
from app.core.exceptions import (
    DegenerateGeometryError, NumericalFault, SingularConfigurationError
)
from app.models.cdr4 import cdr4_model
from app.models.robot import DynamicsEval, RobotModel, TaskState
from app.models.rpr2 import rpr2_model
from app.schemas.robot import RobotSpec

logger = logging.getLogger(__name__)


class DynamicsService:
    """Service for task-space rigid-body dynamics of the parallel robots"""

    def __init__(self):
        self.eps_length = settings.eps_length

    def build_model(self, robot: RobotSpec) -> RobotModel:
        """Build the model for a robot section of a scenario"""
        if robot.kind == "rpr2":
            return rpr2_model(robot.params)
        if robot.kind == "cdr4":
            return cdr4_model(robot.params)
        raise ValueError(f"Unknown robot kind: {robot.kind}")

    def check_state(self, model: RobotModel, s: TaskState) -> np.ndarray:
        """Reject non-finite states, states across the base and collapsed links.

        Returns the link lengths on success.
        """
        if not (np.all(np.isfinite(s.X)) and np.all(np.isfinite(s.Xdot))):
            raise NumericalFault(f"Non-finite task state X={s.X}, Xdot={s.Xdot}")
        if not model.in_domain(s.X):
            raise SingularConfigurationError(f"{model.name}: state {s.X} is outside the geometric workspace")
        L = model.lengths(s.X)
        if np.any(L <= self.eps_length):
            raise DegenerateGeometryError(
                f"{model.name}: link length {L.min():.3e} m at X={s.X} is below {self.eps_length:g}"
            )
        return L

    def evaluate_dynamics(self, model: RobotModel, s: TaskState) -> DynamicsEval:
        """M, C and G at a state"""
        self.check_state(model, s)
        return DynamicsEval(
            M=model.inertia(s.X),
            C=model.coriolis(s.X, s.Xdot),
            G=model.gravity(s.X),
        )

    def jacobian(self, model: RobotModel, s: TaskState) -> np.ndarray:
        """J (m x n) with rows of unit link directions"""
        self.check_state(model, s)
        return model.jacobian(s.X)

    def forward_acceleration(self, model: RobotModel, s: TaskState, tau: np.ndarray) -> np.ndarray:
        """Xddot = M^-1 (J^T tau - C Xdot - G)"""
        dyn = self.evaluate_dynamics(model, s)
        J = model.jacobian(s.X)
        rhs = J.T @ np.asarray(tau, dtype=float) - dyn.C @ s.Xdot - dyn.G
        try:
            return np.linalg.solve(dyn.M, rhs)
        except np.linalg.LinAlgError:
            min_eig = float(np.linalg.eigvalsh(0.5 * (dyn.M + dyn.M.T)).min())
            raise SingularConfigurationError(
                f"{model.name}: singular inertia at X={s.X} (min eigenvalue {min_eig:.3e})"
            )

    def check_skew_symmetry(self, model: RobotModel, s: TaskState, h: float = None) -> float:
        """max |A + A^T| for A = Mdot - 2C, Mdot by central difference along Xdot"""
        h = h or settings.skew_step
        if h <= 0:
            raise ValueError("Finite-difference step must be greater than 0")
        M_plus = model.inertia(s.X + h * s.Xdot)
        M_minus = model.inertia(s.X - h * s.Xdot)
        M_dot = (M_plus - M_minus) / (2.0 * h)
        A = M_dot - 2.0 * model.coriolis(s.X, s.Xdot)
        return float(np.max(np.abs(A + A.T)))

    def dynamics_regressor(self, model: RobotModel, s: TaskState,
                           v_ref: np.ndarray, a_ref: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(Y_c, theta_c) with Y_c theta_c = M a_ref + C v_ref + G"""
        self.check_state(model, s)
        Y_c = model.dynamics_regressor(s.X, s.Xdot, np.asarray(v_ref, dtype=float), np.asarray(a_ref, dtype=float))
        return Y_c, model.theta_c()


# Global service instance
dynamics_service = DynamicsService()
