from typing import Optional, Tuple
import logging

import numpy as np

from app.config import settings
from app.core.exceptions import DegenerateGeometryError, EstimatedSingularityError
from app.models.robot import (
    AdjugateSplit, JacobianFactorization, KinematicRegressor, RobotModel, TaskState
)

logger = logging.getLogger(__name__)


def cofactor_adjugate(A: np.ndarray) -> Tuple[np.ndarray, float]:
    """Adjugate and determinant of a 1x1, 2x2 or 3x3 matrix by cofactors"""
    A = np.asarray(A, dtype=float)
    size = A.shape[0]
    if A.shape != (size, size) or size > 3:
        raise ValueError(f"Cofactor adjugate supports square matrices up to 3x3, got {A.shape}")
    if size == 1:
        return np.ones((1, 1)), float(A[0, 0])
    if size == 2:
        adj = np.array([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]])
        return adj, float(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
    c1, c2, c3 = A[:, 0], A[:, 1], A[:, 2]
    adj = np.array([np.cross(c2, c3), np.cross(c3, c1), np.cross(c1, c2)])
    return adj, float(c1 @ np.cross(c2, c3))


class RegressorService:
    """Service for the Jacobian factorization and the linear-in-parameter regressors"""

    def __init__(self):
        self.eps_length = settings.eps_length
        self.eps_determinant = settings.eps_determinant

    def factorize_jacobian(self, model: RobotModel, s: TaskState) -> JacobianFactorization:
        """J^T = J_new_T diag(L)^-1 with J_new_T polynomial in the state"""
        L = model.lengths(s.X)
        if np.any(L <= self.eps_length):
            raise DegenerateGeometryError(
                f"{model.name}: link length {L.min():.3e} m at X={s.X} is below {self.eps_length:g}"
            )
        base, Y = model.kinematic_terms(s.X)
        return JacobianFactorization(J_new_T=base + Y @ model.Theta(), L=L)

    def kinematic_regressor(self, model: RobotModel, s: TaskState) -> KinematicRegressor:
        base, Y = model.kinematic_terms(s.X)
        return KinematicRegressor(Y=Y, Theta=model.Theta(), base_term=base)

    def adjugate_determinant(self, jf: JacobianFactorization, redundant: bool) -> AdjugateSplit:
        """R and T with R/T the (pseudo-)inverse of J_new_T; valid at T = 0"""
        J_new_T = jf.J_new_T
        if redundant:
            adj, T = cofactor_adjugate(J_new_T @ J_new_T.T)
            return AdjugateSplit(R=J_new_T.T @ adj, T=T)
        adj, T = cofactor_adjugate(J_new_T)
        return AdjugateSplit(R=adj, T=T)

    def assemble_Yb(self, model: RobotModel, s: TaskState) -> Tuple[np.ndarray, np.ndarray]:
        """(Y_b, theta_b) with Y_b theta_b = T; Y_b is returned as a length-k vector"""
        return model.determinant_regressor(s.X), model.theta_b()

    def assemble_Ya(self, model: RobotModel, s: TaskState, v_ref: np.ndarray,
                    a_ref: np.ndarray, KS: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(Y_a, theta_a) with Y_a theta_a = R (M a_ref + C v_ref + G - KS); Y_a is m x r"""
        Y_a = model.adjugate_regressor(s.X, s.Xdot, np.asarray(v_ref, dtype=float),
                                       np.asarray(a_ref, dtype=float), KS)
        return Y_a, model.theta_a()

    @staticmethod
    def assemble_Yeta(Y: np.ndarray, Y_a: np.ndarray) -> np.ndarray:
        """Y_eta (l x m*r*l): Theta_tilde (Y_a theta_a_tilde) = Y_eta kron(vec(Theta_tilde), theta_a_tilde)"""
        l = Y.shape[1]
        return np.kron(np.eye(l), Y_a.reshape(1, -1))

    @staticmethod
    def assemble_Ymu(Y_c: np.ndarray, Y_b: np.ndarray) -> np.ndarray:
        """Y_mu (p x p*k): (Y_b theta_b_tilde) theta_c_tilde = Y_mu kron(theta_c_tilde, theta_b_tilde)"""
        p = Y_c.shape[1]
        return np.kron(np.eye(p), np.asarray(Y_b, dtype=float).reshape(1, -1))

    def assemble_YF(self, model: RobotModel, s: TaskState, v_ref: np.ndarray, a_ref: np.ndarray,
                    KS: np.ndarray, Theta_hat: np.ndarray, theta_hat_c: np.ndarray,
                    theta_hat_b: np.ndarray, Y_a: Optional[np.ndarray] = None,
                    Y_c: Optional[np.ndarray] = None) -> np.ndarray:
        """Closed-loop regressor with M Sdot + C S + K S = Y_F theta_F_tilde.

        Blocks are ordered (a, eta, mu, b). Theta_hat and theta_hat_c are the
        values used inside J_hat and D_hat = Y_c theta_hat_c - KS. Y_a and Y_c
        may be supplied when the caller already evaluated them at this state.
        """
        Y_b = model.determinant_regressor(s.X)
        T_hat = float(Y_b @ theta_hat_b)
        if not abs(T_hat) > self.eps_determinant:
            raise EstimatedSingularityError(
                f"{model.name}: estimated determinant {T_hat:.3e} at X={s.X} is within {self.eps_determinant:g} of 0"
            )
        base, Y = model.kinematic_terms(s.X)
        if Y_c is None:
            Y_c = model.dynamics_regressor(s.X, s.Xdot, v_ref, a_ref)
        if Y_a is None:
            Y_a = model.adjugate_regressor(s.X, s.Xdot, v_ref, a_ref, KS, Y_c=Y_c)
        J_hat = base + Y @ Theta_hat
        D_hat = Y_c @ theta_hat_c - KS
        blocks = [
            J_hat @ Y_a,
            -Y @ self.assemble_Yeta(Y, Y_a),
            Y_c @ self.assemble_Ymu(Y_c, Y_b),
            -np.outer(D_hat, Y_b),
        ]
        return np.hstack(blocks) / T_hat

    @staticmethod
    def closed_loop_error(model: RobotModel, theta_hat_a: np.ndarray, Theta_hat: np.ndarray,
                          theta_hat_c: np.ndarray, theta_hat_b: np.ndarray) -> np.ndarray:
        """theta_F_tilde of the actual bilinear errors for the given estimates"""
        a = theta_hat_a - model.theta_a()
        Theta = Theta_hat - model.Theta()
        c = theta_hat_c - model.theta_c()
        b = theta_hat_b - model.theta_b()
        return np.concatenate([a, np.kron(Theta.ravel(), a), np.kron(c, b), b])


# Global service instance
regressor_service = RegressorService()
