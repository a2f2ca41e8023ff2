from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Tuple
import logging

import numpy as np

from app.config import settings
from app.core.exceptions import EstimatedSingularityError, NumericalFault
from app.models.robot import JacobianFactorization, RobotModel, TaskState
from app.services.dynamics_service import dynamics_service
from app.services.regressor_service import regressor_service

logger = logging.getLogger(__name__)


class References(NamedTuple):
    """Sliding variable and virtual reference velocity/acceleration"""
    S: np.ndarray
    v_ref: np.ndarray
    a_ref: np.ndarray


@dataclass(frozen=True)
class NominalEstimates:
    """Fixed kinematic and dynamic estimates used inside J_hat and D_hat"""
    Theta: np.ndarray
    theta_c: np.ndarray


@dataclass(frozen=True)
class AdaptiveState:
    """theta_hat_F = (a, eta, mu, b) with element-wise projection bounds"""
    theta_hat: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sizes: Tuple[int, int, int, int]
    nominal: NominalEstimates
    target: np.ndarray
    lambda_diag: np.ndarray

    def split(self, theta: Optional[np.ndarray] = None) -> Tuple[np.ndarray, ...]:
        theta = self.theta_hat if theta is None else theta
        edges = np.cumsum(self.sizes)[:-1]
        return tuple(np.split(theta, edges))

    def with_theta(self, theta: np.ndarray) -> "AdaptiveState":
        return replace(self, theta_hat=theta)

    def clamp(self, theta: np.ndarray) -> np.ndarray:
        return np.clip(theta, self.lower, self.upper)

    @property
    def theta_tilde(self) -> np.ndarray:
        return self.theta_hat - self.target


@dataclass(frozen=True)
class ControlOutput:
    tau: np.ndarray
    S: np.ndarray
    V: float
    T_hat: float


class ControllerService:
    """Service for the baseline and adaptive trajectory-tracking laws"""

    def __init__(self):
        self.eps_determinant = settings.eps_determinant

    @staticmethod
    def sliding_variables(s: TaskState, xd: np.ndarray, vd: np.ndarray, ad: np.ndarray,
                          Gamma: np.ndarray) -> References:
        """S = e_dot + Gamma e, v_ref = vd - Gamma e, a_ref = ad - Gamma e_dot"""
        e = s.X - xd
        e_dot = s.Xdot - vd
        v_ref = vd - Gamma @ e
        a_ref = ad - Gamma @ e_dot
        return References(S=s.Xdot - v_ref, v_ref=v_ref, a_ref=a_ref)

    def _guard(self, model: RobotModel, s: TaskState, T_hat: float, tau: np.ndarray) -> None:
        if not np.isfinite(T_hat) or not np.all(np.isfinite(tau)):
            raise NumericalFault(f"{model.name}: non-finite actuator forces at X={s.X}")

    def _check_determinant(self, model: RobotModel, s: TaskState, T_hat: float) -> None:
        if not abs(T_hat) > self.eps_determinant:
            raise EstimatedSingularityError(
                f"{model.name}: estimated determinant {T_hat:.3e} at X={s.X} is within {self.eps_determinant:g} of 0"
            )

    def baseline_control(self, model: RobotModel, s: TaskState, refs: References, K: np.ndarray,
                         nominal: Optional[NominalEstimates] = None) -> ControlOutput:
        """tau = L (R/T)(M a_ref + C v_ref + G - K S), non-adaptive.

        Without nominal estimates the true model is used. With them, J_hat
        uses the nominal Theta and the dynamics use Y_c theta_c(nominal).
        """
        try:
            L = dynamics_service.check_state(model, s)
            KS = K @ refs.S
            dyn = dynamics_service.evaluate_dynamics(model, s)
            if nominal is None:
                jf = regressor_service.factorize_jacobian(model, s)
                D = dyn.M @ refs.a_ref + dyn.C @ refs.v_ref + dyn.G - KS
            else:
                base, Y = model.kinematic_terms(s.X)
                jf = JacobianFactorization(J_new_T=base + Y @ nominal.Theta, L=L)
                Y_c = model.dynamics_regressor(s.X, s.Xdot, refs.v_ref, refs.a_ref)
                D = Y_c @ nominal.theta_c - KS
            split = regressor_service.adjugate_determinant(jf, model.redundant)
            self._check_determinant(model, s, split.T)
            tau = L * (split.R @ D) / split.T
            self._guard(model, s, split.T, tau)
            V = 0.5 * float(refs.S @ dyn.M @ refs.S)
            return ControlOutput(tau=tau, S=refs.S, V=V, T_hat=split.T)
        except Exception as e:
            logger.error(f"Error computing baseline control: {e}")
            raise

    def adaptive_control(self, model: RobotModel, s: TaskState, refs: References, K: np.ndarray,
                         state: AdaptiveState) -> ControlOutput:
        """tau = L (Y_a theta_hat_a) / (Y_b theta_hat_b)"""
        return self.adaptive_update(model, s, refs, K, state)[0]

    def adaptive_update(self, model: RobotModel, s: TaskState, refs: References, K: np.ndarray,
                        state: AdaptiveState) -> Tuple[ControlOutput, np.ndarray]:
        """Adaptive control output and the projected estimate rate at one state"""
        try:
            if not np.all(np.isfinite(state.theta_hat)):
                raise NumericalFault(f"{model.name}: non-finite parameter estimates")
            L = dynamics_service.check_state(model, s)
            KS = K @ refs.S
            theta_a, _, _, theta_b = state.split()
            Y_b = model.determinant_regressor(s.X)
            T_hat = float(Y_b @ theta_b)
            self._check_determinant(model, s, T_hat)
            Y_c = model.dynamics_regressor(s.X, s.Xdot, refs.v_ref, refs.a_ref)
            Y_a = model.adjugate_regressor(s.X, s.Xdot, refs.v_ref, refs.a_ref, KS, Y_c=Y_c)
            tau = L * (Y_a @ theta_a) / T_hat
            self._guard(model, s, T_hat, tau)

            Y_F = regressor_service.assemble_YF(
                model, s, refs.v_ref, refs.a_ref, KS,
                state.nominal.Theta, state.nominal.theta_c, theta_b, Y_a=Y_a, Y_c=Y_c,
            )
            rate = self.adaptation_step(Y_F, refs.S, state.lambda_diag, state)
            V = self.lyapunov_value(refs.S, model.inertia(s.X), state.theta_tilde, state.lambda_diag)
            return ControlOutput(tau=tau, S=refs.S, V=V, T_hat=T_hat), rate
        except Exception as e:
            logger.error(f"Error computing adaptive control: {e}")
            raise

    @staticmethod
    def adaptation_step(Y_F: np.ndarray, S: np.ndarray, Lambda: np.ndarray,
                        state: Optional[AdaptiveState] = None) -> np.ndarray:
        """rate = -Lambda^-1 Y_F^T S, outward components zeroed on active bounds"""
        Lambda = np.asarray(Lambda, dtype=float)
        g = Y_F.T @ S
        rate = -np.linalg.solve(Lambda, g) if Lambda.ndim == 2 else -g / Lambda
        if state is not None:
            theta = state.theta_hat
            at_upper = (theta >= state.upper) & (rate > 0)
            at_lower = (theta <= state.lower) & (rate < 0)
            rate = np.where(at_upper | at_lower, 0.0, rate)
        return rate

    @staticmethod
    def lyapunov_value(S: np.ndarray, M: np.ndarray, theta_tilde: np.ndarray, Lambda: np.ndarray) -> float:
        """V = 1/2 S'MS + 1/2 theta_tilde' Lambda theta_tilde"""
        Lambda = np.asarray(Lambda, dtype=float)
        weighted = Lambda @ theta_tilde if Lambda.ndim == 2 else Lambda * theta_tilde
        return 0.5 * float(S @ M @ S) + 0.5 * float(theta_tilde @ weighted)

    @staticmethod
    def consistency_residual(model: RobotModel, state: AdaptiveState) -> float:
        """Gap between the free eta/mu errors and the bilinear errors they stand for"""
        theta_a, eta, mu, theta_b = state.split()
        _, eta_target, mu_target, _ = state.split(state.target)
        Theta_tilde = state.nominal.Theta - model.Theta()
        theta_c_tilde = state.nominal.theta_c - model.theta_c()
        eta_gap = (eta - eta_target) - np.kron(Theta_tilde.ravel(), theta_a - model.theta_a())
        mu_gap = (mu - mu_target) - np.kron(theta_c_tilde, theta_b - model.theta_b())
        return float(np.sqrt(eta_gap @ eta_gap + mu_gap @ mu_gap))


# Global service instance
controller_service = ControllerService()
