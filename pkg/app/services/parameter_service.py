from typing import Dict, Optional, Tuple
import logging

import numpy as np

from app.config import settings
from app.models import monomial
from app.models.robot import RobotModel
from app.schemas.scenario import ControllerGains, LambdaScaling
from app.services.controller_service import AdaptiveState, NominalEstimates

logger = logging.getLogger(__name__)


class ParameterService:
    """Service for seeded parameter perturbation and adaptive-state construction"""

    @staticmethod
    def perturb_params(true_params: Dict[str, float], pct: float, seed: int) -> Dict[str, float]:
        """Multiply each physical parameter by (1 + u), u ~ U[-pct, pct] from the seed.

        Keys are drawn in sorted order so the draw does not depend on dict order.
        The keys are the model's independent physical parameters, not the
        scalars of the parameter schema: the identical-leg 2-RPR model has five
        (m, c, I_x, m_p, a), so all four leg masses move by the same draw, as do
        the four COM distances and the two leg inertias.
        """
        if not 0.0 <= pct < 1.0:
            raise ValueError("Perturbation must be in [0, 1)")
        rng = np.random.default_rng(seed)
        names = sorted(true_params)
        draws = rng.uniform(-pct, pct, size=len(names))
        return {name: true_params[name] * (1.0 + u) for name, u in zip(names, draws)}

    @staticmethod
    def nominal_estimates(model: RobotModel, nominal_phys: Dict[str, float]) -> NominalEstimates:
        return NominalEstimates(Theta=model.Theta(nominal_phys), theta_c=model.theta_c(nominal_phys))

    @staticmethod
    def _half_widths(values: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        return np.maximum(hi - values, values - lo)

    def fit_determinant_box(self, model: RobotModel, lo: np.ndarray, hi: np.ndarray, path: np.ndarray,
                               theta_b0: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray, float, np.ndarray]:
        """Fit the theta_b box so the worst-case estimated determinant along the
        path keeps the sign of T and at least determinant_margin of min |T|.

        The box always spans the true values and the initial estimate, and
        grows from that hull toward (lo, hi) by the largest feasible fraction.
        An initial estimate whose hull alone breaks the floor is moved toward
        the true values just far enough. Returns (lo, hi, fraction, estimate).
        """
        theta_b = model.theta_b()
        start = theta_b if theta_b0 is None else np.clip(theta_b0, lo, hi)
        Y_b = np.array([model.determinant_regressor(X) for X in path])
        T = Y_b @ theta_b
        sign = np.sign(T[0])
        if np.any(np.sign(T) != sign):
            raise ValueError(f"{model.name}: the true determinant changes sign along the path")
        floor = settings.determinant_margin * np.min(np.abs(T))
        signed = sign * Y_b

        def worst(box: Tuple[np.ndarray, np.ndarray]) -> float:
            return float(np.min(np.minimum(signed * box[0], signed * box[1]).sum(axis=1)))

        def hull(point: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            return np.minimum(theta_b, point), np.maximum(theta_b, point)

        def largest(feasible) -> float:
            low, high = 0.0, 1.0
            for _ in range(60):
                mid = 0.5 * (low + high)
                if feasible(mid):
                    low = mid
                else:
                    high = mid
            return low

        if worst(hull(start)) < floor:
            pull = largest(lambda beta: worst(hull(theta_b + beta * (start - theta_b))) >= floor)
            moved = theta_b + pull * (start - theta_b)
            logger.warning(
                f"{model.name}: initial determinant estimates moved toward the true values "
                f"(kept {pull:.4f} of the offset, max move {np.max(np.abs(moved - start)):.3e})"
            )
            start = moved

        core_lo, core_hi = hull(start)

        def box(scale: float) -> Tuple[np.ndarray, np.ndarray]:
            return core_lo - scale * (core_lo - lo), core_hi + scale * (hi - core_hi)

        if worst(box(1.0)) >= floor:
            return lo, hi, 1.0, start
        scale = largest(lambda s: worst(box(s)) >= floor)
        logger.info(f"{model.name}: determinant parameter box grown to {scale:.4f} of the room around its estimates")
        return (*box(scale), scale, start)

    def build_adaptive_state(self, model: RobotModel, nominal_phys: Dict[str, float], bound_pct: float,
                             path: np.ndarray, gains: ControllerGains) -> AdaptiveState:
        """Initial estimates, projection bounds, constant targets and adaptation gains"""
        try:
            phys = model.phys
            nominal = self.nominal_estimates(model, nominal_phys)

            theta_a, theta_b, theta_c = model.theta_a(), model.theta_b(), model.theta_c()
            Theta = model.Theta()
            lo_a, hi_a = monomial.bounds(model.theta_a_terms, phys, bound_pct)
            lo_b, hi_b = monomial.bounds(model.theta_b_terms, phys, bound_pct)
            lo_c, hi_c = monomial.bounds(model.theta_c_terms, phys, bound_pct)
            lo_T = np.array([[t.bounds(phys, bound_pct)[0] for t in row] for row in model.Theta_terms])
            hi_T = np.array([[t.bounds(phys, bound_pct)[1] for t in row] for row in model.Theta_terms])
            theta_a0 = model.theta_a(nominal_phys)
            lo_b, hi_b, _, theta_b0 = self.fit_determinant_box(
                model, lo_b, hi_b, path, model.theta_b(nominal_phys))

            w_a = self._half_widths(theta_a, lo_a, hi_a)
            w_b = self._half_widths(theta_b, lo_b, hi_b)
            w_c = self._half_widths(theta_c, lo_c, hi_c)
            w_T = self._half_widths(Theta, lo_T, hi_T)
            w_eta = np.kron(w_T.ravel(), w_a)
            w_mu = np.kron(w_c, w_b)

            # eta/mu targets are fixed by the initial errors
            eta_target = -np.kron((nominal.Theta - Theta).ravel(), theta_a0 - theta_a)
            mu_target = -np.kron(nominal.theta_c - theta_c, theta_b0 - theta_b)

            sizes = (len(theta_a), len(w_eta), len(w_mu), len(theta_b))
            theta_hat = np.concatenate([theta_a0, np.zeros(sizes[1]), np.zeros(sizes[2]), theta_b0])
            lower = np.concatenate([lo_a, -w_eta, -w_mu, lo_b])
            upper = np.concatenate([hi_a, w_eta, w_mu, hi_b])
            target = np.concatenate([theta_a, eta_target, mu_target, theta_b])

            blocks = gains.lambda_blocks()
            lambda_diag = np.concatenate([np.full(size, value) for size, value in zip(sizes, blocks)])
            if gains.lambda_scaling == LambdaScaling.NOMINAL:
                sigma = np.concatenate([w_a, w_eta, w_mu, w_b])
                lambda_diag = np.where(sigma > 0, lambda_diag / np.where(sigma > 0, sigma, 1.0) ** 2, lambda_diag)

            logger.info(
                f"{model.name}: adaptive state with {len(theta_hat)} parameters "
                f"(a={sizes[0]}, eta={sizes[1]}, mu={sizes[2]}, b={sizes[3]})"
            )
            return AdaptiveState(
                theta_hat=theta_hat, lower=lower, upper=upper, sizes=sizes,
                nominal=nominal, target=target, lambda_diag=lambda_diag,
            )
        except Exception as e:
            logger.error(f"Error building adaptive state: {e}")
            raise


# Global service instance
parameter_service = ParameterService()
