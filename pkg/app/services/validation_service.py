from copy import copy
from typing import Dict, List
import logging

import numpy as np

from app.config import settings
from app.models.cdr4 import cdr4_model
from app.models.robot import RobotModel, TaskState
from app.models.rpr2 import rpr2_model
from app.schemas.results import PropertyResult, ValidationReport
from app.services.controller_service import AdaptiveState, References, controller_service
from app.services.dynamics_service import dynamics_service
from app.services.parameter_service import parameter_service
from app.services.regressor_service import cofactor_adjugate, regressor_service

logger = logging.getLogger(__name__)

_TINY = 1e-300


def broken_model(model: RobotModel) -> RobotModel:
    """Copy of a model whose Coriolis matrix is zero"""
    clone = copy(model)
    clone.coriolis = lambda X, Xdot: np.zeros((model.n, model.n))
    return clone


def _rel(diff: np.ndarray, scale: float) -> float:
    return float(np.max(np.abs(diff)) / max(scale, _TINY))


class ValidationService:
    """Service for the sampled algebraic and structural property suite"""

    # property -> threshold; min_eigenvalue is a lower bound, every other residual an upper bound
    THRESHOLDS: Dict[str, float] = {
        'inertia_symmetry': 1e-10,
        'min_eigenvalue': 0.0,
        'skew_symmetry': 1e-5,
        'dynamics_regressor': 1e-9,
        'jacobian_factorization': 1e-12,
        'kinematic_regressor': 1e-12,
        'cramer': 1e-10,
        'pseudo_inverse': 1e-9,
        'closed_form_adjugate': 1e-8,
        'determinant_regressor': 1e-8,
        'adjugate_regressor': 1e-8,
        'eta_regressor': 1e-10,
        'mu_regressor': 1e-12,
        'closed_loop_regressor': 1e-8,
        'quotient_homogeneity': 1e-9,
        'perfect_knowledge': 1e-9,
        'adaptation_inner_product': 1e-9,
    }

    def run_suite(self, samples: int = None, seed: int = None, broken: bool = False) -> ValidationReport:
        """Sample every robot's workspace and check each property"""
        samples = settings.validation_samples if samples is None else samples
        seed = settings.validation_seed if seed is None else seed
        if samples < 1:
            raise ValueError("Validation needs at least one sample")
        report = ValidationReport(samples=samples, seed=seed)
        for index, model in enumerate([rpr2_model(), cdr4_model()]):
            rng = np.random.default_rng([seed, index])
            worst = self.check_model(model, samples, rng, broken)
            for name, residual in worst.items():
                threshold = self.THRESHOLDS[name]
                passed = residual > threshold if name == 'min_eigenvalue' else residual <= threshold
                report.results.append(PropertyResult(
                    robot=model.name, name=name, residual=residual, threshold=threshold, passed=passed,
                ))
        failed = [f"{r.robot}/{r.name}" for r in report.results if not r.passed]
        if failed:
            logger.warning(f"Validation failed for: {', '.join(failed)}")
        else:
            logger.info(f"Validation passed: {len(report.results)} properties, {samples} samples per robot")
        return report

    def check_model(self, model: RobotModel, samples: int, rng: np.random.Generator,
                    broken: bool = False) -> Dict[str, float]:
        """Worst residual of each property over the samples"""
        plant = broken_model(model) if broken else model
        box = model.workspace
        n = model.n
        K = 3.0 * np.eye(n)
        worst: Dict[str, float] = {name: 0.0 for name in self.THRESHOLDS}
        worst['min_eigenvalue'] = np.inf

        # one perturbed estimate set for the closed-loop checks
        nominal_phys = parameter_service.perturb_params(model.phys, 0.1, int(rng.integers(1 << 31)))
        other_phys = parameter_service.perturb_params(model.phys, 0.1, int(rng.integers(1 << 31)))
        nominal = parameter_service.nominal_estimates(model, nominal_phys)
        theta_hat_a = model.theta_a(other_phys)
        theta_hat_b = model.theta_b(other_phys)

        def record(name: str, value: float) -> None:
            worst[name] = max(worst[name], value)

        for _ in range(samples):
            X = rng.uniform(box[:, 0], box[:, 1])
            s = TaskState(X, rng.uniform(-1.0, 1.0, n))
            v_ref, a_ref, KS = rng.normal(size=(3, n))

            # structural properties
            M = plant.inertia(X)
            C = plant.coriolis(X, s.Xdot)
            G = plant.gravity(X)
            record('inertia_symmetry', _rel(M - M.T, np.max(np.abs(M))))
            worst['min_eigenvalue'] = min(worst['min_eigenvalue'], float(np.linalg.eigvalsh(M).min()))
            record('skew_symmetry', dynamics_service.check_skew_symmetry(plant, s, settings.skew_step))
            Y_c = model.dynamics_regressor(X, s.Xdot, v_ref, a_ref)
            direct = M @ a_ref + C @ v_ref + G
            scale = np.linalg.norm(M @ a_ref) + np.linalg.norm(C @ v_ref) + np.linalg.norm(G)
            record('dynamics_regressor', _rel(Y_c @ model.theta_c() - direct, scale))

            # factorization and adjugate split
            jf = regressor_service.factorize_jacobian(model, s)
            J = model.jacobian(X)
            record('jacobian_factorization', _rel(jf.J_new_T / jf.L - J.T, np.max(np.abs(J))))
            kin = regressor_service.kinematic_regressor(model, s)
            links = (J * jf.L[:, None]).T
            record('kinematic_regressor', _rel(kin.base_term + kin.Y @ kin.Theta - links, np.max(np.abs(links))))
            split = regressor_service.adjugate_determinant(jf, model.redundant)
            if model.redundant:
                gram = jf.J_new_T @ jf.J_new_T.T
                adj, _ = cofactor_adjugate(gram)
                cramer = gram @ adj - split.T * np.eye(n)
                cramer_scale = np.max(np.abs(gram)) * np.max(np.abs(adj))
            else:
                cramer = split.R @ jf.J_new_T - split.T * np.eye(n)
                cramer_scale = np.max(np.abs(split.R)) * np.max(np.abs(jf.J_new_T))
            record('cramer', _rel(cramer, cramer_scale))
            if abs(split.T) > 1e-6:
                pinv = np.linalg.pinv(jf.J_new_T)
                record('pseudo_inverse', float(np.linalg.norm(split.R / split.T - pinv) / np.linalg.norm(pinv)))
            record('closed_form_adjugate', _rel(model.closed_form_adjugate(X) - split.R, np.max(np.abs(split.R))))
            Y_b, theta_b = regressor_service.assemble_Yb(model, s)
            record('determinant_regressor', abs(Y_b @ theta_b - split.T) / max(abs(split.T), _TINY))

            # parameter-linear regressors
            Y_a, theta_a = regressor_service.assemble_Ya(model, s, v_ref, a_ref, KS)
            D = direct - KS
            record('adjugate_regressor', _rel(Y_a @ theta_a - split.R @ D,
                                              np.max(np.abs(split.R)) * np.max(np.abs(D))))
            Theta_t = rng.normal(size=model.Theta().shape)
            theta_a_t = rng.normal(size=model.r)
            Y_eta = regressor_service.assemble_Yeta(kin.Y, Y_a)
            lhs = Theta_t @ (Y_a @ theta_a_t)
            scale = float(np.sum(np.abs(Theta_t) @ (np.abs(Y_a) @ np.abs(theta_a_t))))
            record('eta_regressor', _rel(lhs - Y_eta @ np.kron(Theta_t.ravel(), theta_a_t), scale))
            theta_c_t = rng.normal(size=model.p)
            theta_b_t = rng.normal(size=model.k)
            Y_mu = regressor_service.assemble_Ymu(Y_c, Y_b)
            lhs = (Y_b @ theta_b_t) * theta_c_t
            scale = float(np.abs(Y_b) @ np.abs(theta_b_t)) * np.max(np.abs(theta_c_t))
            record('mu_regressor', _rel(lhs - Y_mu @ np.kron(theta_c_t, theta_b_t), scale))

            # closed loop under fixed estimates
            self._closed_loop(model, plant, s, References(s.Xdot - v_ref, v_ref, a_ref), K,
                              nominal, theta_hat_a, theta_hat_b, record)
        return worst

    def _closed_loop(self, model: RobotModel, plant: RobotModel, s: TaskState, refs: References,
                     K: np.ndarray, nominal, theta_hat_a: np.ndarray, theta_hat_b: np.ndarray, record) -> None:
        sizes = (model.r, model.m * model.r * model.l, model.p * model.k, model.k)
        state = self._fixed_state(model, nominal, theta_hat_a, theta_hat_b, sizes)
        out = controller_service.adaptive_control(model, s, refs, K, state)

        KS = K @ refs.S
        Xddot = dynamics_service.forward_acceleration(plant, s, out.tau)
        M = plant.inertia(s.X)
        CS = plant.coriolis(s.X, s.Xdot) @ refs.S
        MSdot = M @ (Xddot - refs.a_ref)
        lhs = MSdot + CS + KS
        Y_F = regressor_service.assemble_YF(model, s, refs.v_ref, refs.a_ref, KS,
                                            nominal.Theta, nominal.theta_c, theta_hat_b)
        theta_t = regressor_service.closed_loop_error(model, theta_hat_a, nominal.Theta, nominal.theta_c, theta_hat_b)
        edges = np.cumsum(sizes)[:-1]
        parts = zip(np.split(Y_F, edges, axis=1), np.split(theta_t, edges))
        scale = (np.linalg.norm(MSdot) + np.linalg.norm(CS) + np.linalg.norm(KS)
                 + sum(np.linalg.norm(block @ part) for block, part in parts))
        record('closed_loop_regressor', float(np.linalg.norm(lhs - Y_F @ theta_t) / max(scale, _TINY)))

        c = 1.7
        scaled = self._fixed_state(model, nominal, c * theta_hat_a, c * theta_hat_b, sizes)
        tau_scaled = controller_service.adaptive_control(model, s, refs, K, scaled).tau
        record('quotient_homogeneity', _rel(tau_scaled - out.tau, np.max(np.abs(out.tau))))

        truth = self._fixed_state(model, None, model.theta_a(), model.theta_b(), sizes)
        tau_true = controller_service.adaptive_control(model, s, refs, K, truth).tau
        tau_base = controller_service.baseline_control(model, s, refs, K).tau
        record('perfect_knowledge', _rel(tau_true - tau_base, np.max(np.abs(tau_base))))

        Lambda = np.linspace(0.5, 5.0, Y_F.shape[1])
        rate = controller_service.adaptation_step(Y_F, refs.S, Lambda)
        power = theta_t @ (Lambda * rate)
        expected = -refs.S @ Y_F @ theta_t
        scale = float(np.abs(refs.S) @ np.abs(Y_F) @ np.abs(theta_t))
        record('adaptation_inner_product', abs(power - expected) / max(scale, _TINY))

    @staticmethod
    def _fixed_state(model: RobotModel, nominal, theta_a: np.ndarray, theta_b: np.ndarray,
                     sizes) -> AdaptiveState:
        if nominal is None:
            nominal = parameter_service.nominal_estimates(model, model.phys)
        theta = np.concatenate([theta_a, np.zeros(sizes[1] + sizes[2]), theta_b])
        return AdaptiveState(
            theta_hat=theta, lower=np.full_like(theta, -np.inf), upper=np.full_like(theta, np.inf),
            sizes=sizes, nominal=nominal, target=theta, lambda_diag=np.ones_like(theta),
        )


# Global service instance
validation_service = ValidationService()
