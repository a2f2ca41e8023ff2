"""
Closed-loop simulation
Fixed-step RK4 over the augmented state (X, Xdot, theta_hat_F) with the
controller re-evaluated at every stage and the estimates clamped after
every full step.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Tuple
import logging

import numpy as np
import pandas as pd

from app.config import settings
from app.core.exceptions import ControlFault, LogSchemaError, NumericalFault
from app.core.logging import get_run_logger
from app.models.robot import RobotModel, TaskState
from app.schemas.scenario import ControllerKind, Scenario
from app.services.controller_service import (
    AdaptiveState, ControlOutput, NominalEstimates, controller_service
)
from app.services.dynamics_service import dynamics_service
from app.services.parameter_service import parameter_service
from app.services.trajectory_service import trajectory_service

logger = logging.getLogger(__name__)


def log_columns(n: int, m: int) -> List[str]:
    """t,x1..xn,xd1..xdn,e1..en,s1..sn,tau1..taum,V,That"""
    axes = range(1, n + 1)
    return (
        ["t"]
        + [f"x{i}" for i in axes]
        + [f"xd{i}" for i in axes]
        + [f"e{i}" for i in axes]
        + [f"s{i}" for i in axes]
        + [f"tau{j}" for j in range(1, m + 1)]
        + ["V", "That"]
    )


@dataclass
class SimLog:
    """Time series of one run plus run-level diagnostics"""
    frame: pd.DataFrame
    n: int
    m: int
    scenario: str = ""
    robot: str = ""
    controller: str = ""
    K: Optional[np.ndarray] = None
    theta_final: Optional[np.ndarray] = None
    bound_overshoot: float = 0.0
    consistency_residual: float = 0.0
    extras: dict = field(default_factory=dict)

    def block(self, prefix: str) -> np.ndarray:
        count = self.m if prefix == "tau" else self.n
        return self.frame[[f"{prefix}{i}" for i in range(1, count + 1)]].to_numpy()

    @property
    def t(self) -> np.ndarray:
        return self.frame["t"].to_numpy()

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        digits = settings.csv_significant_digits
        self.frame.to_csv(path, index=False, float_format=f"%.{digits}g", lineterminator="\n")
        return path

    @classmethod
    def from_csv(cls, path: Path) -> "SimLog":
        """Read a log back, checking the column layout"""
        path = Path(path)
        try:
            frame = pd.read_csv(path)
        except FileNotFoundError:
            raise LogSchemaError(f"Log file not found: {path}")
        except pd.errors.EmptyDataError:
            raise LogSchemaError(f"Log file is empty: {path}")
        columns = list(frame.columns)
        n = sum(1 for c in columns if c.startswith("x") and c[1:].isdigit())
        m = sum(1 for c in columns if c.startswith("tau"))
        if n == 0 or m == 0 or columns != log_columns(n, m):
            raise LogSchemaError(f"{path} does not have the run log columns: {','.join(columns)}")
        if frame.empty:
            raise LogSchemaError(f"Log file has no rows: {path}")
        return cls(frame=frame, n=n, m=m, scenario=path.stem)


class SimulationService:
    """Service for running closed-loop scenarios"""

    @staticmethod
    def rk4_step(fn: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray,
                 h: float, k1: Optional[np.ndarray] = None) -> np.ndarray:
        """One classical Runge-Kutta step; k1 may be supplied from the logged evaluation"""
        K1 = h * (fn(t, y) if k1 is None else k1)
        K2 = h * fn(t + h / 2, y + K1 / 2)
        K3 = h * fn(t + h / 2, y + K2 / 2)
        K4 = h * fn(t + h, y + K3)
        return y + (K1 + 2 * K2 + 2 * K3 + K4) / 6

    def run_scenario(self, sc: Scenario) -> SimLog:
        """Integrate one scenario and log every step"""
        run_log = get_run_logger(scenario=sc.name, robot=sc.robot.kind, controller=sc.controller.value, seed=sc.seed)
        model = dynamics_service.build_model(sc.robot)
        n, m = model.n, model.m
        path = trajectory_service.check_path(model, sc.trajectory, sc.duration)

        Gamma = sc.gains.gamma_matrix(n)
        K = sc.gains.k_matrix(n)
        nominal_phys = parameter_service.perturb_params(model.phys, sc.perturbation_pct, sc.seed)

        adaptive = sc.controller == ControllerKind.ADAPTIVE
        state: Optional[AdaptiveState] = None
        nominal: Optional[NominalEstimates] = None
        if adaptive:
            state = parameter_service.build_adaptive_state(model, nominal_phys, sc.bound_pct, path, sc.gains)
            theta0 = state.theta_hat
        else:
            nominal = parameter_service.nominal_estimates(model, nominal_phys)
            theta0 = np.zeros(0)

        noise_rng = np.random.default_rng(sc.seed + 1)
        noise = np.zeros(n)

        def evaluate(t: float, y: np.ndarray) -> Tuple[ControlOutput, np.ndarray]:
            X, Xdot, theta = y[:n], y[n:2 * n], y[2 * n:]
            if not np.all(np.isfinite(y)):
                raise NumericalFault(f"{model.name}: non-finite simulation state at t={t:.6f}")
            measured = TaskState(X + noise, Xdot)
            xd, vd, ad = trajectory_service.desired_trajectory(sc.trajectory, t)
            refs = controller_service.sliding_variables(measured, xd, vd, ad, Gamma)
            if adaptive:
                out, rate = controller_service.adaptive_update(model, measured, refs, K, state.with_theta(theta))
            else:
                out = controller_service.baseline_control(model, measured, refs, K, nominal)
                rate = theta[:0]
            Xddot = dynamics_service.forward_acceleration(model, TaskState(X, Xdot), out.tau)
            return out, np.concatenate([Xdot, Xddot, rate])

        x0 = np.asarray(sc.x0, dtype=float)
        v0 = np.zeros(n) if sc.v0 is None else np.asarray(sc.v0, dtype=float)
        y = np.concatenate([x0, v0, theta0])
        steps, dt = sc.steps, sc.dt
        rows = np.empty((steps + 1, len(log_columns(n, m))))
        overshoot = 0.0
        residual = 0.0
        check_every = max(1, settings.consistency_check_interval)

        run_log.info("run_started", steps=steps, dt=dt, parameters=len(theta0))
        t = 0.0
        try:
            for k in range(steps + 1):
                t = k * dt
                if sc.noise_std > 0:
                    noise = noise_rng.normal(0.0, sc.noise_std, size=n)
                out, deriv = evaluate(t, y)
                xd = trajectory_service.desired_trajectory(sc.trajectory, t)[0]
                X = y[:n]
                rows[k] = np.concatenate([[t], X, xd, X - xd, out.S, out.tau, [out.V, out.T_hat]])
                if adaptive and (k % check_every == 0 or k == steps):
                    residual = max(residual, controller_service.consistency_residual(model, state.with_theta(y[2 * n:])))
                if k == steps:
                    break
                y = self.rk4_step(lambda tt, yy: evaluate(tt, yy)[1], t, y, dt, k1=deriv)
                if adaptive:
                    theta = y[2 * n:]
                    clamped = state.clamp(theta)
                    overshoot = max(overshoot, float(np.max(np.abs(clamped - theta), initial=0.0)))
                    y[2 * n:] = clamped
        except ControlFault as e:
            run_log.error("run_fault", kind=e.kind, t=t, message=str(e))
            raise

        frame = pd.DataFrame(rows, columns=log_columns(n, m))
        sim_log = SimLog(
            frame=frame, n=n, m=m, scenario=sc.name, robot=sc.robot.kind,
            controller=sc.controller.value, K=K, theta_final=y[2 * n:].copy(),
            bound_overshoot=overshoot, consistency_residual=residual,
        )
        final_error = np.abs(frame[[f"e{i}" for i in range(1, n + 1)]].iloc[-1].to_numpy())
        run_log.info(
            "run_completed",
            final_error=[float(v) for v in final_error],
            min_tau=float(sim_log.block("tau").min()),
            bound_overshoot=overshoot,
            consistency_residual=residual,
        )
        return sim_log


# Global service instance
simulation_service = SimulationService()
