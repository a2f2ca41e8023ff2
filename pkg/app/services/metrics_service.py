from typing import List, Optional
import logging

import numpy as np

from app.config import settings
from app.schemas.results import LyapunovSummary, MetricsSummary
from app.services.simulation_service import SimLog

logger = logging.getLogger(__name__)


class MetricsService:
    """Service for tracking-error and Lyapunov summaries of run logs"""

    @staticmethod
    def settling_time(t: np.ndarray, error: np.ndarray, band: float) -> Optional[float]:
        """First time after which |error| stays within band, None if it ends outside"""
        outside = np.abs(error) > band
        if outside[-1]:
            return None
        if not outside.any():
            return float(t[0])
        last = int(np.flatnonzero(outside)[-1])
        return float(t[last + 1])

    @staticmethod
    def _longest_run(mask: np.ndarray) -> int:
        longest = current = 0
        for flag in mask:
            current = current + 1 if flag else 0
            longest = max(longest, current)
        return longest

    def lyapunov_diagnostics(self, log: SimLog, K: Optional[np.ndarray] = None,
                             tol: float = 1e-4, increase_tol: float = 1e-12) -> LyapunovSummary:
        """Step increases of V and the share of samples with dV/dt <= -S'KS + tol.

        monotone and criterion_met compare the diagnostics with the limits in
        settings; a run that misses them is logged as a warning.
        """
        V = log.frame["V"].to_numpy()
        t = log.t
        steps = np.diff(V)
        increases = steps > increase_tol * np.maximum(1.0, np.abs(V[:-1]))
        K = log.K if K is None else K
        bound_fraction = None
        if K is not None and len(V) >= 3:
            V_dot = (V[2:] - V[:-2]) / (t[2:] - t[:-2])
            S = log.block("s")[1:-1]
            bound = -np.einsum('ki,ij,kj->k', S, K, S) + tol
            bound_fraction = float(np.mean(V_dot <= bound))

        max_increase = float(max(steps.max(initial=0.0), 0.0))
        longest = self._longest_run(increases)
        monotone = (max_increase <= settings.lyapunov_max_step_increase
                    and longest <= settings.lyapunov_max_increase_run)
        criterion_met = None
        if bound_fraction is not None:
            criterion_met = monotone and bound_fraction >= settings.lyapunov_min_bound_fraction
        if criterion_met is False:
            logger.warning(
                f"Lyapunov check missed for {log.scenario or 'log'}: max step increase {max_increase:.3e}, "
                f"longest increase run {longest}, bound fraction {bound_fraction:.3f}"
            )
        return LyapunovSummary(
            v_initial=float(V[0]),
            v_final=float(V[-1]),
            max_step_increase=max_increase,
            longest_increase_run=longest,
            bound_fraction=bound_fraction,
            monotone=monotone,
            criterion_met=criterion_met,
        )

    def compute_metrics(self, log: SimLog, tail_fraction: float = None,
                        settling_band: float = None) -> MetricsSummary:
        """Per-axis tail max/RMS error, settling time and actuator statistics"""
        try:
            if log.frame.empty:
                raise ValueError("Cannot compute metrics of an empty log")
            tail_fraction = settings.tail_fraction if tail_fraction is None else tail_fraction
            band = settings.settling_band if settling_band is None else settling_band
            if not 0.0 < tail_fraction <= 1.0:
                raise ValueError("Tail fraction must be in (0, 1]")

            t = log.t
            errors = log.block("e")
            tau = log.block("tau")
            start = t[0] + (1.0 - tail_fraction) * (t[-1] - t[0])
            tail = errors[t >= start]

            tail_max: List[float] = np.max(np.abs(tail), axis=0).tolist()
            tail_rms: List[float] = np.sqrt(np.mean(tail**2, axis=0)).tolist()
            settling = [self.settling_time(t, errors[:, i], band) for i in range(log.n)]
            tau_steps = np.abs(np.diff(tau, axis=0))

            summary = MetricsSummary(
                scenario=log.scenario,
                robot=log.robot,
                controller=log.controller,
                steps=len(t) - 1,
                tail_fraction=tail_fraction,
                tail_max_error=tail_max,
                tail_rms_error=tail_rms,
                settling_time=settling,
                settling_band=band,
                final_error=np.abs(errors[-1]).tolist(),
                max_abs_tau=float(np.abs(tau).max()),
                max_tau_step=float(tau_steps.max(initial=0.0)),
                min_tau=float(tau.min()),
                min_abs_t_hat=float(np.abs(log.frame["That"].to_numpy()).min()),
                lyapunov=self.lyapunov_diagnostics(log),
                consistency_residual=log.consistency_residual,
            )
            logger.info(f"Metrics computed for {log.scenario or 'log'}: tail max error {tail_max}")
            return summary
        except Exception as e:
            logger.error(f"Error computing metrics: {e}")
            raise


# Global service instance
metrics_service = MetricsService()
