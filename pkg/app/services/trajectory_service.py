from typing import Tuple
import logging

import numpy as np

from app.config import settings
from app.core.exceptions import PathOutsideWorkspaceError
from app.models.robot import RobotModel
from app.schemas.scenario import TrajectoryKind, TrajectorySpec

logger = logging.getLogger(__name__)


class TrajectoryService:
    """Service for analytic desired trajectories"""

    def desired_trajectory(self, spec: TrajectorySpec, t: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(Xd, Vd, Ad) at time t.

        circle:  first two axes  c + r(-cos wt, sin wt)
        spiral:  circle in x-y plus a constant rate along z
        hold:    constant point
        """
        if t < 0:
            raise ValueError("Trajectory time cannot be negative")
        center = np.asarray(spec.center, dtype=float)
        Xd = center.copy()
        Vd = np.zeros_like(center)
        Ad = np.zeros_like(center)
        if spec.kind == TrajectoryKind.HOLD:
            return Xd, Vd, Ad

        w = 2.0 * np.pi / spec.period
        r = spec.radius
        c, s = np.cos(w * t), np.sin(w * t)
        Xd[:2] += r * np.array([-c, s])
        Vd[:2] = r * w * np.array([s, c])
        Ad[:2] = r * w**2 * np.array([c, -s])

        if spec.kind == TrajectoryKind.SPIRAL:
            Xd[2] += spec.vertical_rate * t
            Vd[2] = spec.vertical_rate
        return Xd, Vd, Ad

    def path_points(self, spec: TrajectorySpec, duration: float, samples: int = None) -> np.ndarray:
        """Desired positions at evenly spaced times over [0, duration]"""
        samples = samples or settings.path_check_samples
        times = np.linspace(0.0, duration, samples)
        return np.array([self.desired_trajectory(spec, t)[0] for t in times])

    def check_path(self, model: RobotModel, spec: TrajectorySpec, duration: float) -> np.ndarray:
        """Reject paths that leave the workspace box or approach a singularity.

        Returns the sampled path points.
        """
        points = self.path_points(spec, duration)
        box = model.workspace
        outside = np.any((points < box[:, 0]) | (points > box[:, 1]), axis=1)
        if np.any(outside):
            first = points[np.argmax(outside)]
            raise PathOutsideWorkspaceError(
                f"{model.name}: desired path leaves the workspace box at {first} ({int(outside.sum())} of {len(points)} samples)"
            )
        for X in points:
            if not model.in_domain(X):
                raise PathOutsideWorkspaceError(f"{model.name}: desired path crosses the base at {X}")
            T = float(model.determinant_regressor(X) @ model.theta_b())
            if abs(T) <= settings.eps_determinant:
                raise PathOutsideWorkspaceError(f"{model.name}: desired path is singular at {X} (T={T:.3e})")
        logger.info(f"Desired path checked: {len(points)} samples inside the {model.name} workspace")
        return points


# Global service instance
trajectory_service = TrajectoryService()
