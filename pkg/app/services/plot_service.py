from pathlib import Path
from typing import List
import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.hashsalt"] = "robotctl"

from app.services.simulation_service import SimLog  # noqa: E402

logger = logging.getLogger(__name__)

# fixed metadata keeps the SVG output byte-stable across runs
_SVG_METADATA = {"Date": None, "Creator": None}


class PlotService:
    """Service for SVG line charts of run logs"""

    @staticmethod
    def _save(fig, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata=_SVG_METADATA, bbox_inches="tight")
        plt.close(fig)
        return path

    def path_chart(self, log: SimLog, path: Path) -> Path:
        """Actual and desired path; 3-DOF paths get x-y and x-z views"""
        X, Xd = log.block("x"), log.block("xd")
        views = [(0, 1)] if log.n == 2 else [(0, 1), (0, 2)]
        fig, axes = plt.subplots(1, len(views), figsize=(6 * len(views), 5), squeeze=False)
        for ax, (i, j) in zip(axes[0], views):
            ax.plot(Xd[:, i], Xd[:, j], "--", color="gray", label="desired")
            ax.plot(X[:, i], X[:, j], color="tab:blue", label="actual")
            ax.set_xlabel(f"x{i + 1} (m)")
            ax.set_ylabel(f"x{j + 1} (m)")
            ax.set_aspect("equal", adjustable="datalim")
            ax.legend()
        fig.suptitle(f"Path: {log.scenario}")
        return self._save(fig, path)

    def error_chart(self, log: SimLog, path: Path) -> Path:
        t, E = log.t, log.block("e")
        fig, axes = plt.subplots(log.n, 1, figsize=(8, 2.5 * log.n), sharex=True, squeeze=False)
        for i, ax in enumerate(axes[:, 0]):
            ax.plot(t, E[:, i])
            ax.set_ylabel(f"e{i + 1} (m)")
            ax.grid(True, alpha=0.3)
        axes[-1, 0].set_xlabel("t (s)")
        fig.suptitle(f"Tracking error: {log.scenario}")
        return self._save(fig, path)

    def force_chart(self, log: SimLog, path: Path) -> Path:
        t, tau = log.t, log.block("tau")
        fig, ax = plt.subplots(figsize=(8, 4))
        for j in range(log.m):
            ax.plot(t, tau[:, j], label=f"tau{j + 1}")
        ax.set_xlabel("t (s)")
        ax.set_ylabel("actuator force (N)")
        ax.grid(True, alpha=0.3)
        ax.legend()
        return self._save(fig, path)

    def lyapunov_chart(self, log: SimLog, path: Path) -> Path:
        fig, ax = plt.subplots(figsize=(8, 4))
        ax.plot(log.t, log.frame["V"].to_numpy())
        ax.set_xlabel("t (s)")
        ax.set_ylabel("V")
        ax.set_yscale("symlog", linthresh=1e-9)
        ax.grid(True, alpha=0.3)
        return self._save(fig, path)

    def plot_log(self, log: SimLog, out_dir: Path, stem: str = None) -> List[Path]:
        """One SVG per chart: path, errors, forces and V"""
        try:
            out_dir = Path(out_dir)
            stem = stem or log.scenario or "run"
            written = [
                self.path_chart(log, out_dir / f"{stem}_path.svg"),
                self.error_chart(log, out_dir / f"{stem}_errors.svg"),
                self.force_chart(log, out_dir / f"{stem}_tau.svg"),
                self.lyapunov_chart(log, out_dir / f"{stem}_lyapunov.svg"),
            ]
            logger.info(f"Charts written for {stem}: {len(written)} files in {out_dir}")
            return written
        except Exception as e:
            logger.error(f"Error plotting log: {e}")
            raise

    def comparison_chart(self, adaptive: SimLog, baseline: SimLog, path: Path) -> Path:
        """Per-axis error overlay of an adaptive and a baseline run"""
        try:
            fig, axes = plt.subplots(adaptive.n, 1, figsize=(8, 2.5 * adaptive.n), sharex=True, squeeze=False)
            Ea, Eb = adaptive.block("e"), baseline.block("e")
            for i, ax in enumerate(axes[:, 0]):
                ax.plot(baseline.t, Eb[:, i], color="tab:orange", label="baseline")
                ax.plot(adaptive.t, Ea[:, i], color="tab:blue", label="adaptive")
                ax.set_ylabel(f"e{i + 1} (m)")
                ax.grid(True, alpha=0.3)
            axes[0, 0].legend()
            axes[-1, 0].set_xlabel("t (s)")
            fig.suptitle(f"Adaptive vs baseline: {adaptive.scenario}")
            return self._save(fig, Path(path))
        except Exception as e:
            logger.error(f"Error plotting comparison: {e}")
            raise


# Global service instance
plot_service = PlotService()
