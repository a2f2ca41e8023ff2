#!/usr/bin/env python3
"""
Tests for the run-log metrics and Lyapunov diagnostics
"""
import numpy as np
import pandas as pd
import pytest

from app.services.metrics_service import metrics_service
from app.services.simulation_service import SimLog, log_columns


def synthetic_log(t: np.ndarray, errors: np.ndarray, V=None, S=None, tau=None, K=None) -> SimLog:
    """Planar log (n = m = 2) built from given error, V, S and tau series"""
    rows = len(t)
    frame = pd.DataFrame(0.0, index=range(rows), columns=log_columns(2, 2))
    frame["t"] = t
    frame[["e1", "e2"]] = errors
    frame[["x1", "x2"]] = errors
    if S is not None:
        frame[["s1", "s2"]] = S
    frame[["tau1", "tau2"]] = np.ones((rows, 2)) if tau is None else tau
    frame["V"] = np.zeros(rows) if V is None else V
    frame["That"] = 0.5
    return SimLog(frame=frame, n=2, m=2, scenario="synthetic", robot="rpr2", controller="adaptive", K=K)


def test_zero_log():
    """A perfectly tracking run has zero error metrics"""
    t = np.linspace(0.0, 1.0, 101)
    summary = metrics_service.compute_metrics(synthetic_log(t, np.zeros((101, 2))))
    assert summary.tail_max_error == [0.0, 0.0]
    assert summary.tail_rms_error == [0.0, 0.0]
    assert summary.settling_time == [0.0, 0.0]
    assert summary.final_error == [0.0, 0.0]
    assert summary.steps == 100
    assert summary.lyapunov.max_step_increase == 0.0


def test_sinusoid_error():
    """Max and RMS of a whole-period sinusoid are A and A / sqrt(2)"""
    A = 0.02
    t = np.linspace(0.0, 2.0, 20001)
    e = A * np.sin(2 * np.pi * t)
    summary = metrics_service.compute_metrics(synthetic_log(t, np.column_stack([e, -e])), tail_fraction=0.5)
    assert summary.tail_max_error[0] == pytest.approx(A, rel=1e-6)
    assert summary.tail_rms_error[1] == pytest.approx(A / np.sqrt(2), rel=1e-3)


def test_settling_time():
    """Settling is the first time after the last excursion outside the band"""
    t = np.arange(6) * 0.1
    e = np.array([0.5, 0.2, 0.0005, 0.002, 0.0001, 0.0])
    assert metrics_service.settling_time(t, e, 1e-3) == pytest.approx(0.4)
    assert metrics_service.settling_time(t, np.full(6, 0.5), 1e-3) is None
    assert metrics_service.settling_time(t, np.zeros(6), 1e-3) == 0.0


def test_tau_statistics():
    t = np.linspace(0.0, 1.0, 5)
    tau = np.array([[1.0, 2.0], [1.5, -3.0], [1.0, 2.0], [0.5, 2.0], [1.0, 2.0]])
    summary = metrics_service.compute_metrics(synthetic_log(t, np.zeros((5, 2)), tau=tau))
    assert summary.max_abs_tau == 3.0
    assert summary.min_tau == -3.0
    assert summary.max_tau_step == 5.0
    assert summary.min_abs_t_hat == 0.5


def test_lyapunov_decreasing():
    """A decaying V has no increases and satisfies the derivative bound"""
    t = np.linspace(0.0, 2.0, 201)
    S = np.column_stack([np.exp(-t), np.zeros_like(t)])
    K = np.eye(2)
    # V = S'S/2 with Sdot = -S gives dV/dt = -S'S <= -S'KS
    V = 0.5 * S[:, 0] ** 2
    diag = metrics_service.lyapunov_diagnostics(synthetic_log(t, np.zeros((201, 2)), V=V, S=S, K=K))
    assert diag.longest_increase_run == 0
    assert diag.max_step_increase == 0.0
    assert diag.v_initial == pytest.approx(0.5)
    assert diag.bound_fraction == 1.0
    assert diag.monotone and diag.criterion_met


def test_lyapunov_increases_counted():
    t = np.arange(8, dtype=float)
    V = np.array([1.0, 0.9, 1.0, 1.1, 1.2, 1.0, 1.05, 0.5])
    diag = metrics_service.lyapunov_diagnostics(synthetic_log(t, np.zeros((8, 2)), V=V))
    assert diag.longest_increase_run == 3
    assert diag.max_step_increase == pytest.approx(0.1)
    assert diag.bound_fraction is None
    assert not diag.monotone
    assert diag.criterion_met is None


def test_lyapunov_flat_value_misses_bound():
    """A constant V is monotone but breaks the derivative bound while S is nonzero"""
    t = np.linspace(0.0, 1.0, 11)
    S = np.column_stack([np.ones_like(t), np.zeros_like(t)])
    diag = metrics_service.lyapunov_diagnostics(synthetic_log(t, np.zeros((11, 2)), V=np.ones(11), S=S, K=np.eye(2)))
    assert diag.monotone
    assert diag.bound_fraction == 0.0
    assert diag.criterion_met is False


def test_empty_log_rejected():
    frame = pd.DataFrame(columns=log_columns(2, 2), dtype=float)
    with pytest.raises(ValueError):
        metrics_service.compute_metrics(SimLog(frame=frame, n=2, m=2))


def test_bad_tail_fraction_rejected():
    t = np.linspace(0.0, 1.0, 11)
    with pytest.raises(ValueError):
        metrics_service.compute_metrics(synthetic_log(t, np.zeros((11, 2))), tail_fraction=0.0)
