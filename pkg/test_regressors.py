#!/usr/bin/env python3
"""
Tests for the Jacobian factorization, the adjugate/determinant split and the
parameter-linear regressors
"""
import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st
from hypothesis.extra.numpy import arrays

from app.core.exceptions import EstimatedSingularityError
from app.models.robot import TaskState
from app.services.regressor_service import cofactor_adjugate, regressor_service

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def random_state(model, rng) -> TaskState:
    box = model.workspace
    return TaskState(rng.uniform(box[:, 0], box[:, 1]), rng.uniform(-1.0, 1.0, model.n))


def test_rpr_factorization(rpr2):
    """Planar J_new_T columns are the leg vectors"""
    s = TaskState.of([0.3, 0.4])
    jf = regressor_service.factorize_jacobian(rpr2, s)
    assert np.allclose(jf.J_new_T, [[0.3, -0.7], [0.4, 0.4]])
    assert np.allclose(jf.J_new_T / jf.L, rpr2.jacobian(s.X).T, atol=1e-12)


def test_cdr_factorization_at_origin(cdr4):
    """Cable vectors and lengths at the workspace origin"""
    s = TaskState.of([0.0, 0.0, 0.0])
    jf = regressor_service.factorize_jacobian(cdr4, s)
    assert np.allclose(jf.J_new_T, np.array(cdr4.params.anchors).T)
    expected = np.sqrt((3.56 / 2) ** 2 + (7.05 / 2) ** 2 + 4.26**2)
    assert np.allclose(jf.L, expected)


def test_kinematic_regressor_rebuilds_factorization(rpr2, cdr4, rng):
    """base_term + Y Theta reproduces J_new_T"""
    for model in (rpr2, cdr4):
        s = random_state(model, rng)
        kin = regressor_service.kinematic_regressor(model, s)
        jf = regressor_service.factorize_jacobian(model, s)
        assert kin.Y.shape == (model.n, model.l)
        assert kin.Theta.shape == (model.l, model.m)
        assert np.allclose(kin.base_term + kin.Y @ kin.Theta, jf.J_new_T, atol=1e-12)


def test_rpr_determinant_is_a_times_y(rpr2, rng):
    """T = a y and R J_new_T = T I for the square planar robot"""
    for _ in range(10):
        s = random_state(rpr2, rng)
        split = regressor_service.adjugate_determinant(regressor_service.factorize_jacobian(rpr2, s), False)
        assert split.T == pytest.approx(rpr2.a * s.X[1])
        jf = regressor_service.factorize_jacobian(rpr2, s)
        assert np.allclose(split.R @ jf.J_new_T, split.T * np.eye(2), atol=1e-12)


def test_cdr_split_is_pseudo_inverse(cdr4, rng):
    """R / T equals the Moore-Penrose pseudo-inverse of J_new_T"""
    for _ in range(10):
        s = random_state(cdr4, rng)
        jf = regressor_service.factorize_jacobian(cdr4, s)
        split = regressor_service.adjugate_determinant(jf, True)
        pinv = np.linalg.pinv(jf.J_new_T)
        assert np.linalg.norm(split.R / split.T - pinv) / np.linalg.norm(pinv) < 1e-9


def test_cdr_determinant_closed_form(cdr4, rng):
    """det(J_new_T J_new) = 4 a^2 b^2 (z - h)^2 = Y_b theta_b"""
    a, b, h = 7.05, 3.56, 4.26
    for _ in range(5):
        s = random_state(cdr4, rng)
        jf = regressor_service.factorize_jacobian(cdr4, s)
        gram_det = np.linalg.det(jf.J_new_T @ jf.J_new_T.T)
        Y_b, theta_b = regressor_service.assemble_Yb(cdr4, s)
        expected = 4 * a**2 * b**2 * (s.X[2] - h) ** 2
        assert gram_det == pytest.approx(expected, rel=1e-9)
        assert Y_b @ theta_b == pytest.approx(expected, rel=1e-12)


def test_closed_form_adjugate_matches_generic(rpr2, cdr4, rng):
    """Monomial-split adjugate equals the cofactor computation"""
    for model in (rpr2, cdr4):
        for _ in range(5):
            s = random_state(model, rng)
            split = regressor_service.adjugate_determinant(
                regressor_service.factorize_jacobian(model, s), model.redundant)
            closed = model.closed_form_adjugate(s.X)
            assert np.allclose(closed, split.R, rtol=1e-10, atol=1e-8 * np.max(np.abs(split.R)))


@hyp_settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (3, 3), elements=finite))
def test_cofactor_adjugate_three(A):
    """adj(A) A = det(A) I for 3x3 matrices"""
    adj, det = cofactor_adjugate(A)
    scale = max(1.0, np.max(np.abs(A))) ** 3
    assert abs(det - np.linalg.det(A)) <= 1e-9 * scale
    assert np.allclose(adj @ A, det * np.eye(3), atol=1e-9 * scale)


def test_cofactor_adjugate_small_and_rejects_large():
    """1x1 and 2x2 adjugates, larger matrices refused"""
    adj, det = cofactor_adjugate(np.array([[4.0]]))
    assert np.allclose(adj, [[1.0]]) and det == 4.0
    adj, det = cofactor_adjugate(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert np.allclose(adj, [[4.0, -2.0], [-3.0, 1.0]]) and det == pytest.approx(-2.0)
    with pytest.raises(ValueError):
        cofactor_adjugate(np.eye(4))


def test_adjugate_regressor_identity(rpr2, cdr4, rng):
    """Y_a theta_a = R (M a + C v + G - KS)"""
    for model in (rpr2, cdr4):
        for _ in range(10):
            s = random_state(model, rng)
            v, a, KS = rng.normal(size=(3, model.n))
            Y_a, theta_a = regressor_service.assemble_Ya(model, s, v, a, KS)
            assert Y_a.shape == (model.m, model.r)
            split = regressor_service.adjugate_determinant(
                regressor_service.factorize_jacobian(model, s), model.redundant)
            D = model.inertia(s.X) @ a + model.coriolis(s.X, s.Xdot) @ v + model.gravity(s.X) - KS
            expected = split.R @ D
            assert np.allclose(Y_a @ theta_a, expected, rtol=1e-9, atol=1e-9 * np.max(np.abs(expected)))


def test_precomputed_dynamics_regressor_is_reused(rpr2, cdr4, rng):
    """Passing Y_c in gives the same Y_a and Y_F as letting them evaluate it"""
    for model in (rpr2, cdr4):
        s = random_state(model, rng)
        v, a, KS = rng.normal(size=(3, model.n))
        Y_c = model.dynamics_regressor(s.X, s.Xdot, v, a)
        Y_a = model.adjugate_regressor(s.X, s.Xdot, v, a, KS)
        assert np.array_equal(model.adjugate_regressor(s.X, s.Xdot, v, a, KS, Y_c=Y_c), Y_a)
        args = (model, s, v, a, KS, model.Theta(), model.theta_c(), model.theta_b())
        assert np.array_equal(regressor_service.assemble_YF(*args, Y_a=Y_a, Y_c=Y_c),
                              regressor_service.assemble_YF(*args))


@hyp_settings(max_examples=40, deadline=None)
@given(
    l=st.integers(1, 3), m=st.integers(1, 4), r=st.integers(1, 5),
    seed=st.integers(0, 2**31 - 1),
)
def test_eta_regressor_identity(l, m, r, seed):
    """Theta_tilde (Y_a theta_a_tilde) = Y_eta kron(vec(Theta_tilde), theta_a_tilde)"""
    rng = np.random.default_rng(seed)
    Y = rng.normal(size=(3, l))
    Y_a = rng.normal(size=(m, r))
    Theta_t = rng.normal(size=(l, m))
    theta_a_t = rng.normal(size=r)
    Y_eta = regressor_service.assemble_Yeta(Y, Y_a)
    assert Y_eta.shape == (l, m * r * l)
    lhs = Theta_t @ (Y_a @ theta_a_t)
    assert np.allclose(Y_eta @ np.kron(Theta_t.ravel(), theta_a_t), lhs, atol=1e-10)


def test_eta_regressor_scalar_case():
    """l = m = 1 reduces Y_eta to Y_a"""
    Y_a = np.array([[1.0, -2.0, 0.5]])
    assert np.allclose(regressor_service.assemble_Yeta(np.ones((2, 1)), Y_a), Y_a)


@hyp_settings(max_examples=40, deadline=None)
@given(p=st.integers(1, 6), k=st.integers(1, 4), seed=st.integers(0, 2**31 - 1))
def test_mu_regressor_identity(p, k, seed):
    """(Y_b theta_b_tilde) theta_c_tilde = Y_mu kron(theta_c_tilde, theta_b_tilde)"""
    rng = np.random.default_rng(seed)
    Y_c = rng.normal(size=(3, p))
    Y_b = rng.normal(size=k)
    theta_c_t = rng.normal(size=p)
    theta_b_t = rng.normal(size=k)
    Y_mu = regressor_service.assemble_Ymu(Y_c, Y_b)
    assert Y_mu.shape == (p, p * k)
    lhs = (Y_b @ theta_b_t) * theta_c_t
    assert np.allclose(Y_mu @ np.kron(theta_c_t, theta_b_t), lhs, atol=1e-12)


def test_mu_regressor_single_determinant_term():
    """k = 1 gives Y_mu = Y_b I_p"""
    Y_mu = regressor_service.assemble_Ymu(np.zeros((2, 4)), np.array([2.5]))
    assert np.allclose(Y_mu, 2.5 * np.eye(4))


def test_closed_loop_regressor_width(rpr2, cdr4):
    """Y_F has q = r + m r l + p k + k columns"""
    assert rpr2.q == 90
    assert cdr4.q == 214
    s = TaskState.of([0.4, 0.6], [0.1, 0.2])
    Y_F = regressor_service.assemble_YF(
        rpr2, s, np.zeros(2), np.zeros(2), np.zeros(2), rpr2.Theta(), rpr2.theta_c(), rpr2.theta_b())
    assert Y_F.shape == (2, 90)


def test_closed_loop_regressor_perfect_knowledge(cdr4, rng):
    """Y_F theta_tilde is zero when every estimate is exact"""
    s = random_state(cdr4, rng)
    theta_t = regressor_service.closed_loop_error(
        cdr4, cdr4.theta_a(), cdr4.Theta(), cdr4.theta_c(), cdr4.theta_b())
    assert np.allclose(theta_t, 0.0)
    Y_F = regressor_service.assemble_YF(
        cdr4, s, rng.normal(size=3), rng.normal(size=3), rng.normal(size=3),
        cdr4.Theta(), cdr4.theta_c(), cdr4.theta_b())
    assert np.allclose(Y_F @ theta_t, 0.0)


def test_closed_loop_regressor_estimated_singularity(cdr4):
    """A zero estimated determinant is a fault, not a division"""
    s = TaskState.of([0.0, 0.0, 1.0])
    with pytest.raises(EstimatedSingularityError):
        regressor_service.assemble_YF(
            cdr4, s, np.zeros(3), np.zeros(3), np.zeros(3), cdr4.Theta(), cdr4.theta_c(), np.zeros(3))
