"""
Planar 2-RPR parallel robot
Two prismatic legs pinned to the base at (0, 0) and (a, 0) and jointly to
the end-effector. Each leg is a cylinder body (mass m_i1, COM c_i1 from the
base pin) and a piston body (mass m_i2, COM c_i2 from the end-effector pin).
"""
import logging
from typing import Dict, List, Tuple

import numpy as np

from app.config import RobotDefaults
from app.models.monomial import Monomial
from app.models.robot import RobotModel
from app.schemas.robot import Rpr2Params

logger = logging.getLogger(__name__)

_of = Monomial.of

# per-leg inertial groups shared by both legs when they are identical
_LEG_GROUPS = [_of(m=1), _of(I_x=1), _of(m=1, c=2), _of(m=1, c=1)]

_MAX_A_POWER = 3
_POWERS = _MAX_A_POWER + 1

# second leg vector X - (a, 0) is X + a * (-1, 0)
_A_DIRECTION = np.array([-1.0, 0.0])


def _group_coeffs(l: float) -> np.ndarray:
    """Coefficients of (gamma, beta, dbeta/dl, dgamma/dl) per group (rows) at length l"""
    return np.array([
        [1.0, 0.0, 0.0, 0.0],
        [1.0 / l**2, -1.0 / l**4, 4.0 / l**5, -2.0 / l**3],
        [2.0 / l**2, -2.0 / l**4, 8.0 / l**5, -4.0 / l**3],
        [-2.0 / l, 2.0 / l**3, -6.0 / l**4, 2.0 / l**2],
    ])


def _leg_scalars(m1: float, m2: float, c1: float, c2: float, I_x: float, l: float) -> Tuple[float, float, float, float]:
    """gamma, beta and their length derivatives for M_leg = beta*u*u' + gamma*I"""
    K0 = m1 * c1**2 + m2 * c2**2 + I_x
    gamma = m2 - 2.0 * m2 * c2 / l + K0 / l**2
    beta = 2.0 * m2 * c2 / l**3 - K0 / l**4
    dbeta = -6.0 * m2 * c2 / l**4 + 4.0 * K0 / l**5
    dgamma = 2.0 * m2 * c2 / l**2 - 2.0 * K0 / l**3
    return gamma, beta, dbeta, dgamma


def _pscale(U: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Product of a vector polynomial U and a scalar polynomial s in a, padded to _POWERS rows"""
    out = np.zeros((_POWERS, U.shape[1]))
    for i, si in enumerate(s):
        out[i:i + len(U)] += si * U
    return out


def _column(group: int, power: int) -> int:
    if power == 0:
        return group
    return len(_LEG_GROUPS) + 1 + len(_LEG_GROUPS) * (power - 1) + group


# theta_c column of each (group, power of a) pair
_COLUMNS = np.array([[_column(g, j) for j in range(_POWERS)] for g in range(len(_LEG_GROUPS))]).ravel()


class Rpr2Model(RobotModel):
    """2-DOF planar robot with two actuated prismatic legs"""

    name = "rpr2"
    n = 2
    m = 2

    theta_c_terms: List[Monomial] = (
        _LEG_GROUPS
        + [_of(m_p=1)]
        + [grp * _of(a=j) for j in range(1, _MAX_A_POWER + 1) for grp in _LEG_GROUPS]
    )
    theta_b_terms = [_of(a=1)]
    Theta_terms = [[_of(0.0), _of(-1.0, a=1)]]
    adjugate_monomials = [_of(), _of(a=1)]
    theta_a_terms = (
        theta_c_terms
        + [grp * _of(a=_MAX_A_POWER + 1) for grp in _LEG_GROUPS]
        + [_of(m_p=1, a=1), _of(a=1), _of()]
    )

    def __init__(self, params: Rpr2Params):
        self.params = params
        self.a = params.a
        self.m_p = params.m_p
        self.legs = [
            (params.m_11, params.m_12, params.c_11, params.c_12, params.I_x1),
            (params.m_21, params.m_22, params.c_21, params.c_22, params.I_x2),
        ]
        self.bases = np.array([[0.0, 0.0], [params.a, 0.0]])
        super().__init__(params.physical(), params.g)

    @property
    def workspace(self) -> np.ndarray:
        margin = RobotDefaults.RPR2['workspace_margin_x']
        return np.array([[margin, self.a - margin], list(RobotDefaults.RPR2['workspace_y'])])

    def in_domain(self, X: np.ndarray) -> bool:
        return bool(X[1] > 0.0)

    def with_physical(self, phys: Dict[str, float]) -> "Rpr2Model":
        return Rpr2Model(Rpr2Params.from_physical(phys, self.g))

    def _links(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        U = np.asarray(X, dtype=float)[None, :] - self.bases
        return U, np.linalg.norm(U, axis=1)

    def lengths(self, X: np.ndarray) -> np.ndarray:
        return self._links(X)[1]

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        # rows point from the base pins toward the end-effector
        U, L = self._links(X)
        return U / L[:, None]

    def kinematic_terms(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x, y = X
        base = np.array([[x, x], [y, y]])
        Y = np.array([[1.0], [0.0]])
        return base, Y

    def inertia(self, X: np.ndarray) -> np.ndarray:
        U, L = self._links(X)
        M = self.m_p * np.eye(2)
        for leg, u, l in zip(self.legs, U, L):
            gamma, beta, _, _ = _leg_scalars(*leg, l)
            M += beta * np.outer(u, u) + gamma * np.eye(2)
        return M

    def coriolis(self, X: np.ndarray, Xdot: np.ndarray) -> np.ndarray:
        U, L = self._links(X)
        Xdot = np.asarray(Xdot, dtype=float)
        C = np.zeros((2, 2))
        for leg, u, l in zip(self.legs, U, L):
            _, beta, dbeta, dgamma = _leg_scalars(*leg, l)
            p = u @ Xdot
            C += (dbeta * p / (2.0 * l)) * np.outer(u, u) + beta * np.outer(u, Xdot)
            C += (dgamma / (2.0 * l)) * (p * np.eye(2) + np.outer(Xdot, u) - np.outer(u, Xdot))
        return C

    def gravity(self, X: np.ndarray) -> np.ndarray:
        U, L = self._links(X)
        e_y = np.array([0.0, 1.0])
        G = self.m_p * self.g * e_y
        for (m1, m2, c1, c2, _), u, l in zip(self.legs, U, L):
            mu = m1 * c1 - m2 * c2
            G = G + self.g * (m2 + mu / l) * e_y - self.g * u[1] * mu * u / l**3
        return G

    def dynamics_regressor(self, X: np.ndarray, Xdot: np.ndarray,
                           v: np.ndarray, a: np.ndarray) -> np.ndarray:
        """Y'_c with the base separation expanded as a polynomial.

        The second leg's vector X - (a, 0) is written as w - a*e_x so every
        entry is a polynomial in a; the measured lengths stay signals.
        """
        if not self.params.legs_identical():
            raise ValueError("The 2-RPR dynamics regressor requires identical legs")
        X = np.asarray(X, dtype=float)
        Xdot = np.asarray(Xdot, dtype=float)
        v = np.asarray(v, dtype=float)
        a = np.asarray(a, dtype=float)
        s = float(Xdot @ v)
        L = self.lengths(X)
        one = np.ones(1)

        Y_c = np.zeros((2, self.p))
        for U, l in zip((X[None, :], np.stack([X, _A_DIRECTION])), L):
            p = U @ Xdot
            q = U @ v
            U_pad = _pscale(U, one)
            terms = np.stack([
                _pscale(a[None, :], one),
                _pscale(U, U @ a) + s * U_pad,
                _pscale(U, np.convolve(p, q)) / (2.0 * l),
                (_pscale(v[None, :], p) + _pscale(Xdot[None, :], q) - s * U_pad) / (2.0 * l),
            ])
            polys = np.einsum('gt,tjn->gjn', _group_coeffs(l), terms)
            Y_c[:, _COLUMNS] += polys.reshape(-1, 2).T

        # one m*g per leg when m1*c1 = m2*c2, plus the platform
        Y_c[1, _column(0, 0)] += 2.0 * self.g
        Y_c[:, 4] = a + np.array([0.0, self.g])
        return Y_c

    def adjugate_terms(self, X: np.ndarray) -> np.ndarray:
        x, y = X
        R_1 = np.array([[y, -x], [-y, x]])
        R_a = np.array([[0.0, 1.0], [0.0, 0.0]])
        return np.stack([R_1, R_a])

    def determinant_regressor(self, X: np.ndarray) -> np.ndarray:
        return np.array([X[1]])


def rpr2_model(params: Rpr2Params = None) -> Rpr2Model:
    """Build the 2-RPR model, default parameters if none are given"""
    params = params or Rpr2Params()
    if not params.legs_identical():
        logger.warning("2-RPR legs differ; regressor-based control is unavailable for this model")
    return Rpr2Model(params)
