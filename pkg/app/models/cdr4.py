"""
Suspended cable-driven robot
A point-mass end-effector hanging from four cables whose anchors sit on a
horizontal rectangle of width b (x) and depth a (y) at height h.
"""
from typing import Dict, List, Tuple

import numpy as np

from app.config import RobotDefaults
from app.models.monomial import Monomial
from app.models.robot import RobotModel
from app.schemas.robot import Cdr4Params

_of = Monomial.of

# anchor sign pattern along x (s) and y (t)
_S = np.array([1.0, -1.0, 1.0, -1.0])
_T = np.array([1.0, 1.0, -1.0, -1.0])

_KAPPA = [
    _of(a=2, b=1), _of(a=2, b=1, h=1), _of(a=2, b=1, h=2),
    _of(a=1, b=2), _of(a=1, b=2, h=1), _of(a=1, b=2, h=2),
    _of(a=2, b=2), _of(a=2, b=2, h=1),
]


class Cdr4Model(RobotModel):
    """3-DOF translational robot with four cables (one redundant actuator)"""

    name = "cdr4"
    n = 3
    m = 4

    theta_c_terms: List[Monomial] = [_of(m=1)]
    theta_b_terms = [_of(a=2, b=2), _of(a=2, b=2, h=1), _of(a=2, b=2, h=2)]
    Theta_terms = [
        [_of(0.5 * s, b=1) for s in _S],
        [_of(0.5 * t, a=1) for t in _T],
        [_of(h=1) for _ in range(4)],
    ]
    adjugate_monomials = _KAPPA
    theta_a_terms = [term for kappa in _KAPPA for term in (kappa * _of(m=1), kappa)]

    def __init__(self, params: Cdr4Params):
        self.params = params
        self.mass = params.m
        self.h = params.h
        self.anchors = np.array(params.anchors)
        super().__init__(params.physical(), params.g)

    @property
    def workspace(self) -> np.ndarray:
        return np.array(RobotDefaults.CDR4['workspace'], dtype=float)

    def in_domain(self, X: np.ndarray) -> bool:
        return bool(X[2] < self.h)

    def with_physical(self, phys: Dict[str, float]) -> "Cdr4Model":
        return Cdr4Model(Cdr4Params.from_physical(phys, self.g))

    def _cables(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        U = self.anchors - np.asarray(X, dtype=float)[None, :]
        return U, np.linalg.norm(U, axis=1)

    def lengths(self, X: np.ndarray) -> np.ndarray:
        return self._cables(X)[1]

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        # rows point from the end-effector toward the anchors: positive tau pulls
        U, L = self._cables(X)
        return U / L[:, None]

    def kinematic_terms(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        base = -np.outer(np.asarray(X, dtype=float), np.ones(self.m))
        return base, np.eye(3)

    def inertia(self, X: np.ndarray) -> np.ndarray:
        return self.mass * np.eye(3)

    def coriolis(self, X: np.ndarray, Xdot: np.ndarray) -> np.ndarray:
        return np.zeros((3, 3))

    def gravity(self, X: np.ndarray) -> np.ndarray:
        return np.array([0.0, 0.0, self.mass * self.g])

    def dynamics_regressor(self, X: np.ndarray, Xdot: np.ndarray,
                           v: np.ndarray, a: np.ndarray) -> np.ndarray:
        return (np.asarray(a, dtype=float) + np.array([0.0, 0.0, self.g]))[:, None]

    def adjugate_terms(self, X: np.ndarray) -> np.ndarray:
        """Closed-form J_new adj(J_new_T J_new) split along the anchor-geometry monomials.

        Row i is [2 s_i a^2 b w^2, 2 t_i a b^2 w^2, -(2 s_i a^2 b x + 2 t_i a b^2 y + a^2 b^2) w]
        with w = z - h.
        """
        x, y, z = X
        ones = np.ones(self.m)
        zeros = np.zeros(self.m)
        col_x = lambda c1, c3: np.column_stack([c1, zeros, c3])
        col_y = lambda c2, c3: np.column_stack([zeros, c2, c3])
        only_z = lambda c3: np.column_stack([zeros, zeros, c3])
        return np.stack([
            col_x(2.0 * _S * z**2, -2.0 * _S * x * z),
            col_x(-4.0 * _S * z, 2.0 * _S * x),
            col_x(2.0 * _S, zeros),
            col_y(2.0 * _T * z**2, -2.0 * _T * y * z),
            col_y(-4.0 * _T * z, 2.0 * _T * y),
            col_y(2.0 * _T, zeros),
            only_z(-z * ones),
            only_z(ones),
        ])

    def determinant_regressor(self, X: np.ndarray) -> np.ndarray:
        z = X[2]
        return np.array([4.0 * z**2, -8.0 * z, 4.0])


def cdr4_model(params: Cdr4Params = None) -> Cdr4Model:
    """Build the cable robot, calibrated anchor geometry if no parameters are given"""
    return Cdr4Model(params or Cdr4Params())
