"""
Robot model interface
Task-space dynamics, Jacobian factorization and regressor providers shared by
the parallel robots.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.models.monomial import Monomial, matrix_values, values


@dataclass(frozen=True)
class TaskState:
    """End-effector position and velocity in task space"""
    X: np.ndarray
    Xdot: np.ndarray

    @classmethod
    def of(cls, X, Xdot=None) -> "TaskState":
        X = np.asarray(X, dtype=float)
        Xdot = np.zeros_like(X) if Xdot is None else np.asarray(Xdot, dtype=float)
        return cls(X, Xdot)


@dataclass(frozen=True)
class DynamicsEval:
    M: np.ndarray
    C: np.ndarray
    G: np.ndarray


@dataclass(frozen=True)
class JacobianFactorization:
    """J^T = J_new_T @ diag(L)^-1"""
    J_new_T: np.ndarray
    L: np.ndarray


@dataclass(frozen=True)
class KinematicRegressor:
    """J_new_T = base_term + Y @ Theta"""
    Y: np.ndarray
    Theta: np.ndarray
    base_term: np.ndarray


@dataclass(frozen=True)
class AdjugateSplit:
    R: np.ndarray
    T: float


class RobotModel(ABC):
    """A parallel robot with n task-space dof and m actuators.

    Subclasses declare their regressor parameters as monomials of the
    physical parameters: theta_c_terms (p), theta_b_terms (k),
    Theta_terms (l x m) and theta_a_terms (r). Y_a is assembled generically
    from adjugate_terms and the dynamics regressor.
    """

    name: str = "robot"
    n: int
    m: int
    theta_c_terms: List[Monomial]
    theta_b_terms: List[Monomial]
    theta_a_terms: List[Monomial]
    Theta_terms: List[List[Monomial]]

    def __init__(self, phys: Dict[str, float], g: float):
        self.phys = dict(phys)
        self.g = float(g)
        self._build_ya_map()

    # dimensions

    @property
    def l(self) -> int:
        return len(self.Theta_terms)

    @property
    def p(self) -> int:
        return len(self.theta_c_terms)

    @property
    def k(self) -> int:
        return len(self.theta_b_terms)

    @property
    def r(self) -> int:
        return len(self.theta_a_terms)

    @property
    def redundant(self) -> bool:
        return self.m > self.n

    @property
    def q(self) -> int:
        """Width of the closed-loop regressor Y_F"""
        return self.r + self.m * self.r * self.l + self.p * self.k + self.k

    # workspace

    @property
    @abstractmethod
    def workspace(self) -> np.ndarray:
        """Sampling box, shape (n, 2)"""

    @abstractmethod
    def in_domain(self, X: np.ndarray) -> bool:
        """Whether X lies on the geometrically admissible side of the base"""

    @abstractmethod
    def with_physical(self, phys: Dict[str, float]) -> "RobotModel":
        """Same robot with other physical parameters"""

    # kinematics

    @abstractmethod
    def lengths(self, X: np.ndarray) -> np.ndarray:
        """Link or cable lengths l_i"""

    @abstractmethod
    def jacobian(self, X: np.ndarray) -> np.ndarray:
        """J (m x n) with rows of unit link directions"""

    @abstractmethod
    def kinematic_terms(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(base_term n x m, Y n x l)"""

    # dynamics

    @abstractmethod
    def inertia(self, X: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def coriolis(self, X: np.ndarray, Xdot: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def gravity(self, X: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def dynamics_regressor(self, X: np.ndarray, Xdot: np.ndarray,
                           v: np.ndarray, a: np.ndarray) -> np.ndarray:
        """Y_c (n x p) with Y_c @ theta_c = M a + C v + G"""

    # adjugate / determinant

    @abstractmethod
    def adjugate_terms(self, X: np.ndarray) -> np.ndarray:
        """Matrices R_j (J x m x n) with R = sum_j kappa_j R_j, kappa_j = adjugate_monomials[j]"""

    adjugate_monomials: List[Monomial]

    @abstractmethod
    def determinant_regressor(self, X: np.ndarray) -> np.ndarray:
        """Y_b as a length-k vector"""

    # parameter vectors

    def theta_c(self, phys: Dict[str, float] = None) -> np.ndarray:
        return values(self.theta_c_terms, phys or self.phys)

    def theta_b(self, phys: Dict[str, float] = None) -> np.ndarray:
        return values(self.theta_b_terms, phys or self.phys)

    def theta_a(self, phys: Dict[str, float] = None) -> np.ndarray:
        return values(self.theta_a_terms, phys or self.phys)

    def Theta(self, phys: Dict[str, float] = None) -> np.ndarray:
        return matrix_values(self.Theta_terms, phys or self.phys)

    def closed_form_adjugate(self, X: np.ndarray, phys: Dict[str, float] = None) -> np.ndarray:
        kappa = values(self.adjugate_monomials, phys or self.phys)
        return np.einsum('j,jmn->mn', kappa, self.adjugate_terms(X))

    # Y_a assembly

    def _build_ya_map(self) -> None:
        """Map each product kappa_j * theta_c,q (q = p means the known -KS column)
        onto its column of theta_a, with the coefficient ratio."""
        declared = {t.key: (i, t.coef) for i, t in enumerate(self.theta_a_terms)}
        if len(declared) != len(self.theta_a_terms):
            raise ValueError(f"{self.name}: duplicate theta_a monomials")
        factors = list(self.theta_c_terms) + [Monomial.of()]
        j_idx, q_idx, cols, scales = [], [], [], []
        for j, kappa in enumerate(self.adjugate_monomials):
            for q, factor in enumerate(factors):
                product = kappa * factor
                if product.key not in declared:
                    raise ValueError(f"{self.name}: theta_a is missing {product.label()}")
                col, coef = declared[product.key]
                j_idx.append(j)
                q_idx.append(q)
                cols.append(col)
                scales.append(product.coef / coef)
        self._ya_j = np.array(j_idx)
        self._ya_q = np.array(q_idx)
        # scatter of each product onto its theta_a column, scaled by the coefficient ratio
        self._ya_scatter = np.zeros((self.r, len(cols)))
        self._ya_scatter[cols, np.arange(len(cols))] = scales

    def adjugate_regressor(self, X: np.ndarray, Xdot: np.ndarray, v: np.ndarray,
                           a: np.ndarray, KS: np.ndarray, Y_c: Optional[np.ndarray] = None) -> np.ndarray:
        """Y_a (m x r) with Y_a @ theta_a = R (M a + C v + G - KS).

        Y_c may be passed in when the caller already holds it for the same state.
        """
        if Y_c is None:
            Y_c = self.dynamics_regressor(X, Xdot, v, a)
        Y_ext = np.column_stack([Y_c, -np.asarray(KS, dtype=float)])
        RY = np.einsum('jmn,nq->jqm', self.adjugate_terms(X), Y_ext)
        return (self._ya_scatter @ RY[self._ya_j, self._ya_q, :]).T
