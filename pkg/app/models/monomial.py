"""
Parameter monomials
Every regressor parameter is a product of powers of positive physical
parameters times a constant, which gives both its value and its range.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

import numpy as np


@dataclass(frozen=True)
class Monomial:
    """coef * prod(phys[name] ** power)"""
    coef: float
    powers: Tuple[Tuple[str, int], ...]

    @classmethod
    def of(cls, coef: float = 1.0, **powers: int) -> "Monomial":
        return cls(coef, tuple(sorted((k, v) for k, v in powers.items() if v)))

    @property
    def key(self) -> Tuple[Tuple[str, int], ...]:
        return self.powers

    @property
    def degree(self) -> int:
        return sum(p for _, p in self.powers)

    def __mul__(self, other: "Monomial") -> "Monomial":
        merged: Dict[str, int] = dict(self.powers)
        for name, power in other.powers:
            merged[name] = merged.get(name, 0) + power
        return Monomial.of(self.coef * other.coef, **merged)

    def value(self, phys: Dict[str, float]) -> float:
        out = self.coef
        for name, power in self.powers:
            out *= phys[name] ** power
        return out

    def bounds(self, phys: Dict[str, float], pct: float) -> Tuple[float, float]:
        """Range over the box phys * [1 - pct, 1 + pct] (all phys positive)"""
        lo_scale = (1.0 - pct) ** self.degree
        hi_scale = (1.0 + pct) ** self.degree
        v = self.value(phys)
        a, b = v * lo_scale, v * hi_scale
        return (min(a, b), max(a, b))

    def label(self) -> str:
        if not self.powers:
            return f"{self.coef:g}"
        body = "*".join(name if p == 1 else f"{name}^{p}" for name, p in self.powers)
        return body if self.coef == 1.0 else f"{self.coef:g}*{body}"


def values(terms: Iterable[Monomial], phys: Dict[str, float]) -> np.ndarray:
    return np.array([t.value(phys) for t in terms], dtype=float)


def bounds(terms: Iterable[Monomial], phys: Dict[str, float], pct: float) -> Tuple[np.ndarray, np.ndarray]:
    pairs = [t.bounds(phys, pct) for t in terms]
    lo = np.array([p[0] for p in pairs], dtype=float)
    hi = np.array([p[1] for p in pairs], dtype=float)
    return lo, hi


def matrix_values(table: List[List[Monomial]], phys: Dict[str, float]) -> np.ndarray:
    return np.array([[t.value(phys) for t in row] for row in table], dtype=float)
