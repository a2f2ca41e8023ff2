from pydantic import BaseModel, Field, validator
from typing import List, Literal, Union
from enum import Enum


class RobotKind(str, Enum):
    RPR2 = "rpr2"
    CDR4 = "cdr4"


class Rpr2Params(BaseModel):
    """Planar 2-RPR robot: two prismatic legs pinned at (0, 0) and (a, 0)"""
    m_11: float = Field(default=1.0, description="Leg 1 cylinder mass (kg)")
    m_12: float = Field(default=1.0, description="Leg 1 piston mass (kg)")
    m_21: float = Field(default=1.0, description="Leg 2 cylinder mass (kg)")
    m_22: float = Field(default=1.0, description="Leg 2 piston mass (kg)")
    c_11: float = Field(default=0.5, description="Leg 1 cylinder COM distance from base (m)")
    c_12: float = Field(default=0.5, description="Leg 1 piston COM distance from end-effector (m)")
    c_21: float = Field(default=0.5, description="Leg 2 cylinder COM distance from base (m)")
    c_22: float = Field(default=0.5, description="Leg 2 piston COM distance from end-effector (m)")
    I_x1: float = Field(default=0.1, description="Leg 1 rotational inertia about its COMs (kg m^2)")
    I_x2: float = Field(default=0.1, description="Leg 2 rotational inertia about its COMs (kg m^2)")
    m_p: float = Field(default=2.0, description="End-effector mass (kg)")
    a: float = Field(default=1.0, description="Base anchor separation (m)")
    g: float = Field(default=9.81, description="Gravity (m/s^2)")

    @validator('m_11', 'm_12', 'm_21', 'm_22', 'I_x1', 'I_x2', 'm_p', 'a', 'g')
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError('Masses, inertias, base separation and gravity must be greater than 0')
        return v

    @validator('c_11', 'c_12', 'c_21', 'c_22')
    def validate_com(cls, v):
        if v < 0:
            raise ValueError('Center-of-mass distances cannot be negative')
        return v

    def legs_identical(self) -> bool:
        masses = {self.m_11, self.m_12, self.m_21, self.m_22}
        coms = {self.c_11, self.c_12, self.c_21, self.c_22}
        return len(masses) == 1 and len(coms) == 1 and self.I_x1 == self.I_x2

    def physical(self) -> dict:
        """Independent physical parameters of the identical-leg model"""
        return {'m': self.m_11, 'c': self.c_11, 'I_x': self.I_x1, 'm_p': self.m_p, 'a': self.a}

    @classmethod
    def from_physical(cls, phys: dict, g: float = 9.81) -> "Rpr2Params":
        return cls(
            m_11=phys['m'], m_12=phys['m'], m_21=phys['m'], m_22=phys['m'],
            c_11=phys['c'], c_12=phys['c'], c_21=phys['c'], c_22=phys['c'],
            I_x1=phys['I_x'], I_x2=phys['I_x'], m_p=phys['m_p'], a=phys['a'], g=g,
        )


class Cdr4Params(BaseModel):
    """Suspended robot with four cables anchored on a horizontal rectangle"""
    m: float = Field(default=4.5, description="End-effector mass (kg)")
    a: float = Field(default=7.05, description="Anchor spacing along y (m)")
    b: float = Field(default=3.56, description="Anchor spacing along x (m)")
    h: float = Field(default=4.26, description="Anchor height (m)")
    g: float = Field(default=9.81, description="Gravity (m/s^2)")

    @validator('m', 'a', 'b', 'h', 'g')
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError('Mass, anchor geometry and gravity must be greater than 0')
        return v

    @property
    def anchors(self) -> List[List[float]]:
        """Anchor points A_1..A_4 as [x, y, z]"""
        hb, ha = self.b / 2.0, self.a / 2.0
        return [
            [hb, ha, self.h],
            [-hb, ha, self.h],
            [hb, -ha, self.h],
            [-hb, -ha, self.h],
        ]

    def physical(self) -> dict:
        return {'m': self.m, 'a': self.a, 'b': self.b, 'h': self.h}

    @classmethod
    def from_physical(cls, phys: dict, g: float = 9.81) -> "Cdr4Params":
        return cls(m=phys['m'], a=phys['a'], b=phys['b'], h=phys['h'], g=g)


class Rpr2Robot(BaseModel):
    kind: Literal["rpr2"] = "rpr2"
    params: Rpr2Params = Field(default_factory=Rpr2Params)


class Cdr4Robot(BaseModel):
    kind: Literal["cdr4"] = "cdr4"
    params: Cdr4Params = Field(default_factory=Cdr4Params)


RobotSpec = Union[Rpr2Robot, Cdr4Robot]
