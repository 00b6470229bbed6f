from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple
import math

from src.models.function_spec import Family, FunctionSpec

CATALOGED_SHIFTS = {
    Family.F01: ((1,), (2,)),
    Family.F11: ((1, 0), (0, -1), (1, 1)),
    Family.F21: ((1, 0, 0), (1, 1, 0), (1, 1, 2), (1, 0, 1), (1, -1, 0), (0, 0, -1), (1, 1, 1)),
}


@dataclass(frozen=True)
class DDEDirection:
    family: Family
    shift: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'shift', tuple(int(s) for s in self.shift))
        if self.shift not in CATALOGED_SHIFTS.get(self.family, ()):
            raise ValueError(f'Direction {self.shift} is not cataloged for {self.family.value}')

    def __repr__(self):
        return f'<DDEDirection {self.family.value} {self.label}>'

    @property
    def label(self):
        return '(' + ','.join(str(s) for s in self.shift) + ')'

    def parameter_shift(self):
        """(da, db, dc) that takes the problem function to its contrast function"""
        if self.family == Family.F01:
            return (0, 0, -self.shift[0])
        if self.family == Family.F11:
            k, m = self.shift
            return (-k, 0, -m)
        k, l, m = self.shift
        return (-k, -l, -m)

    @classmethod
    def parse(cls, family, text):
        """Build from the CLI form 'k[,l][,m]'"""
        parts = [p.strip() for p in str(text).strip('()').split(',') if p.strip()]
        return cls(family, tuple(int(p) for p in parts))

    @classmethod
    def catalog(cls, family):
        return [cls(family, shift) for shift in CATALOGED_SHIFTS.get(family, ())]

    def to_dict(self):
        return {'family': self.family.value, 'shift': list(self.shift)}


@dataclass(frozen=True)
class DDESystem:
    """One difference-differential system bound to concrete parameters.

    y_n' = a_n y_n + d_n y_{n-1} and y_{n-1}' = b_n y_{n-1} + e_n y_n in the
    variable x of the system, where y_n is the problem function and y_{n-1}
    the contrast function. For F01 the variable is t and the function
    argument is -t (argument_sign = -1).
    """
    direction: DDEDirection
    spec: FunctionSpec
    contrast_spec: FunctionSpec
    a_n: Callable[[float], float]
    b_n: Callable[[float], float]
    d_n: Callable[[float], float]
    e_n: Callable[[float], float]
    z_of_x: Callable[[float], float]
    x_of_z: Callable[[float], float]
    eta: Callable[[float], float]
    A_tilde: Callable[[float], float]
    A_tilde_dz: Callable[[float], float]
    domain: Tuple[float, float]
    z_domain: Tuple[float, float]
    argument_sign: int = 1
    eta_root: Optional[float] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def __repr__(self):
        return f'<DDESystem {self.spec.label} {self.direction.label}>'

    def z_at(self, x):
        """z_of_x extended to the domain endpoints (where the image may be infinite)"""
        if x <= self.domain[0]:
            return self.z_domain[0]
        if x >= self.domain[1]:
            return self.z_domain[1]
        return self.z_of_x(x)

    def D(self, x):
        return abs(self.d_n(x) * self.e_n(x))

    def de(self, x):
        return self.d_n(x) * self.e_n(x)

    def dz_dx(self, x):
        return math.sqrt(-self.de(x))

    def K(self, x):
        """sign(d_n) * sqrt(-e_n / d_n), the factor turning y_n/y_{n-1} into H"""
        d = self.d_n(x)
        return math.copysign(math.sqrt(-self.e_n(x) / d), d)

    def to_dict(self):
        return {
            'direction': self.direction.label,
            'spec': self.spec.to_dict(),
            'contrast': self.contrast_spec.to_dict(),
            'domain': list(self.domain),
            'eta_root': self.eta_root
        }
