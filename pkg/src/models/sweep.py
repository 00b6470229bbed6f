from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Tuple

from src.models.dde import DDEDirection


class SweepMode(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    EXPANSIVE = "expansive"


class StepPolicy(Enum):
    IMPROVED = "improved"
    FIXED_HALF_PI = "half-pi"


@dataclass(frozen=True)
class SweepLeg:
    """One directional run: direction +1 walks up in z, -1 walks down"""
    direction: int
    z_lo: float
    z_hi: float
    z_start: float
    step_policy: StepPolicy

    @property
    def z_end(self):
        return self.z_hi if self.direction > 0 else self.z_lo

    @property
    def z_begin(self):
        return self.z_lo if self.direction > 0 else self.z_hi


@dataclass(frozen=True)
class SweepPlan:
    mode: SweepMode
    z_lo: float
    z_hi: float
    z_start: float
    step_policy: StepPolicy
    split_z: Optional[float] = None
    legs: Tuple[SweepLeg, ...] = ()
    crossings_x: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.z_lo < self.z_hi:
            raise ValueError('Sweep plan needs z_lo < z_hi')
        if not self.z_lo <= self.z_start <= self.z_hi:
            raise ValueError('Sweep start outside [z_lo, z_hi]')
        if self.mode == SweepMode.EXPANSIVE and self.split_z is not None:
            if not self.z_lo < self.split_z < self.z_hi:
                raise ValueError('Expansive split point outside (z_lo, z_hi)')

    def to_dict(self):
        return {
            'mode': self.mode.value,
            'z_lo': self.z_lo,
            'z_hi': self.z_hi,
            'z_start': self.z_start,
            'split_z': self.split_z,
            'step_policy': self.step_policy.value,
            'legs': [{'direction': leg.direction, 'z_lo': leg.z_lo, 'z_hi': leg.z_hi,
                      'z_start': leg.z_start, 'step_policy': leg.step_policy.value} for leg in self.legs]
        }


@dataclass(frozen=True)
class FpiConfig:
    tol_z: float = 1e-13
    max_iter_per_zero: int = 100
    max_zeros: int = 10**6
    step_policy: StepPolicy = StepPolicy.IMPROVED
    residual_limit: float = 1e-8

    def __post_init__(self):
        if not self.tol_z > 0:
            raise ValueError('tol_z must be positive')
        if self.max_iter_per_zero < 1:
            raise ValueError('max_iter_per_zero must be at least 1')

    @classmethod
    def from_config(cls, cfg, **overrides):
        values = {
            'tol_z': cfg.TOL_Z,
            'max_iter_per_zero': cfg.MAX_ITER_PER_ZERO,
            'max_zeros': cfg.MAX_ZEROS,
            'step_policy': StepPolicy(cfg.STEP_POLICY),
            'residual_limit': cfg.RESIDUAL_LIMIT
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class FixedPointResult:
    z: float
    iterations: int
    iterates: Tuple[float, ...] = ()


@dataclass(frozen=True)
class ZeroRecord:
    x: float
    z: Optional[float]
    iterations: int
    residual: float
    dde: Optional[DDEDirection] = None

    def __repr__(self):
        return f'<ZeroRecord x={self.x!r} iterations={self.iterations}>'

    @property
    def dde_label(self):
        return self.dde.label if self.dde is not None else 'oracle'

    def with_x(self, x):
        return replace(self, x=x)

    def to_dict(self):
        return {
            'x': self.x,
            'z': self.z,
            'iterations': self.iterations,
            'residual': self.residual,
            'dde': self.dde_label
        }


@dataclass
class RunReport:
    records: List[ZeroRecord] = field(default_factory=list)
    dde_used: List[dict] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def total_iterations(self):
        return sum(record.iterations for record in self.records)

    def to_dict(self):
        return {
            'records': [record.to_dict() for record in self.records],
            'total_iterations': self.total_iterations,
            'dde_used': list(self.dde_used),
            'warnings': list(self.warnings)
        }


@dataclass(frozen=True)
class CompareRow:
    """Iterations spent on one zero by each compared DDE"""
    zero_index: int
    x: float
    iterations: Tuple[Optional[int], ...]
    ratio: Optional[float]

    def to_dict(self):
        data = {'zero_index': self.zero_index, 'x': self.x}
        for i, count in enumerate(self.iterations, start=1):
            data[f'iters_dde{i}'] = count
        data['ratio'] = self.ratio
        return data
