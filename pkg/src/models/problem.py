from dataclasses import dataclass, field
import math
from enum import Enum
from typing import Callable, List, Tuple

from src.models.dde import DDESystem
from src.models.function_spec import FunctionSpec


@dataclass(frozen=True)
class NormalizedProblem:
    """A user problem moved onto a canonical interval.

    Zeros found at canonical x map back through pullback. For F01 with
    negated_argument the canonical variable is t and the function is
    0F1(;c;-t).
    """
    spec: FunctionSpec
    canonical_interval: Tuple[float, float]
    pullback: Callable[[float], float]
    user_interval: Tuple[float, float]
    negated_argument: bool = False
    preserves_zeros: bool = True
    map_name: str = 'identity'

    def __repr__(self):
        return f'<NormalizedProblem {self.spec.label} on {self.canonical_interval} via {self.map_name}>'

    @property
    def argument_interval(self):
        """Interval of the actual function argument"""
        lo, hi = self.canonical_interval
        return (-hi, -lo) if self.negated_argument else (lo, hi)

    def pull_back_interval(self, lo, hi):
        ends = sorted((self._pull_back_end(lo), self._pull_back_end(hi)))
        return (ends[0], ends[1])

    def _pull_back_end(self, u):
        """A canonical end where the map is singular is the infinite end of the user interval"""
        try:
            return self.pullback(u)
        except ZeroDivisionError:
            infinite = [end for end in self.user_interval if math.isinf(end)]
            if not infinite:
                raise
            return infinite[0]

    def to_dict(self):
        return {
            'spec': self.spec.to_dict(),
            'canonical_interval': list(self.canonical_interval),
            'user_interval': list(self.user_interval),
            'negated_argument': self.negated_argument,
            'map': self.map_name
        }


@dataclass(frozen=True)
class SelectionPiece:
    interval: Tuple[float, float]
    dde: DDESystem
    fallbacks: Tuple[DDESystem, ...] = ()

    def to_dict(self):
        return {
            'interval': list(self.interval),
            'dde': self.dde.direction.label,
            'fallbacks': [f.direction.label for f in self.fallbacks]
        }


class GridSpace(Enum):
    UNIFORM_X = "uniform_x"
    UNIFORM_Z = "uniform_z"


@dataclass(frozen=True)
class OracleConfig:
    grid_points: int = 20000
    bisection_tol: float = 1e-14
    grid_space: GridSpace = GridSpace.UNIFORM_Z
    max_refinements: int = 4

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError('grid_points must be at least 2')

    @classmethod
    def from_config(cls, cfg, **overrides):
        values = {
            'grid_points': cfg.ORACLE_GRID_POINTS,
            'bisection_tol': cfg.ORACLE_BISECTION_TOL,
            'max_refinements': cfg.ORACLE_MAX_REFINEMENTS
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class Selection:
    pieces: List[SelectionPiece] = field(default_factory=list)

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def to_dict(self):
        return [piece.to_dict() for piece in self.pieces]
