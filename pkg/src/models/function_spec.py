from dataclasses import dataclass, replace
from enum import Enum
import math


class Family(Enum):
    F01 = "0F1"
    F11 = "1F1"
    F21 = "2F1"
    F20 = "2F0"


def is_nonpositive_integer(value):
    """True for 0, -1, -2, ... given as floats"""
    return value is not None and float(value).is_integer() and value <= 0


@dataclass(frozen=True)
class FunctionSpec:
    """A hypergeometric function with real parameters.

    F01 uses only c, F11 uses a and c, F21 uses a, b and c and F20 uses a
    and b (c is ignored there).
    """
    family: Family
    c: float = 0.0
    a: float = 0.0
    b: float = 0.0

    def __repr__(self):
        return f'<FunctionSpec {self.label}>'

    @property
    def label(self):
        if self.family == Family.F01:
            return f'0F1(;{self.c:g};x)'
        if self.family == Family.F11:
            return f'1F1({self.a:g};{self.c:g};x)'
        if self.family == Family.F20:
            return f'2F0({self.a:g},{self.b:g};;x)'
        return f'2F1({self.a:g},{self.b:g};{self.c:g};x)'

    @property
    def numerator_parameters(self):
        if self.family == Family.F01:
            return ()
        if self.family == Family.F11:
            return (self.a,)
        return (self.a, self.b)

    @property
    def has_denominator(self):
        return self.family != Family.F20

    def params(self):
        """Parameters in the (a, b, c) order used by the compiled DDE expressions"""
        return (float(self.a), float(self.b), float(self.c))

    def shifted(self, da=0, db=0, dc=0):
        return replace(self, a=self.a + da, b=self.b + db, c=self.c + dc)

    def with_params(self, **kwargs):
        return replace(self, **kwargs)

    @property
    def degree(self):
        """Degree of the terminating series, None when the series does not terminate"""
        degrees = [int(-p) for p in self.numerator_parameters if is_nonpositive_integer(p)]
        return min(degrees) if degrees else None

    @property
    def is_polynomial(self):
        return self.degree is not None

    def series_pole(self):
        """True when c hits a non-positive integer before the series terminates"""
        if not self.has_denominator or not is_nonpositive_integer(self.c):
            return False
        degree = self.degree
        return degree is None or degree > int(-self.c)

    def to_dict(self):
        data = {'family': self.family.value, 'c': self.c}
        if self.family in (Family.F11, Family.F21, Family.F20):
            data['a'] = self.a
        if self.family in (Family.F21, Family.F20):
            data['b'] = self.b
        if self.family == Family.F20:
            data.pop('c')
        return data


@dataclass(frozen=True)
class EvalResult:
    value: float
    derivative: float
    cancellation: float
    terms_used: int
    scale: float
    precision_loss: bool = False
    method: str = 'series'

    @property
    def residual(self):
        """|value| relative to the largest term that built it"""
        if self.scale == 0 or not math.isfinite(self.scale):
            return 0.0 if self.value == 0 else math.inf
        return abs(self.value) / self.scale

    def chain(self, factor):
        """Result seen through the substitution x -> factor * x (chain rule on the derivative)"""
        return replace(self, derivative=self.derivative * factor)

    def to_dict(self):
        return {
            'value': self.value,
            'derivative': self.derivative,
            'cancellation': self.cancellation,
            'terms_used': self.terms_used,
            'scale': self.scale,
            'precision_loss': self.precision_loss,
            'method': self.method
        }
