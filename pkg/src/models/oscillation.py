from dataclasses import dataclass
from enum import Enum
from typing import Optional


class OscillationStatus(Enum):
    OSCILLATORY = "oscillatory"
    AT_MOST_ONE_ZERO = "at_most_one_zero"


class OscillationReason(Enum):
    DE_NONNEG = "de_nonneg"
    ETA_GEQ_ONE = "eta_geq_one"
    ATILDE_NEGATIVE = "atilde_negative"
    PARAM_CONDITION = "param_condition"


@dataclass(frozen=True)
class OscillationVerdict:
    status: OscillationStatus
    reason: Optional[OscillationReason] = None
    condition: Optional[str] = None

    def __post_init__(self):
        if self.status == OscillationStatus.AT_MOST_ONE_ZERO and self.reason is None:
            raise ValueError('An at-most-one-zero verdict needs a reason')

    @classmethod
    def oscillatory(cls, condition=None):
        return cls(OscillationStatus.OSCILLATORY, condition=condition)

    @classmethod
    def at_most_one(cls, reason, condition=None):
        return cls(OscillationStatus.AT_MOST_ONE_ZERO, reason, condition)

    @property
    def is_oscillatory(self):
        return self.status == OscillationStatus.OSCILLATORY

    def to_dict(self):
        return {
            'status': self.status.value,
            'reason': self.reason.value if self.reason else None,
            'condition': self.condition
        }
