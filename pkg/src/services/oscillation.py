import logging
import math

import numpy as np

from src.config import Config
from src.models.function_spec import Family
from src.models.oscillation import OscillationReason, OscillationVerdict
from src.utils.helpers import clustered_grid, nudge_inside

logger = logging.getLogger(__name__)

NEGATIVE_AXIS = (-math.inf, 0.0)
UNIT = (0.0, 1.0)
BEYOND_ONE = (1.0, math.inf)

# name, subinterval, predicate on (a, b, c)
GAUSS_CONDITIONS = (
    ('C1', NEGATIVE_AXIS, lambda a, b, c: a < 0 and b < 0 and c - a > 1 and c - b > 1),
    ('C2', NEGATIVE_AXIS, lambda a, b, c: a > 1 and b > 1 and c - a < 0 and c - b < 0),
    ('C3', UNIT, lambda a, b, c: a < 0 and b > 1 and c - a > 1 and c - b < 0),
    ('C4', UNIT, lambda a, b, c: a > 1 and b < 0 and c - a < 0 and c - b > 1),
    ('C5', BEYOND_ONE, lambda a, b, c: a < 0 and b < 0 and c - a < 0 and c - b < 0),
    ('C6', BEYOND_ONE, lambda a, b, c: a > 1 and b > 1 and c - a > 1 and c - b > 1),
)

FAR_FIELD = 1e12
LOG_SPAN = 10.0


def _subinterval(lo, hi, singular_points):
    """Which piece of the real line, cut at the singular points, holds (lo, hi)"""
    cuts = (-math.inf,) + tuple(singular_points) + (math.inf,)
    for left, right in zip(cuts[:-1], cuts[1:]):
        if left <= lo and hi <= right:
            return (left, right)
    raise ValueError(f'Interval ({lo:g}, {hi:g}) crosses a singular point {singular_points}')


def _sample(dde, lo, hi, n):
    """Scan points for the pointwise gate, with the nudged ends and the eta root added"""
    lo = max(lo, dde.domain[0])
    hi = min(hi, dde.domain[1])
    if math.isinf(hi):
        if lo > 0:
            grid = np.geomspace(lo, FAR_FIELD, n + 1)[1:]
        else:
            grid = np.geomspace(1e-12, FAR_FIELD, n)
    elif lo > 0 and hi / lo > LOG_SPAN:
        grid = np.geomspace(lo, hi, n + 2)[1:-1]
    else:
        grid = clustered_grid(lo, hi, n, cluster_lo=lo == dde.domain[0], cluster_hi=hi == dde.domain[1])

    extra = [nudge_inside(lo, lo, hi, -1)]
    if math.isfinite(hi):
        extra.append(nudge_inside(hi, lo, hi, 1))
    if dde.eta_root is not None and lo < dde.eta_root < hi:
        extra.append(dde.eta_root)
    return np.unique(np.concatenate([grid, extra]))


class OscillationService:

    @staticmethod
    def check_pointwise(dde, interval, cfg=Config):
        """Gate the sweep on the DDE's own functions over the interval (in the DDE variable)"""
        lo, hi = interval
        grid = _sample(dde, lo, hi, cfg.SCAN_GRID_POINTS)

        de = np.array([dde.de(float(t)) for t in grid])
        if np.all(de >= 0):
            return OscillationVerdict.at_most_one(OscillationReason.DE_NONNEG, 'd_n*e_n >= 0')

        admissible = grid[de < 0]
        logger.debug('%r: %d of %d scan points with d*e < 0', dde, admissible.size, grid.size)
        a_tilde = np.array([dde.A_tilde(float(t)) for t in admissible])
        if np.all(a_tilde < 0):
            return OscillationVerdict.at_most_one(OscillationReason.ATILDE_NEGATIVE, 'A_tilde < 0')

        eta = np.array([dde.eta(float(t)) for t in admissible])
        if np.all(np.abs(eta) >= 1):
            return OscillationVerdict.at_most_one(OscillationReason.ETA_GEQ_ONE, '|eta| >= 1')

        return OscillationVerdict.oscillatory()

    @staticmethod
    def check_parameters(spec, interval):
        """Parameter-only verdict for an interval of the function argument"""
        lo, hi = interval
        a, b, c = spec.params()

        if spec.family == Family.F01:
            if hi <= 0:
                return OscillationVerdict.oscillatory('x < 0')
            return OscillationVerdict.at_most_one(OscillationReason.PARAM_CONDITION, 'x > 0')

        if spec.family == Family.F11:
            if _subinterval(lo, hi, (0.0,))[0] == 0.0:
                holds, condition = c - a > 1 and a < 0, 'c-a>1, a<0'
            else:
                holds, condition = c - a < 0 and a > 1, 'c-a<0, a>1'
            if holds:
                return OscillationVerdict.oscillatory(condition)
            return OscillationVerdict.at_most_one(OscillationReason.PARAM_CONDITION, f'not ({condition})')

        if spec.family == Family.F21:
            piece = _subinterval(lo, hi, (0.0, 1.0))
            names = []
            for name, subinterval, predicate in GAUSS_CONDITIONS:
                if subinterval != piece:
                    continue
                names.append(name)
                if predicate(a, b, c):
                    return OscillationVerdict.oscillatory(name)
            return OscillationVerdict.at_most_one(OscillationReason.PARAM_CONDITION, f'neither {" nor ".join(names)}')

        raise ValueError(f'{spec.label}: normalize 2F0 problems before checking parameters')

    @staticmethod
    def oscillatory_subinterval(a, b, c):
        """The one 2F1 subinterval whose condition set holds, as (interval, name), or None"""
        for name, subinterval, predicate in GAUSS_CONDITIONS:
            if predicate(a, b, c):
                return subinterval, name
        return None
