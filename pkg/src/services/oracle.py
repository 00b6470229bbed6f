import logging

import numpy as np
from scipy.optimize import brentq

from src.config import Config
from src.models.problem import GridSpace, OracleConfig
from src.services.evaluation import EvaluationService
from src.utils.errors import GridTooCoarse, MultipleZerosFound
from src.utils.helpers import nudge_inside

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps


def _grid(interval, points, grid_space, dde):
    lo, hi = interval
    lo_in = nudge_inside(lo, lo, hi, -1)
    hi_in = nudge_inside(hi, lo, hi, 1)
    if grid_space == GridSpace.UNIFORM_Z and dde is not None:
        z_lo, z_hi = dde.z_of_x(lo_in), dde.z_of_x(hi_in)
        grid = np.array([dde.x_of_z(float(z)) for z in np.linspace(z_lo, z_hi, points)])
        grid[0], grid[-1] = lo_in, hi_in
        return np.unique(np.clip(grid, lo_in, hi_in))
    return np.linspace(lo_in, hi_in, points)


def _sign_changes(values):
    signs = np.sign(values)
    return np.nonzero(signs[:-1] * signs[1:] < 0)[0]


def _crowded(cells):
    """Two brackets in neighbouring cells"""
    return bool(len(cells) > 1 and np.any(np.diff(cells) == 1))


class OracleService:

    @staticmethod
    def brute_force_zeros(spec, interval, oracle=None, dde=None, argument_sign=1, cfg=Config):
        """Zeros of spec(argument_sign * x) on the open interval by sign scan and bisection.

        With a DDE and UNIFORM_Z the grid is uniform in its z variable.
        """
        oracle = oracle or OracleConfig.from_config(cfg)

        def value(t):
            return EvaluationService.eval_stable(spec, argument_sign * t, cfg).value

        points = oracle.grid_points
        for attempt in range(oracle.max_refinements + 1):
            grid = _grid(interval, points, oracle.grid_space, dde)
            values = np.array([value(float(t)) for t in grid])
            cells = _sign_changes(values)
            if not _crowded(cells):
                break
            coarse = _sign_changes(values[::2])
            if len(coarse) == len(cells):
                break
            if attempt == oracle.max_refinements:
                raise GridTooCoarse(
                    f'{spec.label}: zeros closer than the grid spacing on {interval} after {attempt} refinements'
                )
            points *= 4
            logger.debug('Oracle grid refined to %d points', points)

        rtol = max(oracle.bisection_tol, 4 * EPS)
        zeros = [float(t) for t, v in zip(grid, values) if v == 0]
        for i in cells:
            zeros.append(brentq(value, float(grid[i]), float(grid[i + 1]), xtol=1e-300, rtol=rtol))
        return sorted(zeros)

    @staticmethod
    def isolated_zero(spec, interval, oracle=None, dde=None, argument_sign=1, cfg=Config):
        """The single zero allowed by an at-most-one-zero verdict, or None"""
        zeros = OracleService.brute_force_zeros(spec, interval, oracle, dde, argument_sign, cfg)
        if len(zeros) > 1:
            raise MultipleZerosFound(
                f'{spec.label} has {len(zeros)} zeros on {interval} where at most one was expected', zeros
            )
        return zeros[0] if zeros else None
