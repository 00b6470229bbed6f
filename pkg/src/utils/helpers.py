import logging
import math

import numpy as np
from rich.console import Console
from rich.logging import RichHandler

from src.config import Config


def configure_logging(level=None, tracebacks=False):
    """Route package logs to stderr through rich; stdout carries data only"""
    level = level or Config.LOG_LEVEL
    handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=tracebacks)
    logging.basicConfig(level=level, format='%(message)s', datefmt='[%X]', handlers=[handler], force=True)
    return logging.getLogger('src')


def format_float(value, digits=None):
    """Format a float with the configured number of significant digits"""
    digits = digits or Config.FLOAT_DIGITS
    if value is None:
        return ''
    return format(float(value), f'.{digits}g')


def parse_params(text):
    """Parse 'a=-50,c=1' into {'a': -50.0, 'c': 1.0}"""
    params = {}
    for chunk in str(text).split(','):
        chunk = chunk.strip()
        if not chunk:
            continue
        if '=' not in chunk:
            raise ValueError(f"Parameter '{chunk}' must look like key=value")
        key, value = chunk.split('=', 1)
        key = key.strip().lower()
        if key in params:
            raise ValueError(f"Parameter '{key}' given twice")
        params[key] = float(value)
    return params


def parse_interval(text):
    """Parse 'lo,hi' (inf allowed) into an ordered pair of floats"""
    parts = [p.strip() for p in str(text).split(',')]
    if len(parts) != 2:
        raise ValueError('Interval must look like lo,hi')
    lo, hi = float(parts[0]), float(parts[1])
    if math.isnan(lo) or math.isnan(hi) or not lo < hi:
        raise ValueError('Interval needs lo < hi')
    return lo, hi


def clustered_grid(lo, hi, n, cluster_lo=True, cluster_hi=True, depth=1e-12):
    """Interior points of (lo, hi), geometrically packed toward the flagged endpoints.

    Both endpoints must be finite. The grid is sorted and strictly inside.
    """
    n = max(int(n), 4)
    width = hi - lo
    if cluster_lo and cluster_hi:
        half = n // 2
        mid = 0.5 * (lo + hi)
        left = lo + (mid - lo) * np.geomspace(depth, 1.0, half)
        right = hi - (hi - mid) * np.geomspace(depth, 1.0, n - half)[::-1]
        grid = np.concatenate([left, right])
    elif cluster_lo:
        grid = lo + width * np.geomspace(depth, 1.0, n + 1)[:-1]
    elif cluster_hi:
        grid = hi - width * np.geomspace(depth, 1.0, n + 1)[:-1][::-1]
    else:
        grid = np.linspace(lo, hi, n + 2)[1:-1]
    grid = np.unique(grid)
    return grid[(grid > lo) & (grid < hi)]


def nudge_inside(x, lo, hi, side, fraction=1e-13):
    """Move an endpoint a relative fraction of the interval width inward"""
    width = hi - lo
    step = fraction * width if math.isfinite(width) else fraction * max(1.0, abs(x))
    moved = x + step if side < 0 else x - step
    if moved == x:
        moved = math.nextafter(x, math.inf if side < 0 else -math.inf)
    return moved


def cauchy_root_bound(coefficients):
    """Every root of sum(c_k x^k) has modulus below this bound"""
    leading = coefficients[-1]
    if leading == 0:
        raise ValueError('Leading coefficient is zero')
    return 1.0 + max((abs(c / leading) for c in coefficients[:-1]), default=0.0)


def relative_gap(x, y):
    return abs(x - y) / max(abs(x), abs(y), 1e-300)
