import logging
import math

import numpy as np
from scipy.optimize import brentq

from src.config import Config
from src.models.sweep import FixedPointResult, FpiConfig, StepPolicy, SweepLeg, SweepMode, SweepPlan, ZeroRecord
from src.services.dde_catalog import DDECatalogService
from src.services.evaluation import EvaluationService
from src.utils.errors import DomainExit, NoConvergence
from src.utils.helpers import clustered_grid, nudge_inside

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2
GATE_POINTS = 8
GATE_SLACK = 1e-14
SPURIOUS_RESEEDS = 8
SCAN_POINTS = 512
SCAN_CAP = 8192
SCAN_REACH = 64 * math.pi
SEAM_WIDTHS = 4


def _pad(z):
    """Step padding that keeps a pi/2 step off the exact pole of H"""
    return 1e-8 * (1 + abs(z))


def _guard(dde, z_lo, z_hi):
    return max(z_lo - math.pi, dde.z_domain[0]), min(z_hi + math.pi, dde.z_domain[1])


def _residual(dde, z):
    t = dde.x_of_z(z)
    result = EvaluationService.eval_stable(dde.spec, dde.argument_sign * t)
    return t, result.residual


class FpiEngine:

    @staticmethod
    def ratio_H(dde, z):
        """H(z) = sign(d_n) sqrt(-e_n/d_n) y_n / y_{n-1} at x = x_of_z(z)"""
        t = dde.x_of_z(z)
        problem, partner = EvaluationService.eval_pair(dde, t)
        factor = dde.K(t) * problem.value
        if partner.value == 0:
            return math.copysign(math.inf, factor)
        return factor / partner.value

    @staticmethod
    def fixed_point(dde, z0, fpi=None, guard=None):
        """Iterate T(z) = z - atan(H(z)) from z0 until the step drops below tol_z.

        iterations counts the steps that moved z by at least the tolerance,
        so a start that lands on the zero in one move reports 1.
        """
        fpi = fpi or FpiConfig.from_config(Config)
        g_lo, g_hi = guard or dde.z_domain
        z = z0
        iterates = [z0]
        moves = 0
        previous_step = math.inf
        for _ in range(fpi.max_iter_per_zero + 1):
            if not g_lo < z < g_hi:
                raise DomainExit(f'Iterate z={z:.17g} left ({g_lo:g}, {g_hi:g})', z)
            z_next = z - math.atan(FpiEngine.ratio_H(dde, z))
            iterates.append(z_next)
            step = abs(z_next - z)
            size = max(1.0, abs(z_next))
            if step < fpi.tol_z * size:
                return FixedPointResult(z_next, moves, tuple(iterates))
            moves += 1
            if step < 1e-8 * size and step >= previous_step:
                # rounding noise floor reached
                logger.debug('Fixed point stagnated at z=%.17g, step %.3g', z_next, step)
                return FixedPointResult(z_next, moves, tuple(iterates))
            previous_step = step
            z = z_next
        raise NoConvergence(
            f'No convergence from z0={z0:.17g} in {fpi.max_iter_per_zero} iterations', z=z, iterates=iterates
        )

    @staticmethod
    def improved_step_allowed(dde, z_a, z_b):
        """eta * dA_tilde/dz >= 0 sampled between two zeros"""
        for z in np.linspace(z_a, z_b, GATE_POINTS + 2)[1:-1]:
            t = dde.x_of_z(float(z))
            if dde.eta(t) * dde.A_tilde_dz(t) < -GATE_SLACK:
                return False
        return True

    @staticmethod
    def _next_start(prev, prev2, dde, leg):
        if leg.step_policy == StepPolicy.IMPROVED and prev2 is not None:
            if FpiEngine.improved_step_allowed(dde, prev2.z, prev.z):
                return prev.z + leg.direction * abs(prev.z - prev2.z), True
        return prev.z + leg.direction * (HALF_PI + _pad(prev.z)), False

    @staticmethod
    def next_start(prev, prev2, dde, leg):
        return FpiEngine._next_start(prev, prev2, dde, leg)[0]

    @staticmethod
    def eta_crossings(dde, lo, hi, cfg=Config):
        """x values in (lo, hi) where eta changes sign"""
        if DDECatalogService.template(dde.direction).eta_root is not None:
            root = dde.eta_root
            return [root] if root is not None and lo < root < hi else []
        grid = clustered_grid(lo, hi, cfg.SCAN_GRID_POINTS,
                              cluster_lo=lo == dde.domain[0], cluster_hi=hi == dde.domain[1])
        values = [dde.eta(float(t)) for t in grid]
        crossings = []
        for left, right, v_left, v_right in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
            if v_left == 0 or v_left * v_right >= 0:
                continue
            crossings.append(brentq(dde.eta, float(left), float(right), xtol=1e-15, rtol=4 * np.finfo(float).eps))
        return crossings

    @staticmethod
    def plan_sweep(dde, x_interval, fpi=None, cfg=Config):
        fpi = fpi or FpiConfig.from_config(cfg)
        lo = max(x_interval[0], dde.domain[0])
        hi = min(x_interval[1], dde.domain[1])
        crossings = FpiEngine.eta_crossings(dde, lo, hi, cfg)
        policy = fpi.step_policy if len(crossings) <= 1 else StepPolicy.FIXED_HALF_PI

        bounds = [lo] + list(crossings) + [hi]
        legs = []
        for x_a, x_b in zip(bounds[:-1], bounds[1:]):
            legs.append(_leg(dde, x_a, x_b, x_a != lo, x_b != hi, policy, fpi.tol_z))

        z_lo, z_hi = dde.z_at(lo), dde.z_at(hi)
        if not crossings:
            mode = SweepMode.FORWARD if legs[0].direction > 0 else SweepMode.BACKWARD
            return SweepPlan(mode, z_lo, z_hi, legs[0].z_start, policy, legs=tuple(legs))
        split_z = dde.z_of_x(crossings[0])
        return SweepPlan(SweepMode.EXPANSIVE, z_lo, z_hi, split_z, policy, split_z=split_z,
                         legs=tuple(legs), crossings_x=tuple(crossings))

    @staticmethod
    def sweep_leg(dde, leg, fpi, cfg=Config):
        """Zeros of one monotone run, in the order found"""
        guard = _guard(dde, leg.z_lo, leg.z_hi)
        records = []

        def inside(z):
            return leg.z_lo < z < leg.z_hi

        def record(result, spent):
            t, residual = _residual(dde, result.z)
            return ZeroRecord(t, result.z, spent, residual, dde.direction)

        def solve(z0, z_from):
            return _solve(dde, leg, z0, z_from, fpi, guard, cfg)

        try:
            first = _first_zero(dde, leg, fpi, inside, record, solve)
            if first is None:
                return records
            records.append(first)

            # anchor is the last fixed point stepped from, spurious ones included
            anchor, anchor2 = first, None
            spurious = 0
            while len(records) < fpi.max_zeros:
                z0, improved = FpiEngine._next_start(anchor, anchor2, dde, leg)
                if not guard[0] < z0 < guard[1]:
                    break
                try:
                    result = solve(z0, anchor.z)
                    spent = result.iterations if result is not None else 0
                    if result is not None and _repeats(result.z, anchor, leg, fpi) and improved:
                        z0 = anchor.z + leg.direction * (HALF_PI + _pad(anchor.z))
                        result = solve(z0, anchor.z)
                        spent += result.iterations if result is not None else 0
                except DomainExit:
                    break
                if result is None or not inside(result.z) or _repeats(result.z, anchor, leg, fpi):
                    break
                found = record(result, spent)
                if found.residual >= fpi.residual_limit:
                    spurious += 1
                    logger.warning('Dropped fixed point at x=%.17g with residual %.3g', found.x, found.residual)
                    if spurious > SPURIOUS_RESEEDS:
                        break
                    anchor, anchor2 = found, None
                    continue
                records.append(found)
                anchor2 = anchor if anchor is records[-2] else None
                anchor = found
        except NoConvergence as err:
            raise NoConvergence(str(err), partial=records, z=err.z, iterates=err.iterates) from err
        return records

    @staticmethod
    def sweep(dde, x_interval, fpi=None, cfg=Config, plan=None):
        """Every zero of the problem function inside x_interval, ascending in x"""
        fpi = fpi or FpiConfig.from_config(cfg)
        plan = plan or FpiEngine.plan_sweep(dde, x_interval, fpi, cfg)
        logger.debug('Sweep %r: %s with %d leg(s)', dde, plan.mode.value, len(plan.legs))
        found = []
        for leg in plan.legs:
            try:
                found.extend(FpiEngine.sweep_leg(dde, leg, fpi, cfg))
            except NoConvergence as err:
                partial = merge_records(dde, found + err.partial, fpi.tol_z)
                raise NoConvergence(str(err), partial=partial, z=err.z) from err
        return merge_records(dde, found, fpi.tol_z)


def _leg(dde, x_a, x_b, seam_a, seam_b, policy, tol_z):
    """Leg over (x_a, x_b); seam_* marks ends that are eta crossings rather than interval ends"""
    z_a, z_b = dde.z_at(x_a), dde.z_at(x_b)
    pad_a = SEAM_WIDTHS * tol_z * max(1.0, abs(z_a)) if seam_a else 0.0
    pad_b = SEAM_WIDTHS * tol_z * max(1.0, abs(z_b)) if seam_b else 0.0
    if math.isfinite(z_a) and math.isfinite(z_b):
        mid = dde.x_of_z(0.5 * (z_a + z_b))
    else:
        mid = 0.5 * (x_a + x_b)
    direction = 1 if dde.eta(mid) <= 0 else -1

    if direction > 0:
        start = _start(dde, x_a, x_b, z_a, z_b, seam_a, tol_z, side=-1)
    else:
        start = _start(dde, x_a, x_b, z_a, z_b, seam_b, tol_z, side=1)
    return SweepLeg(direction, z_a - pad_a, z_b + pad_b, start, policy)


def _start(dde, x_a, x_b, z_a, z_b, at_seam, tol_z, side):
    """Start just inside the low end (side=-1) or the high end (side=1)"""
    if at_seam:
        z_end = z_a if side < 0 else z_b
        return z_end - side * tol_z * max(1.0, abs(z_end))
    # nudge in x; x_of_z saturates at bounded z ends
    x_end = x_a if side < 0 else x_b
    return dde.z_of_x(nudge_inside(x_end, x_a, x_b, side))


def _repeats(z, prev, leg, fpi):
    """Converged onto the previous zero or behind it"""
    if abs(z - prev.z) <= SEAM_WIDTHS * fpi.tol_z * max(1.0, abs(z)):
        return True
    return leg.direction * (z - prev.z) < 0


def _first_zero(dde, leg, fpi, inside, record, solve):
    width = leg.z_hi - leg.z_lo
    reseeds = math.ceil(width / HALF_PI) if math.isfinite(width) else 64
    z0 = leg.z_start
    spent = 0
    for _ in range(reseeds + 1):
        try:
            result = solve(z0, leg.z_start)
        except DomainExit as exit_:
            if leg.direction * (exit_.z - leg.z_begin) > 0:
                return None
            result = None
        else:
            if result is None:
                return None
        behind = result is None or leg.direction * (result.z - leg.z_begin) <= 0
        if result is not None:
            spent += result.iterations
        if not behind and not inside(result.z):
            return None
        if not behind:
            found = record(result, spent)
            if found.residual < fpi.residual_limit:
                return found
            logger.debug('Spurious fixed point at z=%.17g (residual %.3g), reseeding', result.z, found.residual)
        z0 = z0 + leg.direction * (HALF_PI + _pad(z0))
        if not inside(z0):
            return None
    return None


def _solve(dde, leg, z0, z_from, fpi, guard, cfg):
    """fixed_point from z0; None when the leg holds no zero past z_from"""
    try:
        return FpiEngine.fixed_point(dde, z0, fpi, guard)
    except NoConvergence as err:
        return _resume(dde, leg, z_from, err, fpi, guard, cfg)


def _resume(dde, leg, z_from, err, fpi, guard, cfg):
    """Settle a search that ran out of iterations while creeping along the leg.

    Without a sign change of the problem function between z_from and the leg
    end there is nothing left to find. Otherwise the search starts once more
    from just behind the next sign change and its iterations add to the count.
    """
    if not _creeping(err.iterates, leg.direction):
        raise err
    restart = _restart_point(dde, leg, z_from, cfg)
    if restart is None:
        logger.debug('%r: search from z=%.17g crept toward the leg end, no sign change left', dde, z_from)
        return None
    logger.info('%r: slow search restarted at z=%.17g', dde, restart)
    try:
        result = FpiEngine.fixed_point(dde, restart, fpi, guard)
    except DomainExit:
        return None
    return FixedPointResult(result.z, len(err.iterates) - 1 + result.iterations, result.iterates)


def _creeping(iterates, direction):
    """Every step of the search went the same way along the leg"""
    steps = direction * np.diff(np.asarray(iterates, dtype=float))
    return steps.size > 0 and bool(np.all(steps > 0))


def _scan_points(dde, leg, z_from):
    """x samples strictly between z_from and the leg end, in the order the leg travels"""
    z_from = z_from + leg.direction * 1e3 * _pad(z_from)
    z_lo, z_hi = dde.z_domain
    z_far = leg.z_end
    x_far = dde.domain[1] if leg.direction > 0 else dde.domain[0]
    if math.isfinite(z_far):
        z_far = min(max(z_far, z_lo), z_hi)
        x_far = dde.x_of_z(z_far)
    else:
        z_far = z_from + leg.direction * SCAN_REACH
        if not math.isfinite(x_far):
            x_far = dde.x_of_z(z_far)
    x_from = dde.x_of_z(z_from)
    lo, hi = sorted((x_from, x_far))
    if not lo < hi:
        return np.empty(0)

    grid = clustered_grid(lo, hi, SCAN_POINTS, cluster_lo=lo in dde.domain, cluster_hi=hi in dde.domain,
                          depth=1e-9)
    count = min(SCAN_CAP, max(SCAN_POINTS, math.ceil(16 * abs(z_far - z_from) / math.pi)))
    by_z = [dde.x_of_z(float(z)) for z in np.linspace(z_from, z_far, count + 2)[1:-1]]
    points = np.unique(np.concatenate([grid, by_z]))
    points = points[(points > lo) & (points < hi)]
    return points if leg.direction > 0 else points[::-1]


def _restart_point(dde, leg, z_from, cfg):
    """z of the last sample before the first sign change past z_from, or None"""
    before = None
    for t in _scan_points(dde, leg, z_from):
        value = EvaluationService.eval_stable(dde.spec, dde.argument_sign * float(t), cfg).value
        if value == 0:
            continue
        if before is not None and (value > 0) != (before[1] > 0):
            return dde.z_of_x(before[0])
        before = (float(t), value)
    return None


def merge_records(dde, records, tol_z):
    """Sort by x and merge zeros found twice (across a seam), keeping the smaller residual"""
    merged = []
    for rec in sorted(records, key=lambda r: r.x):
        if merged:
            last = merged[-1]
            dx_dz = 1.0 / dde.dz_dx(rec.x)
            if abs(rec.x - last.x) <= SEAM_WIDTHS * tol_z * max(1.0, abs(rec.z)) * dx_dz:
                if rec.residual < last.residual:
                    merged[-1] = rec
                continue
        merged.append(rec)
    return merged
