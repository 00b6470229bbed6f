import logging
import math

from src.config import Config
from src.models.dde import DDEDirection
from src.models.function_spec import Family, FunctionSpec, is_nonpositive_integer
from src.models.problem import NormalizedProblem, Selection, SelectionPiece
from src.services.dde_catalog import DDECatalogService
from src.utils.errors import (
    DegenerateDirection,
    NoAdmissibleDDE,
    NotOscillatoryHere,
    SingularInterval,
    UnboundedInterval,
    UnsupportedSolutionBranch
)
from src.utils.helpers import cauchy_root_bound, clustered_grid

logger = logging.getLogger(__name__)


def _identity(t):
    return t


def _negate(t):
    return -t


def _straddles(lo, hi, points):
    return any(lo < p < hi for p in points)


def _coefficients(spec):
    """Power-series coefficients of a terminating 1F1 or 2F1"""
    coefficients = [1.0]
    for k in range(spec.degree):
        factor = 1.0
        for p in spec.numerator_parameters:
            factor *= p + k
        coefficients.append(coefficients[-1] * factor / ((spec.c + k) * (k + 1)))
    return coefficients


def _bounded(spec, lo, hi, source=None):
    """Clip an infinite canonical end to the Cauchy root bound of a polynomial.

    source is the unmapped function when a Kummer reflection hides its
    polynomial form; the zero sets agree up to sign.
    """
    if math.isfinite(lo) and math.isfinite(hi):
        return lo, hi
    if not spec.is_polynomial and source is not None and source.is_polynomial:
        spec = source
    if not spec.is_polynomial or spec.degree == 0:
        raise UnboundedInterval(f'{spec.label}: infinite interval only supported for polynomials')
    bound = cauchy_root_bound(_coefficients(spec))
    return max(lo, -bound), min(hi, bound)


def _truncating_first(a, b):
    """Order (a, b) so that a is the truncating parameter with the lower degree"""
    if is_nonpositive_integer(b) and (not is_nonpositive_integer(a) or b > a):
        return b, a
    return a, b


def _sup_D(dde, interval, cfg):
    lo, hi = interval
    if not math.isfinite(hi):
        hi = max(10 * lo, lo + 1e3)
    grid = clustered_grid(lo, hi, 32, cluster_lo=lo == dde.domain[0], cluster_hi=hi == dde.domain[1])
    return max(dde.D(float(t)) for t in grid)


def _build(spec, direction, cfg):
    try:
        return DDECatalogService.make_dde(spec, direction, cfg)
    except (DegenerateDirection, NotOscillatoryHere) as err:
        logger.debug('Skipping %s: %s', direction.label, err)
        return None


class SelectorService:

    @staticmethod
    def normalize(spec, interval, arg_negated=False):
        """Move the problem onto a canonical interval where its DDEs live"""
        lo, hi = interval
        family = spec.family

        if family == Family.F01:
            if _straddles(lo, hi, (0.0,)):
                raise SingularInterval(f'({lo:g}, {hi:g}) contains the singular point 0')
            if arg_negated:
                if lo >= 0:
                    canonical, pullback, negated, name = (lo, hi), _identity, True, 'identity'
                else:
                    canonical, pullback, negated, name = (-hi, -lo), _negate, False, 'negate'
            elif hi <= 0:
                canonical, pullback, negated, name = (-hi, -lo), _negate, True, 'negate'
            else:
                canonical, pullback, negated, name = (lo, hi), _identity, False, 'identity'
            if not all(math.isfinite(end) for end in canonical):
                raise UnboundedInterval(f'{spec.label}: infinite interval only supported for polynomials')
            return NormalizedProblem(spec, canonical, pullback, (lo, hi), negated_argument=negated, map_name=name)

        if family == Family.F11:
            if _straddles(lo, hi, (0.0,)):
                raise SingularInterval(f'({lo:g}, {hi:g}) contains the singular point 0')
            if lo >= 0:
                return NormalizedProblem(spec, _bounded(spec, lo, hi), _identity, (lo, hi))
            mapped = spec.with_params(a=spec.c - spec.a)
            return NormalizedProblem(mapped, _bounded(mapped, -hi, -lo, spec), _negate, (lo, hi), map_name='kummer')

        if family == Family.F21:
            if _straddles(lo, hi, (0.0, 1.0)):
                raise SingularInterval(f'({lo:g}, {hi:g}) contains a singular point of the Gauss equation')
            if 0 <= lo and hi <= 1:
                return NormalizedProblem(spec, (lo, hi), _identity, (lo, hi))
            if hi <= 0:
                # Pfaff: F(a,b;c;x) = (1-x)^(-a) F(a,c-b;c;x/(x-1)), decreasing in x
                mapped = spec.with_params(b=spec.c - spec.b)
                u_lo = hi / (hi - 1)
                u_hi = 1.0 if math.isinf(lo) else lo / (lo - 1)
                return NormalizedProblem(mapped, (u_lo, u_hi), lambda u: u / (u - 1), (lo, hi), map_name='pfaff')
            if not spec.is_polynomial:
                raise UnsupportedSolutionBranch(
                    f'{spec.label} on (1, inf): only terminating series keep their zeros under the map'
                )
            a, b = _truncating_first(spec.a, spec.b)
            mapped = FunctionSpec(Family.F21, a=a, b=a + 1 - spec.c, c=a + b + 1 - spec.c)
            u_lo = 1 - 1 / lo
            u_hi = 1.0 if math.isinf(hi) else 1 - 1 / hi
            return NormalizedProblem(mapped, (u_lo, u_hi), lambda u: 1 / (1 - u), (lo, hi), map_name='inversion')

        if family == Family.F20:
            if not spec.is_polynomial:
                raise UnsupportedSolutionBranch(f'{spec.label} does not terminate; its zeros are not supported')
            if _straddles(lo, hi, (0.0,)):
                raise SingularInterval(f'({lo:g}, {hi:g}) contains the singular point 0')
            a, b = _truncating_first(spec.a, spec.b)
            n = -a
            if hi <= 0:
                # 2F0(-n,b;;x) is t^(-n) times a multiple of 1F1(-n;1-n-b;t), t = -1/x
                mapped = FunctionSpec(Family.F11, a=a, c=1 - n - b)
                t_lo = 0.0 if math.isinf(lo) else -1 / lo
                t_hi = math.inf if hi == 0 else -1 / hi
                return NormalizedProblem(mapped, _bounded(mapped, t_lo, t_hi), lambda t: -1 / t, (lo, hi),
                                         map_name='confluent')
            # t = -1/x < 0, then Kummer onto s = 1/x > 0
            polynomial = FunctionSpec(Family.F11, a=a, c=1 - n - b)
            mapped = polynomial.with_params(a=1 - b)
            s_lo = 0.0 if math.isinf(hi) else 1 / hi
            s_hi = math.inf if lo == 0 else 1 / lo
            return NormalizedProblem(mapped, _bounded(mapped, s_lo, s_hi, polynomial), lambda s: 1 / s, (lo, hi),
                                     map_name='confluent-kummer')

        raise ValueError(f'Unknown family {family!r}')

    @staticmethod
    def select_dde(problem, directions=None, cfg=Config):
        """Split the canonical interval and pick the DDE with the smallest D on each piece"""
        spec = problem.spec
        lo, hi = problem.canonical_interval

        if spec.family == Family.F01 and not problem.negated_argument:
            raise NoAdmissibleDDE(f'{spec.label} has no oscillatory DDE for a positive argument')

        if directions:
            chosen = [DDECatalogService.make_dde(spec, DDEDirection(spec.family, tuple(d)), cfg)
                      for d in directions]
            return Selection([SelectionPiece((lo, hi), chosen[0], tuple(chosen[1:]))])

        if spec.family == Family.F01:
            nu = spec.c - 1
            split = (nu * nu - 1) / 2
            if nu > cfg.NU_SWITCH and lo < split:
                plan = [((lo, min(hi, split)), ((2,),))]
                if hi > split:
                    plan.append(((split, hi), ((1,),)))
            else:
                plan = [((lo, hi), ((1,),))]
        elif spec.family == Family.F11:
            below = ((0, -1),) if abs(spec.c - 1) < cfg.DEGENERACY_TOL else ((1, 1), (0, -1))
            split = spec.c - spec.a
            if split <= lo:
                plan = [((lo, hi), ((1, 0),))]
            elif split >= hi:
                plan = [((lo, hi), below)]
            else:
                plan = [((lo, split), below), ((split, hi), ((1, 0),))]
        elif spec.family == Family.F21:
            plan = [((lo, hi), _preferred_gauss(spec))]
        else:
            raise NoAdmissibleDDE(f'{spec.label} has no cataloged DDE')

        built = {d.shift: _build(spec, d, cfg) for d in DDEDirection.catalog(spec.family)}
        admissible = [dde for dde in built.values() if dde is not None]
        selection = Selection()
        for interval, preferences in plan:
            if not admissible:
                raise NoAdmissibleDDE(f'No cataloged DDE applies to {spec.label} on {interval}')
            admissible.sort(key=lambda dde: _sup_D(dde, interval, cfg))
            primary = next((built[shift] for shift in preferences if built.get(shift)), admissible[0])
            fallbacks = tuple(dde for dde in admissible if dde is not primary)
            if primary.direction.shift != preferences[0]:
                logger.info('%s replaces %s for %s', primary.direction.label,
                            DDEDirection(spec.family, preferences[0]).label, spec.label)
            selection.pieces.append(SelectionPiece(interval, primary, fallbacks))
        return selection


def _preferred_gauss(spec):
    """(1,1,1) and (0,0,-1), the one with the smaller constant in D = k / (x(1-x)) first"""
    a, b, c = spec.params()
    first = abs((b - 1) * (1 - a))
    second = abs((b - c) * (c - a))
    return ((1, 1, 1), (0, 0, -1)) if first <= second else ((0, 0, -1), (1, 1, 1))
