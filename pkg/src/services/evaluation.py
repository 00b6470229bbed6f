import logging
import math

from src.config import Config
from src.models.function_spec import EvalResult, Family, FunctionSpec, is_nonpositive_integer
from src.utils.errors import OutOfSeriesDomain, PoleAtParameter, RecurrenceUnstable, UnsupportedSolutionBranch

logger = logging.getLogger(__name__)

EPS = 2.0 ** -52
RESCALE_AT = 1e250


def _result(value, derivative, scale, terms, cfg, method):
    cancellation = scale / abs(value) if value != 0 else math.inf
    if not math.isfinite(scale):
        cancellation = math.inf
    return EvalResult(
        value=value,
        derivative=derivative,
        cancellation=max(cancellation, 1.0),
        terms_used=terms,
        scale=scale,
        precision_loss=cancellation > cfg.CANCELLATION_BUDGET,
        method=method
    )


def _check_spec(spec, x):
    if spec.family == Family.F20 and not spec.is_polynomial:
        raise UnsupportedSolutionBranch(f'{spec.label} does not terminate; only polynomial 2F0 is evaluated')
    if spec.series_pole():
        raise PoleAtParameter(f'{spec.label}: c={spec.c:g} is a pole of the series')
    if spec.family == Family.F21 and not spec.is_polynomial and abs(x) >= 1:
        raise OutOfSeriesDomain(f'{spec.label} series diverges at x={x:g}; map the interval first')


def _sum_series(spec, x, cfg):
    """Plain power series with term-wise derivative"""
    numerators = spec.numerator_parameters
    c = spec.c
    if x == 0:
        first = math.prod(numerators) if numerators else 1.0
        if spec.has_denominator:
            first /= c
        return _result(1.0, first, 1.0, 1, cfg, 'series')

    term = 1.0
    total = 1.0
    derivative = 0.0
    scale = 1.0
    small_run = 0
    k = 0
    while k < cfg.SERIES_TERM_CAP:
        factor = 1.0
        for p in numerators:
            factor *= p + k
        if factor == 0:
            break
        denominator = (c + k) if spec.has_denominator else 1.0
        if denominator == 0:
            raise PoleAtParameter(f'{spec.label}: denominator vanishes at term {k}')
        term *= factor * x / (denominator * (k + 1))
        k += 1
        if not math.isfinite(term):
            return _result(total, derivative, math.inf, k, cfg, 'series')
        total += term
        dterm = k * term / x
        derivative += dterm
        scale = max(scale, abs(term))
        negligible = abs(term) <= EPS * abs(total) and abs(dterm) <= EPS * abs(derivative)
        if negligible or abs(term) <= EPS * EPS * scale:
            small_run += 1
            if small_run >= cfg.SERIES_STAGNATION_TERMS:
                break
        else:
            small_run = 0
    return _result(total, derivative, scale, k + 1, cfg, 'series')


def _recur_1f1(n, c, x):
    """M(-n; c; x) by the contiguous relation in a, walking down from M(0) = 1"""
    if n == 0:
        return 1.0, 1.0
    upper, current = 1.0, 1.0 - x / c
    scale = max(1.0, abs(x / c))
    for j in range(1, n):
        a = -j
        denominator = c - a
        if denominator == 0:
            raise PoleAtParameter(f'1F1(-{n};{c:g};x): recurrence hits c - a = 0')
        left = a * upper
        right = (2 * a - c + x) * current
        lower = (left - right) / denominator
        scale = max(abs(left), abs(right)) / abs(denominator)
        upper, current = current, lower
    return current, scale


def _recur_2f1(n, b, c, x):
    """F(-n, b; c; x) by the contiguous relation in a, walking down from F(0) = 1"""
    if n == 0:
        return 1.0, 1.0
    upper, current = 1.0, 1.0 - b * x / c
    scale = max(1.0, abs(b * x / c))
    for j in range(1, n):
        a = -j
        denominator = c - a
        if denominator == 0:
            raise PoleAtParameter(f'2F1(-{n},{b:g};{c:g};x): recurrence hits c - a = 0')
        middle = (2 * a - c + (b - a) * x) * current
        outer = a * (x - 1) * upper
        lower = -(middle + outer) / denominator
        scale = max(abs(middle), abs(outer)) / abs(denominator)
        upper, current = current, lower
    return current, scale


def _polynomial_by_recurrence(spec, x, cfg):
    if spec.family == Family.F11:
        n = spec.degree
        value, scale = _recur_1f1(n, spec.c, x)
        if n == 0:
            derivative = 0.0
        else:
            shifted, _ = _recur_1f1(n - 1, spec.c + 1, x)
            derivative = -n / spec.c * shifted
        return _result(value, derivative, scale, n, cfg, 'recurrence')

    # the truncating parameter walks; 2F1 is symmetric in a and b
    a, b = spec.a, spec.b
    if not is_nonpositive_integer(a) or (is_nonpositive_integer(b) and b > a):
        a, b = b, a
    n = int(-a)
    value, scale = _recur_2f1(n, b, spec.c, x)
    if n == 0:
        derivative = 0.0
    else:
        shifted, _ = _recur_2f1(n - 1, b + 1, spec.c + 1, x)
        derivative = a * b / spec.c * shifted
    return _result(value, derivative, scale, n, cfg, 'recurrence')


def _miller_parameters(c_low, t, count):
    root = math.sqrt(t)
    raise_by = max(count + 1, math.ceil(t / 4 - c_low), math.ceil(2 * root + 1 - c_low))
    return raise_by, 20 + math.ceil(2 * root)


def _miller_0f1(c_low, x, count, cfg):
    """0F1(;c_low + j; x) for j = 0..count+1 at x < 0 by backward recurrence in c.

    Returns a list of (value, scale) pairs. The trial solution is normalized
    against the series at a raised parameter where the series barely cancels.
    """
    t = -x
    raise_by, margin = _miller_parameters(c_low, t, count)
    top = raise_by + margin
    keep = set(range(0, count + 3)) | {raise_by}
    stored = {}
    scales = {}
    f_next, f_cur = 0.0, 1.0
    stored[top] = f_cur
    for j in range(top, 0, -1):
        k = c_low + j
        outer = x * f_next / (k * (k - 1))
        f_prev = f_cur + outer
        if j - 1 in keep:
            stored[j - 1] = f_prev
            scales[j - 1] = max(abs(f_cur), abs(outer))
        f_next, f_cur = f_cur, f_prev
        if abs(f_cur) > RESCALE_AT:
            f_next /= RESCALE_AT
            f_cur /= RESCALE_AT
            # every stored value shares the running scale
            for key in stored:
                stored[key] /= RESCALE_AT
                scales[key] = scales.get(key, 0.0) / RESCALE_AT

    anchor = _sum_series(FunctionSpec(Family.F01, c=c_low + raise_by), x, cfg)
    if anchor.cancellation > cfg.CANCELLATION_BUDGET or stored[raise_by] == 0:
        raise RecurrenceUnstable(
            f'0F1 normalization at c={c_low + raise_by:g}, x={x:g} cancels by {anchor.cancellation:.3g}'
        )
    factor = anchor.value / stored[raise_by]
    logger.debug('Miller 0F1: c=%g x=%g raised by %d, margin %d', c_low, x, raise_by, margin)
    return [(factor * stored[j], abs(factor) * scales[j]) for j in range(0, count + 2)], top


def _f01_from_miller(c, values, j, terms, cfg):
    value, scale = values[j]
    derivative = values[j + 1][0] / c
    return _result(value, derivative, scale, terms, cfg, 'miller')


class EvaluationService:

    @staticmethod
    def eval(spec, x, cfg=Config):
        """Direct power series value and derivative"""
        _check_spec(spec, x)
        return _sum_series(spec, x, cfg)

    @staticmethod
    def eval_stable(spec, x, cfg=Config):
        """Same contract as eval, routed through a cancellation-safe path where one exists"""
        _check_spec(spec, x)
        if spec.family in (Family.F11, Family.F21) and spec.is_polynomial:
            return _polynomial_by_recurrence(spec, x, cfg)

        direct = _sum_series(spec, x, cfg)
        if direct.cancellation <= cfg.MILLER_THRESHOLD or x >= 0:
            return direct

        if spec.family == Family.F01:
            values, terms = _miller_0f1(spec.c, x, 0, cfg)
            return _f01_from_miller(spec.c, values, 0, terms, cfg)

        if spec.family == Family.F11:
            # Kummer reflection: M(a;c;x) = e^x M(c-a;c;-x)
            reflected = _sum_series(spec.with_params(a=spec.c - spec.a), -x, cfg)
            if reflected.cancellation < direct.cancellation:
                weight = math.exp(x)
                return _result(
                    weight * reflected.value,
                    weight * (reflected.value - reflected.derivative),
                    weight * reflected.scale,
                    reflected.terms_used,
                    cfg,
                    'kummer'
                )
        return direct

    @staticmethod
    def eval_pair(dde, x, cfg=Config):
        """Problem and contrast function at the DDE variable x, derivatives in x"""
        argument = dde.argument_sign * x
        spec, contrast = dde.spec, dde.contrast_spec
        if spec.family == Family.F01 and argument < 0:
            direct = _sum_series(spec, argument, cfg)
            if direct.cancellation > cfg.MILLER_THRESHOLD:
                # one backward pass serves both members of the pair
                m = dde.direction.shift[0]
                values, terms = _miller_0f1(contrast.c, argument, m, cfg)
                problem = _f01_from_miller(spec.c, values, m, terms, cfg)
                partner = _f01_from_miller(contrast.c, values, 0, terms, cfg)
                return problem.chain(dde.argument_sign), partner.chain(dde.argument_sign)
        problem = EvaluationService.eval_stable(spec, argument, cfg)
        partner = EvaluationService.eval_stable(contrast, argument, cfg)
        return problem.chain(dde.argument_sign), partner.chain(dde.argument_sign)

    @staticmethod
    def value_at(spec, x, cfg=Config):
        return EvaluationService.eval_stable(spec, x, cfg).value
