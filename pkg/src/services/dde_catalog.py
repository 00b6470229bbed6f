import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import sympy as sp

from src.config import Config
from src.models.dde import DDEDirection, DDESystem
from src.models.function_spec import Family
from src.services.evaluation import EvaluationService
from src.utils.errors import DegenerateDirection, HyperzeroError, NotOscillatoryHere

logger = logging.getLogger(__name__)

x, a, b, c = sp.symbols('x a b c')

UNIT = (0.0, 1.0)
HALF_LINE = (0.0, math.inf)


@dataclass(frozen=True)
class DDETemplate:
    """Symbolic coefficients of one direction plus its change of variable.

    change(a, b, c) returns (z_of_x, x_of_z, z_domain) for concrete parameters.
    """
    a_n: sp.Expr
    b_n: sp.Expr
    d_n: sp.Expr
    e_n: sp.Expr
    change: Callable
    domain: Tuple[float, float]
    degeneracies: Tuple[sp.Expr, ...] = ()
    eta_root: Optional[sp.Expr] = None
    argument_sign: int = 1
    notes: Tuple[str, ...] = ()


def _sqrt_half_line(scale):
    def change(pa, pb, pc):
        k = scale(pa, pb, pc)
        return (lambda t: 2 * math.sqrt(k * t)), (lambda z: z * z / (4 * k)), (0.0, math.inf)
    return change


def _f01_linear(pa, pb, pc):
    width = abs(pc - 2)
    return (lambda t: t / width), (lambda z: z * width), (0.0, math.inf)


def _f11_log(pa, pb, pc):
    n = math.sqrt((pc - pa) * (1 - pa))
    return (lambda t: n * math.log(t)), (lambda z: math.exp(z / n)), (-math.inf, math.inf)


def _f21_100(pa, pb, pc):
    n = math.sqrt((pc - pa) * (1 - pa))
    return (
        lambda t: -2 * n * math.atanh(math.sqrt(1 - t)),
        lambda z: 1 / math.cosh(z / (2 * n)) ** 2,
        (-math.inf, 0.0)
    )


def _f21_110(pa, pb, pc):
    n = math.sqrt((pb - pc) * (pc - pa) * (pb - 1) * (1 - pa))
    s = abs(pa + pb - pc - 1)
    return (lambda t: n / s * math.log(t)), (lambda z: math.exp(z * s / n)), (-math.inf, 0.0)


def _f21_112(pa, pb, pc):
    n = math.sqrt((pc - pa - 1) * (1 - pa) * (1 + pb - pc) * (pb - 1))
    s = abs(pc - 2)
    return (lambda t: -n / s * math.log1p(-t)), (lambda z: -math.expm1(-z * s / n)), (0.0, math.inf)


def _f21_101(pa, pb, pc):
    n = math.sqrt((1 - pa) * (pb + 1 - pc))
    return (
        lambda t: 2 * n * math.atanh(math.sqrt(t)),
        lambda z: math.tanh(z / (2 * n)) ** 2,
        (0.0, math.inf)
    )


def _f21_1m10(pa, pb, pc):
    n = math.sqrt(pb * (pc - pa) * (1 - pa) * (1 + pb - pc))
    s = abs(pb - pa + 1)
    return (
        lambda t: n / s * math.log(t / (1 - t)),
        lambda z: 1 / (1 + math.exp(-z * s / n)),
        (-math.inf, math.inf)
    )


def _arcsin_change(scale):
    def change(pa, pb, pc):
        n = math.sqrt(scale(pa, pb, pc))
        return (
            lambda t: n * math.asin(2 * t - 1),
            lambda z: (1 + math.sin(z / n)) / 2,
            (-n * math.pi / 2, n * math.pi / 2)
        )
    return change


s110 = a + b - c - 1

TEMPLATES = {
    (Family.F01, (1,)): DDETemplate(
        a_n=-(c - 1) / x,
        b_n=sp.Integer(0),
        d_n=(c - 1) / x,
        e_n=-1 / (c - 1),
        change=_sqrt_half_line(lambda pa, pb, pc: 1.0),
        domain=HALF_LINE,
        degeneracies=(c - 1,),
        argument_sign=-1,
        notes=('a_n and d_n carry the signs that make d_n*e_n negative',)
    ),
    (Family.F01, (2,)): DDETemplate(
        a_n=(x - (c - 1) * (c - 2)) / ((c - 2) * x),
        b_n=-1 / (c - 2),
        d_n=(c - 1) / x,
        e_n=-x / ((c - 1) * (c - 2) ** 2),
        change=_f01_linear,
        domain=HALF_LINE,
        degeneracies=(c - 1, c - 2),
        eta_root=(c - 2) ** 2 / 2,
        argument_sign=-1
    ),
    (Family.F11, (1, 0)): DDETemplate(
        a_n=(a - c + x) / x,
        b_n=(1 - a) / x,
        d_n=(c - a) / x,
        e_n=(a - 1) / x,
        change=_f11_log,
        domain=HALF_LINE,
        eta_root=c + 1 - 2 * a
    ),
    (Family.F11, (0, -1)): DDETemplate(
        a_n=sp.Integer(1),
        b_n=-c / x,
        d_n=(a - c) / c,
        e_n=c / x,
        change=_sqrt_half_line(lambda pa, pb, pc: pc - pa),
        domain=HALF_LINE,
        degeneracies=(c,),
        eta_root=(1 - 2 * c) / 2
    ),
    (Family.F11, (1, 1)): DDETemplate(
        a_n=(x + 1 - c) / x,
        b_n=sp.Integer(0),
        d_n=(c - 1) / x,
        e_n=(a - 1) / (c - 1),
        change=_sqrt_half_line(lambda pa, pb, pc: 1 - pa),
        domain=HALF_LINE,
        degeneracies=(c - 1,),
        eta_root=(2 * c - 3) / 2
    ),
    (Family.F21, (1, 0, 0)): DDETemplate(
        a_n=(-a - b * x + c) / (x * (x - 1)),
        b_n=(1 - a) / x,
        d_n=(a - c) / (x * (x - 1)),
        e_n=(a - 1) / x,
        change=_f21_100,
        domain=UNIT
    ),
    (Family.F21, (1, 1, 0)): DDETemplate(
        a_n=(-(a + b) * s110 + a * b - c) / (x * s110) + (a + b - c) / (x * (1 - x)),
        b_n=(a + b - a * b - 1) / (s110 * x),
        d_n=(a - c) * (c - b) / (x * (1 - x) * s110),
        e_n=-(1 - x) * (a - 1) * (1 - b) / (s110 * x),
        change=_f21_110,
        domain=UNIT,
        degeneracies=(s110,)
    ),
    (Family.F21, (1, 1, 2)): DDETemplate(
        a_n=((1 - x) * ((1 - a - b) * (c - 1) + a * b) + (c - 1) * (1 + a + b - c) - a * b)
        / (x * (1 - x) * (c - 2)),
        b_n=(1 - a - b + a * b) / ((1 - x) * (c - 2)),
        d_n=-(1 - c) / (x * (1 - x)),
        e_n=-x * (a - c + 1) * (1 - a) * (c - b - 1) * (b - 1) / ((1 - x) * (c - 1) * (c - 2) ** 2),
        change=_f21_112,
        domain=UNIT,
        degeneracies=(c - 1, c - 2)
    ),
    (Family.F21, (1, 0, 1)): DDETemplate(
        a_n=(1 + x * b - c) / (x * (1 - x)),
        b_n=-(1 - a) / (1 - x),
        d_n=-(1 - c) / (x * (1 - x)),
        e_n=(1 - a) * (b + 1 - c) / ((1 - x) * (1 - c)),
        change=_f21_101,
        domain=UNIT,
        degeneracies=(c - 1,)
    ),
    (Family.F21, (1, -1, 0)): DDETemplate(
        a_n=b * (x * (b - a + 1) + a - c) / (x * (1 - x) * (b - a + 1)),
        b_n=(1 - a) * ((1 - x) * (b - a + 1) + a - c) / (x * (1 - x) * (b - a + 1)),
        d_n=b * (c - a) / (x * (1 - x) * (b - a + 1)),
        e_n=-(1 - a) * (1 + b - c) / (x * (1 - x) * (b - a + 1)),
        change=_f21_1m10,
        domain=UNIT,
        degeneracies=(b - a + 1,)
    ),
    (Family.F21, (0, 0, -1)): DDETemplate(
        a_n=(b + a - c) / (1 - x),
        b_n=-c / x,
        d_n=-(b - c) * (c - a) / ((1 - x) * c),
        e_n=c / x,
        change=_arcsin_change(lambda pa, pb, pc: (pb - pc) * (pc - pa)),
        domain=UNIT,
        degeneracies=(c,)
    ),
    (Family.F21, (1, 1, 1)): DDETemplate(
        a_n=(x * (a + b - 1) - c + 1) / (x * (1 - x)),
        b_n=sp.Integer(0),
        d_n=-(1 - c) / (x * (1 - x)),
        e_n=(b - 1) * (1 - a) / (1 - c),
        change=_arcsin_change(lambda pa, pb, pc: (pb - 1) * (1 - pa)),
        domain=UNIT,
        degeneracies=(c - 1,)
    ),
}


@dataclass(frozen=True)
class CompiledDDE:
    a_n: Callable
    b_n: Callable
    d_n: Callable
    e_n: Callable
    eta: Callable
    eta_dz: Callable
    A_tilde: Callable
    A_tilde_dz: Callable
    degeneracies: Tuple[Callable, ...]
    eta_root: Optional[Callable]


def _lambdify(expr, args=(x, a, b, c)):
    return sp.lambdify(args, expr, modules='math')


@lru_cache(maxsize=None)
def _compiled(family, shift):
    """Derive eta and A_tilde from the coefficients and compile everything once per direction"""
    template = TEMPLATES[(family, shift)]
    d_n, e_n = template.d_n, template.e_n
    w = sp.cancel(-d_n * e_n)
    p = sp.cancel(-(template.a_n - template.b_n + (sp.diff(e_n, x) / e_n - sp.diff(d_n, x) / d_n) / 2))
    root_w = sp.sqrt(w)
    eta = p / (2 * root_w)
    eta_dz = sp.diff(eta, x) / root_w
    a_tilde = 1 + eta_dz - eta ** 2
    a_tilde_dz = sp.diff(a_tilde, x) / root_w
    logger.debug('Compiled DDE %s %s', family.value, shift)
    return CompiledDDE(
        a_n=_lambdify(template.a_n),
        b_n=_lambdify(template.b_n),
        d_n=_lambdify(d_n),
        e_n=_lambdify(e_n),
        eta=_lambdify(eta),
        eta_dz=_lambdify(eta_dz),
        A_tilde=_lambdify(a_tilde),
        A_tilde_dz=_lambdify(a_tilde_dz),
        degeneracies=tuple(_lambdify(expr, (a, b, c)) for expr in template.degeneracies),
        eta_root=_lambdify(template.eta_root, (a, b, c)) if template.eta_root is not None else None
    )


def _bind(func, params):
    return lambda t: float(func(t, *params))


def _clamped(x_of_z, domain):
    """x_of_z kept strictly inside the open domain, where sin, tanh and exp saturate"""
    inner_lo = math.nextafter(domain[0], math.inf)
    inner_hi = math.nextafter(domain[1], -math.inf)
    return lambda z: min(max(x_of_z(z), inner_lo), inner_hi)


def _probe_points(domain):
    if domain == UNIT:
        return (0.05, 0.25, 0.5, 0.75, 0.95)
    return (1e-3, 0.5, 2.0, 50.0, 1e4)


def _verification_sample(domain):
    if domain == UNIT:
        return (0.2, 0.5, 0.8)
    return (0.5, 2.0, 7.0)


class DDECatalogService:

    @staticmethod
    def template(direction):
        return TEMPLATES[(direction.family, direction.shift)]

    @staticmethod
    def make_dde(spec, direction, cfg=Config):
        """Bind a cataloged direction to concrete parameters"""
        if isinstance(direction, (tuple, list)):
            direction = DDEDirection(spec.family, tuple(direction))
        if direction.family != spec.family:
            raise ValueError(f'Direction {direction!r} does not belong to {spec.label}')

        template = DDECatalogService.template(direction)
        compiled = _compiled(direction.family, direction.shift)
        params = spec.params()

        for expr, check in zip(template.degeneracies, compiled.degeneracies):
            if abs(check(*params)) < cfg.DEGENERACY_TOL:
                raise DegenerateDirection(f'{direction.label} cannot be used for {spec.label}: {expr} = 0')

        contrast = spec.shifted(*direction.parameter_shift())
        if contrast.series_pole():
            raise DegenerateDirection(f'{direction.label}: contrast function {contrast.label} has a pole')

        d_n = _bind(compiled.d_n, params)
        e_n = _bind(compiled.e_n, params)
        for point in _probe_points(template.domain):
            if not d_n(point) * e_n(point) < 0:
                raise NotOscillatoryHere(
                    f'{direction.label} for {spec.label}: d_n*e_n >= 0 at x={point:g}, no oscillatory change of variable'
                )

        z_of_x, x_of_z, z_domain = template.change(*params)
        eta_root = None
        if compiled.eta_root is not None:
            root = float(compiled.eta_root(*params))
            if template.domain[0] < root < template.domain[1]:
                eta_root = root

        dde = DDESystem(
            direction=direction,
            spec=spec,
            contrast_spec=contrast,
            a_n=_bind(compiled.a_n, params),
            b_n=_bind(compiled.b_n, params),
            d_n=d_n,
            e_n=e_n,
            z_of_x=z_of_x,
            x_of_z=_clamped(x_of_z, template.domain),
            eta=_bind(compiled.eta, params),
            A_tilde=_bind(compiled.A_tilde, params),
            A_tilde_dz=_bind(compiled.A_tilde_dz, params),
            domain=template.domain,
            z_domain=z_domain,
            argument_sign=template.argument_sign,
            eta_root=eta_root,
            notes=template.notes
        )

        if cfg.VERIFY_DDES:
            try:
                residual = DDECatalogService.verify_dde_consistency(dde, _verification_sample(template.domain), cfg)
            except HyperzeroError as err:
                logger.warning('Could not verify %r: %s', dde, err)
            else:
                if residual > 1e-8:
                    logger.warning('%r fails its consistency check (residual %.3g)', dde, residual)
                else:
                    logger.debug('%r consistent to %.3g', dde, residual)
        return dde

    @staticmethod
    def eta_at(dde, t):
        return dde.eta(t)

    @staticmethod
    def eta_dz_at(dde, t):
        compiled = _compiled(dde.direction.family, dde.direction.shift)
        return float(compiled.eta_dz(t, *dde.spec.params()))

    @staticmethod
    def verify_dde_consistency(dde, sample, cfg=Config):
        """Largest normalized residual of both DDE equations over the sample points"""
        worst = 0.0
        for point in sample:
            problem, partner = EvaluationService.eval_pair(dde, point, cfg)
            y, dy = problem.value, problem.derivative
            w, dw = partner.value, partner.derivative

            terms = (dy, dde.a_n(point) * y, dde.d_n(point) * w)
            size = max(abs(term) for term in terms)
            if size > 0:
                worst = max(worst, abs(terms[0] - terms[1] - terms[2]) / size)

            terms = (dw, dde.b_n(point) * w, dde.e_n(point) * y)
            size = max(abs(term) for term in terms)
            if size > 0:
                worst = max(worst, abs(terms[0] - terms[1] - terms[2]) / size)
        return worst
