import math

import mpmath
import pytest

from src.models.dde import DDEDirection
from src.models.function_spec import Family, FunctionSpec
from src.services.dde_catalog import DDECatalogService
from src.services.evaluation import EvaluationService
from src.utils.errors import OutOfSeriesDomain, PoleAtParameter, UnsupportedSolutionBranch


@pytest.mark.parametrize('spec, x, expected', [
    (FunctionSpec(Family.F21, a=1, b=1, c=2), 0.0, 1.0),
    (FunctionSpec(Family.F11, a=1, c=1), 1.0, math.e),
    (FunctionSpec(Family.F21, a=1, b=1, c=2), 0.5, 2 * math.log(2)),
    (FunctionSpec(Family.F01, c=1.5), -1.0, math.sin(2.0) / 2.0),
    (FunctionSpec(Family.F20, a=-2, b=3), 0.5, 1 - 2 * 3 * 0.5 + 3 * 4 * 0.25),
])
def test_series_closed_forms(cfg, spec, x, expected):
    result = EvaluationService.eval(spec, x, cfg)
    assert result.value == pytest.approx(expected, rel=1e-14)
    assert result.terms_used <= cfg.SERIES_TERM_CAP
    assert not result.precision_loss


def test_series_derivative_matches_closed_form(cfg):
    # d/dx e^x = e^x
    result = EvaluationService.eval(FunctionSpec(Family.F11, a=1, c=1), 0.7, cfg)
    assert result.derivative == pytest.approx(math.exp(0.7), rel=1e-14)


def test_laguerre_root_evaluates_to_zero(cfg):
    spec = FunctionSpec(Family.F11, a=-2, c=1)
    result = EvaluationService.eval_stable(spec, 2 - math.sqrt(2), cfg)
    assert result.method == 'recurrence'
    assert abs(result.value) < 1e-12 * result.scale


def test_sine_root_evaluates_to_zero(cfg, sine_spec):
    result = EvaluationService.eval_stable(sine_spec, -(math.pi / 2) ** 2, cfg)
    assert abs(result.value) < 1e-13


def test_large_order_uses_backward_recurrence(cfg):
    spec = FunctionSpec(Family.F01, c=201)
    direct = EvaluationService.eval(spec, -10465.0, cfg)
    stable = EvaluationService.eval_stable(spec, -10465.0, cfg)

    assert direct.cancellation > cfg.MILLER_THRESHOLD
    assert stable.method == 'miller'
    with mpmath.workdps(40):
        exact = float(mpmath.hyp0f1(201, -10465))
    assert stable.value == pytest.approx(exact, rel=1e-8)


def test_kummer_reflection_on_negative_axis(cfg):
    # 1F1(3;2;x) = e^x (1 + x/2)
    spec = FunctionSpec(Family.F11, a=3, c=2)
    result = EvaluationService.eval_stable(spec, -20.0, cfg)
    assert result.method == 'kummer'
    assert result.value == pytest.approx(-9 * math.exp(-20.0), rel=1e-10)
    assert result.derivative == pytest.approx(math.exp(-20.0) * (1 - 10 + 0.5), rel=1e-10)


@pytest.mark.parametrize('spec, x', [
    (FunctionSpec(Family.F21, a=-50, b=54, c=2.5), 0.3),
    (FunctionSpec(Family.F21, a=-30, b=41, c=9), 0.7),
    (FunctionSpec(Family.F11, a=-50, c=0.0001), 12.5),
    (FunctionSpec(Family.F11, a=-20, c=3.5), 40.0),
])
def test_polynomial_recurrence_against_mpmath(cfg, spec, x):
    result = EvaluationService.eval_stable(spec, x, cfg)
    with mpmath.workdps(50):
        if spec.family == Family.F11:
            exact = mpmath.hyp1f1(spec.a, spec.c, x)
            slope = spec.a / spec.c * mpmath.hyp1f1(spec.a + 1, spec.c + 1, x)
        else:
            exact = mpmath.hyp2f1(spec.a, spec.b, spec.c, x)
            slope = spec.a * spec.b / spec.c * mpmath.hyp2f1(spec.a + 1, spec.b + 1, spec.c + 1, x)
    assert abs(result.value - float(exact)) <= 1e-12 * result.scale
    assert result.derivative == pytest.approx(float(slope), rel=1e-8, abs=1e-12 * result.scale)


def test_pair_of_half_integer_bessel_forms(cfg, sine_spec):
    dde = DDECatalogService.make_dde(sine_spec, DDEDirection(Family.F01, (1,)), cfg)
    problem, partner = EvaluationService.eval_pair(dde, 4.0, cfg)

    assert dde.contrast_spec.c == 0.5
    assert problem.value == pytest.approx(math.sin(4.0) / 4.0, rel=1e-13)
    assert partner.value == pytest.approx(math.cos(4.0), rel=1e-13)
    # derivative taken in t, the variable of the system
    assert problem.derivative == pytest.approx((math.cos(4.0) / 4.0 - math.sin(4.0) / 16.0) / 2.0, rel=1e-12)


def test_pair_contrast_parameters(cfg):
    spec = FunctionSpec(Family.F11, a=-2, c=1.5)
    dde = DDECatalogService.make_dde(spec, DDEDirection(Family.F11, (1, 1)), cfg)
    problem, partner = EvaluationService.eval_pair(dde, 1.0, cfg)

    assert (dde.contrast_spec.a, dde.contrast_spec.c) == (-3, 0.5)
    assert problem.value == pytest.approx(1 - 4 / 3 + 4 / 15, rel=1e-14)
    assert partner.value == pytest.approx(float(mpmath.hyp1f1(-3, 0.5, 1.0)), rel=1e-13)


def test_rejections(cfg):
    with pytest.raises(PoleAtParameter):
        EvaluationService.eval(FunctionSpec(Family.F11, a=1, c=-2), 0.5, cfg)
    with pytest.raises(OutOfSeriesDomain):
        EvaluationService.eval(FunctionSpec(Family.F21, a=0.5, b=0.5, c=2), 1.5, cfg)
    with pytest.raises(UnsupportedSolutionBranch):
        EvaluationService.eval(FunctionSpec(Family.F20, a=0.5, b=0.5), -0.1, cfg)


def test_polynomial_truncates_before_pole(cfg):
    # the series stops at degree 2 before (c)_k reaches zero
    spec = FunctionSpec(Family.F11, a=-2, c=-5)
    result = EvaluationService.eval(spec, 1.0, cfg)
    assert result.value == pytest.approx(1 + 2 / 5 + 2 / 40, rel=1e-14)


def test_series_ending_on_the_pole_degree_is_finite(cfg):
    # a = c = -3: the last term is x^3/3!, (c)_4 = 0 is never reached
    spec = FunctionSpec(Family.F11, a=-3, c=-3)
    assert not spec.series_pole()
    assert EvaluationService.eval(spec, 1.0, cfg).value == pytest.approx(8 / 3, rel=1e-14)
    assert EvaluationService.eval_stable(spec, 1.0, cfg).value == pytest.approx(8 / 3, rel=1e-14)
    assert FunctionSpec(Family.F11, a=-3, c=-2).series_pole()
