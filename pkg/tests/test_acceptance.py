"""End-to-end checks on closed forms and against the brute-force oracle."""
import math

import numpy as np
import pytest
from scipy.special import roots_genlaguerre

from src.models.function_spec import Family, FunctionSpec
from src.services.dde_catalog import DDECatalogService
from src.services.fpi_engine import FpiEngine
from src.services.zero_finder import ZeroFinderService

pytestmark = pytest.mark.slow


def _xs(records):
    return [rec.x for rec in records]


def _iterations(rows, column):
    return [row.iterations[column] for row in rows]


def test_sine_zeros_are_exact(cfg, sine_spec):
    report = ZeroFinderService.find(sine_spec, (0.0, 1e4), arg_negated=True, cfg=cfg)
    count = int(2 * math.sqrt(1e4) / math.pi)
    assert _xs(report.records) == pytest.approx([(k * math.pi / 2) ** 2 for k in range(1, count + 1)], rel=1e-12)
    assert all(rec.iterations <= 2 for rec in report.records)


@pytest.mark.parametrize('n', [4, 10, 25])
def test_chebyshev_zeros(cfg, n):
    report = ZeroFinderService.find(FunctionSpec(Family.F21, a=-n, b=n, c=0.5), (0.0, 1.0), cfg=cfg)
    expected = [math.sin((2 * k - 1) * math.pi / (4 * n)) ** 2 for k in range(1, n + 1)]
    assert _xs(report.records) == pytest.approx(expected, rel=1e-11)


ORACLE_GRID = [
    (FunctionSpec(Family.F01, c=11), (0.0, 400.0), True),
    (FunctionSpec(Family.F01, c=51), (0.0, 3000.0), True),
    (FunctionSpec(Family.F01, c=3.25), (-200.0, -0.5), False),
    (FunctionSpec(Family.F11, a=-50, c=1), (0.0, 250.0), False),
    (FunctionSpec(Family.F11, a=-50, c=0.0001), (0.0, 50.0), False),
    (FunctionSpec(Family.F11, a=-17, c=4.5), (0.0, math.inf), False),
    (FunctionSpec(Family.F11, a=9, c=-3.5), (-60.0, 0.0), False),
    (FunctionSpec(Family.F21, a=-50, b=54, c=2.5), (0.0, 1.0), False),
    (FunctionSpec(Family.F21, a=-12, b=20.5, c=-3.5), (0.0, 1.0), False),
    (FunctionSpec(Family.F21, a=-14, b=-9, c=30), (-math.inf, 0.0), False),
    (FunctionSpec(Family.F21, a=-30, b=-32, c=-70), (1.0, math.inf), False),
    (FunctionSpec(Family.F20, a=-8, b=-8.5), (-math.inf, 0.0), False),
]


@pytest.mark.parametrize('spec, interval, arg_negated', ORACLE_GRID)
def test_find_matches_oracle(cfg, spec, interval, arg_negated):
    found = ZeroFinderService.find(spec, interval, arg_negated, cfg=cfg)
    brute = ZeroFinderService.oracle(spec, interval, arg_negated, cfg=cfg)
    assert len(found.records) == len(brute.records) > 0
    assert _xs(found.records) == pytest.approx(_xs(brute.records), rel=1e-10)


def test_inverted_gauss_finds_every_zero(cfg):
    report = ZeroFinderService.find(FunctionSpec(Family.F21, a=-30, b=-32, c=-70), (1.0, math.inf), cfg=cfg)
    assert len(report.records) == 30


def test_both_bessel_systems_agree(cfg, fpi):
    spec = FunctionSpec(Family.F01, c=11)
    hi = (30 * math.pi + 20) ** 2 / 4
    rows, notes = ZeroFinderService.compare(spec, (0.0, hi), [(1,), (2,)], arg_negated=True, cfg=cfg)
    assert not notes
    assert len(rows) >= 30

    root = FpiEngine.sweep(DDECatalogService.make_dde(spec, (1,), cfg), (0.0, hi), fpi, cfg)
    linear = FpiEngine.sweep(DDECatalogService.make_dde(spec, (2,), cfg), (0.0, hi), fpi, cfg)
    assert _xs(root) == pytest.approx(_xs(linear), rel=1e-9)


def test_large_order_prefers_linear_system(cfg):
    spec = FunctionSpec(Family.F01, c=201)
    rows, _ = ZeroFinderService.compare(spec, (0.0, 19000.0), [(1,), (2,)], arg_negated=True, cfg=cfg)
    assert rows
    assert sum(_iterations(rows, 1)) < sum(_iterations(rows, 0))


def test_large_order_expansive_sweep(cfg, fpi):
    spec = FunctionSpec(Family.F01, c=201)
    linear = DDECatalogService.make_dde(spec, (2,), cfg)
    root = DDECatalogService.make_dde(spec, (1,), cfg)
    by_linear = FpiEngine.sweep(linear, (0.0, 25000.0), fpi, cfg)
    by_root = FpiEngine.sweep(root, (0.0, 25000.0), fpi, cfg)
    assert len(by_linear) == len(by_root) > 0
    assert _xs(by_linear) == pytest.approx(_xs(by_root), rel=1e-9)


def test_small_c_laguerre_prefers_sqrt_system(cfg):
    spec = FunctionSpec(Family.F11, a=-50, c=0.0001)
    rows, _ = ZeroFinderService.compare(spec, (0.0, 250.0), [(1, 0), (1, 1)], cfg=cfg)
    first_three = rows[:3]
    assert all(row.iterations[1] < row.iterations[0] for row in first_three)
    assert first_three[0].ratio >= 5


def test_unit_c_laguerre_prefers_replacement(cfg):
    spec = FunctionSpec(Family.F11, a=-50, c=1)
    rows, _ = ZeroFinderService.compare(spec, (0.0, 250.0), [(1, 0), (0, -1)], cfg=cfg)
    first_three = rows[:3]
    assert all(row.iterations[1] < row.iterations[0] for row in first_three)
    assert first_three[0].ratio >= 3


def test_gauss_constant_factor_direction_is_cheaper(cfg):
    spec = FunctionSpec(Family.F21, a=-50, b=54, c=2.5)
    rows, _ = ZeroFinderService.compare(spec, (0.0, 1.0), [(1, -1, 0), (1, 1, 1)], cfg=cfg)
    assert len(rows) == 50
    assert sum(_iterations(rows, 1)) < sum(_iterations(rows, 0))


def test_zeros_are_bracketed(cfg):
    spec = FunctionSpec(Family.F21, a=-50, b=54, c=2.5)
    report = ZeroFinderService.find(spec, (0.0, 1.0), cfg=cfg)
    from src.services.evaluation import EvaluationService
    for rec in report.records:
        left = EvaluationService.value_at(spec, rec.x * (1 - 1e-9), cfg)
        right = EvaluationService.value_at(spec, rec.x * (1 + 1e-9), cfg)
        assert np.sign(left) != np.sign(right)


def test_large_order_split_keeps_every_zero(cfg):
    spec = FunctionSpec(Family.F01, c=201)
    found = ZeroFinderService.find(spec, (0.0, 30000.0), arg_negated=True, cfg=cfg)
    brute = ZeroFinderService.oracle(spec, (0.0, 30000.0), arg_negated=True, cfg=cfg)
    assert [entry['dde'] for entry in found.dde_used] == ['(2)', '(1)']
    assert len(found.records) == len(brute.records) > 0
    assert _xs(found.records) == pytest.approx(_xs(brute.records), rel=1e-10)
    assert np.all(np.diff(_xs(found.records)) > 0)


def test_2f0_zeros_match_the_mapped_laguerre_polynomial(cfg):
    # 2F0(-8, -8.5;; x) on x < 0 is a multiple of t^8 L_8^(1/2)(t), t = -1/x
    report = ZeroFinderService.find(FunctionSpec(Family.F20, a=-8, b=-8.5), (-math.inf, 0.0), cfg=cfg)
    nodes, _ = roots_genlaguerre(8, 0.5)
    assert _xs(report.records) == pytest.approx(sorted(-1 / nodes), rel=1e-10)
