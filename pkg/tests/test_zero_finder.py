import math

import numpy as np
import pytest
from scipy.special import jn_zeros, roots_genlaguerre, roots_jacobi

from src.models.function_spec import Family, FunctionSpec
from src.models.problem import GridSpace, OracleConfig
from src.services.fpi_engine import FpiEngine
from src.services.special_families import SpecialFamiliesService
from src.services.zero_finder import ZeroFinderService
from src.utils.errors import UnsupportedSolutionBranch


def _xs(report):
    return [rec.x for rec in report.records]


def test_find_sine_zeros(cfg, sine_spec):
    report = ZeroFinderService.find(sine_spec, (0.0, 30.0), arg_negated=True, cfg=cfg)
    assert _xs(report) == pytest.approx([(k * math.pi / 2) ** 2 for k in (1, 2, 3)], rel=1e-12)
    assert report.total_iterations <= 6
    assert report.dde_used[0]['dde'] == '(1)'


def test_find_on_negative_axis_pulls_back(cfg):
    # 1F1(3;2;x) = e^x (1 + x/2)
    report = ZeroFinderService.find(FunctionSpec(Family.F11, a=3, c=2), (-5.0, 0.0), cfg=cfg)
    assert _xs(report) == pytest.approx([-2.0], rel=1e-12)


def test_find_agrees_with_oracle_for_laguerre(cfg):
    spec = FunctionSpec(Family.F11, a=-20, c=1.5)
    found = ZeroFinderService.find(spec, (0.0, 120.0), cfg=cfg)
    brute = ZeroFinderService.oracle(spec, (0.0, 120.0), cfg=cfg)
    assert len(found.records) == len(brute.records) == 20
    assert _xs(found) == pytest.approx(_xs(brute), rel=1e-10)
    assert [entry['dde'] for entry in found.dde_used] == ['(1,1)', '(1,0)']


def test_find_inverted_gauss_polynomial(cfg):
    spec = FunctionSpec(Family.F21, a=-6, b=-7, c=-15)
    report = ZeroFinderService.find(spec, (1.0, math.inf), cfg=cfg)
    coefficients = [1.0]
    for k in range(6):
        coefficients.append(coefficients[-1] * (-6 + k) * (-7 + k) / ((-15 + k) * (k + 1)))
    roots = sorted(r.real for r in np.roots(coefficients[::-1]) if abs(r.imag) < 1e-9 and r.real > 1)
    assert _xs(report) == pytest.approx(roots, rel=1e-10)


def test_at_most_one_zero_uses_oracle(cfg):
    # b < 1 rules out every Gauss condition on (0, 1); the zero of 1 - 2x remains
    spec = FunctionSpec(Family.F21, a=-1, b=0.5, c=0.25)
    report = ZeroFinderService.find(spec, (0.0, 1.0), cfg=cfg)
    assert _xs(report) == pytest.approx([0.5])
    assert report.records[0].dde_label == 'oracle'
    assert report.records[0].z is None
    assert report.warnings


def test_positive_bessel_argument_falls_back_to_oracle(cfg):
    # 0F1(;c;x) has no positive zeros when c > 0
    report = ZeroFinderService.find(FunctionSpec(Family.F01, c=2.5), (0.5, 20.0), cfg=cfg)
    assert report.records == []


def test_non_terminating_2f0_is_rejected(cfg):
    with pytest.raises(UnsupportedSolutionBranch):
        ZeroFinderService.find(FunctionSpec(Family.F20, a=0.5, b=1.5), (-2.0, -1.0), cfg=cfg)


def test_compare_lines_up_zeros(cfg):
    spec = FunctionSpec(Family.F01, c=11)
    rows, notes = ZeroFinderService.compare(spec, (0.0, 400.0), [(1,), (2,)], arg_negated=True, cfg=cfg)
    assert not notes
    assert len(rows) == 8
    assert all(None not in row.iterations for row in rows)
    assert [row.zero_index for row in rows] == list(range(8))
    assert rows[0].ratio == pytest.approx(max(rows[0].iterations[0], 1) / max(rows[0].iterations[1], 1))


def test_oracle_on_uniform_x_grid(cfg):
    spec = FunctionSpec(Family.F11, a=-2, c=1)
    report = ZeroFinderService.oracle(spec, (0.0, 10.0), oracle=OracleConfig(grid_space=GridSpace.UNIFORM_X), cfg=cfg)
    assert _xs(report) == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)], rel=1e-12)
    assert all(rec.iterations == 0 for rec in report.records)


def test_laguerre_nodes(cfg):
    expected, _ = roots_genlaguerre(10, 0.5)
    assert SpecialFamiliesService.laguerre_nodes(10, 0.5, cfg=cfg) == pytest.approx(sorted(expected), rel=1e-10)


def test_jacobi_nodes(cfg):
    expected, _ = roots_jacobi(9, 0.5, -0.25)
    assert SpecialFamiliesService.jacobi_nodes(9, 0.5, -0.25, cfg=cfg) == pytest.approx(sorted(expected), abs=1e-11)


def test_bessel_zeros(cfg):
    assert SpecialFamiliesService.bessel_zeros(2, 6, cfg=cfg) == pytest.approx(list(jn_zeros(2, 6)), rel=1e-11)


def test_node_kinds(cfg):
    assert SpecialFamiliesService.nodes('laguerre', 2, cfg=cfg) == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)])
    with pytest.raises(ValueError):
        SpecialFamiliesService.nodes('hermite', 3, cfg=cfg)


def test_split_pieces_meet_without_losing_or_repeating_zeros(cfg):
    spec = FunctionSpec(Family.F11, a=-12, c=2.5)
    found = ZeroFinderService.find(spec, (0.0, 60.0), cfg=cfg)
    brute = ZeroFinderService.oracle(spec, (0.0, 60.0), cfg=cfg)
    assert [entry['dde'] for entry in found.dde_used] == ['(1,1)', '(1,0)']
    assert found.dde_used[0]['interval'][1] == found.dde_used[1]['interval'][0] == pytest.approx(14.5)
    assert len(found.records) == len(brute.records) == 12
    assert _xs(found) == pytest.approx(_xs(brute), rel=1e-10)
    assert np.all(np.diff(_xs(found)) > 1e-6)


def test_pfaff_interval_reaching_minus_infinity(cfg):
    spec = FunctionSpec(Family.F21, a=-6, b=-5, c=8)
    report = ZeroFinderService.find(spec, (-math.inf, 0.0), cfg=cfg)
    coefficients = [1.0]
    for k in range(6):
        coefficients.append(coefficients[-1] * (-6 + k) * (-5 + k) / ((8 + k) * (k + 1)))
    roots = sorted(r.real for r in np.roots(coefficients[::-1]) if abs(r.imag) < 1e-9 and r.real < 0)
    assert roots
    assert _xs(report) == pytest.approx(roots, rel=1e-10)
    assert report.dde_used[0]['interval'][0] == -math.inf


@pytest.mark.parametrize('error', [ZeroDivisionError('float division by zero'), ValueError('math domain error')])
def test_arithmetic_failure_moves_down_the_fallbacks(cfg, monkeypatch, error):
    honest = FpiEngine.sweep
    tried = []

    def flaky(dde, *args, **kwargs):
        tried.append(dde.direction.label)
        if len(tried) == 1:
            raise error
        return honest(dde, *args, **kwargs)

    monkeypatch.setattr(FpiEngine, 'sweep', flaky)
    spec = FunctionSpec(Family.F11, a=-20, c=1.5)
    report = ZeroFinderService.find(spec, (0.0, 10.0), cfg=cfg)
    brute = ZeroFinderService.oracle(spec, (0.0, 10.0), cfg=cfg)
    assert tried[0] == '(1,1)'
    assert report.dde_used[0]['dde'] == tried[1]
    assert _xs(report) == pytest.approx(_xs(brute), rel=1e-10)
