import math

import pytest

from src.models.function_spec import Family, FunctionSpec
from src.models.problem import GridSpace, OracleConfig
from src.services.dde_catalog import DDECatalogService
from src.services.oracle import OracleService
from src.utils.errors import MultipleZerosFound

CHEBYSHEV_4 = [math.sin((2 * k - 1) * math.pi / 16) ** 2 for k in range(1, 5)]


def test_chebyshev_roots(cfg):
    spec = FunctionSpec(Family.F21, a=-4, b=4, c=0.5)
    zeros = OracleService.brute_force_zeros(spec, (0.0, 1.0), cfg=cfg)
    assert zeros == pytest.approx(CHEBYSHEV_4, rel=1e-12)


def test_laguerre_quadratic_roots(cfg):
    spec = FunctionSpec(Family.F11, a=-2, c=1)
    zeros = OracleService.brute_force_zeros(spec, (0.0, 10.0), cfg=cfg)
    assert zeros == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)], rel=1e-12)


def test_negated_bessel_argument(cfg, sine_spec):
    zeros = OracleService.brute_force_zeros(sine_spec, (0.0, 30.0), argument_sign=-1, cfg=cfg)
    assert zeros == pytest.approx([(k * math.pi / 2) ** 2 for k in (1, 2, 3)], rel=1e-12)


def test_uniform_z_grid(cfg):
    spec = FunctionSpec(Family.F11, a=-12, c=0.5)
    dde = DDECatalogService.make_dde(spec, (1, 1), cfg)
    in_z = OracleService.brute_force_zeros(spec, (0.0, 60.0), OracleConfig(grid_points=400), dde, cfg=cfg)
    in_x = OracleService.brute_force_zeros(
        spec, (0.0, 60.0), OracleConfig(grid_points=400, grid_space=GridSpace.UNIFORM_X), cfg=cfg
    )
    assert len(in_z) == len(in_x) == 12
    assert in_z == pytest.approx(in_x, rel=1e-12)


def test_coarse_grid_is_refined(cfg):
    spec = FunctionSpec(Family.F21, a=-4, b=4, c=0.5)
    zeros = OracleService.brute_force_zeros(spec, (0.0, 1.0), OracleConfig(grid_points=6), cfg=cfg)
    assert len(zeros) == 4


def test_isolated_zero(cfg):
    spec = FunctionSpec(Family.F11, a=-1, c=2)
    assert OracleService.isolated_zero(spec, (0.0, 5.0), cfg=cfg) == pytest.approx(2.0)
    assert OracleService.isolated_zero(spec, (3.0, 5.0), cfg=cfg) is None


def test_isolated_zero_rejects_two(cfg):
    with pytest.raises(MultipleZerosFound) as info:
        OracleService.isolated_zero(FunctionSpec(Family.F11, a=-2, c=1), (0.0, 10.0), cfg=cfg)
    assert len(info.value.zeros) == 2


@pytest.mark.parametrize('spec, interval, sign', [
    (FunctionSpec(Family.F21, a=-12, b=15, c=2.5), (0.0, 1.0), 1),
    (FunctionSpec(Family.F11, a=-15, c=0.5), (0.0, 80.0), 1),
    (FunctionSpec(Family.F01, c=3.5), (0.0, 500.0), -1),
])
def test_doubling_the_grid_keeps_the_zeros(cfg, spec, interval, sign):
    def zeros(points):
        return OracleService.brute_force_zeros(spec, interval, OracleConfig(grid_points=points), argument_sign=sign,
                                               cfg=cfg)

    coarse, fine = zeros(2000), zeros(4000)
    assert len(coarse) == len(fine) > 0
    assert coarse == pytest.approx(fine, rel=1e-12)
