import os
import sys
# DON'T CHANGE THIS !!!
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

import csv
import io
import json

import click
import numpy as np

from src.config import config
from src.models.dde import DDEDirection
from src.models.function_spec import Family
from src.models.problem import GridSpace, OracleConfig
from src.models.sweep import FpiConfig, StepPolicy
from src.schemas.problem_schema import (
    CompareArgsSchema,
    DescribeArgsSchema,
    FindArgsSchema,
    NodesArgsSchema,
    OracleArgsSchema
)
from src.schemas.report_schema import CompareRowSchema, NodeSchema, RunReportSchema
from src.services.dde_catalog import DDECatalogService
from src.services.selector import SelectorService
from src.services.special_families import NODE_KINDS, SpecialFamiliesService
from src.services.zero_finder import ZeroFinderService
from src.utils.decorators import handle_errors, validate_input
from src.utils.helpers import configure_logging, format_float, nudge_inside

RECORD_HEADER = ['index', 'x', 'z', 'iterations', 'residual', 'dde']
FAMILIES = [f.value for f in Family]


def problem_options(f):
    """Options every single-function command shares"""
    options = [
        click.option('--family', required=True, type=click.Choice(FAMILIES), help='Hypergeometric family'),
        click.option('--params', required=True, help="Parameters as 'a=-50,c=1'"),
        click.option('--interval', required=True, help="Open interval 'lo,hi' (inf allowed)"),
        click.option('--arg-negated', is_flag=True, default=False,
                     help='0F1 only: the interval is in t for 0F1(;c;-t)'),
        click.option('--format', 'format', type=click.Choice(['csv', 'json']), default='csv'),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def sweep_options(f):
    options = [
        click.option('--tol', type=float, default=None, help='Fixed point tolerance in z'),
        click.option('--max-iter', type=int, default=None, help='Iteration cap per zero'),
        click.option('--step-policy', type=click.Choice([p.value for p in StepPolicy]), default=None),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _fpi(data, cfg):
    policy = StepPolicy(data['step_policy']) if data.get('step_policy') else None
    return FpiConfig.from_config(cfg, tol_z=data.get('tol'), max_iter_per_zero=data.get('max_iter'),
                                 step_policy=policy)


def _emit_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    click.echo(buffer.getvalue(), nl=False)


def _emit_json(payload):
    click.echo(json.dumps(payload, indent=2))


def emit_report(report, fmt, cfg):
    if fmt == 'json':
        _emit_json(RunReportSchema().dump(report))
        return
    _emit_csv(RECORD_HEADER, [
        [
            index,
            format_float(rec.x, cfg.FLOAT_DIGITS),
            format_float(rec.z, cfg.FLOAT_DIGITS),
            rec.iterations,
            format_float(rec.residual, cfg.FLOAT_DIGITS),
            rec.dde_label
        ]
        for index, rec in enumerate(report.records)
    ])


@click.group()
@click.option('--env', type=click.Choice(sorted(config)), default='default', help='Configuration profile')
@click.option('-v', '--verbose', count=True, help='Repeat for more log output')
@click.pass_context
def cli(ctx, env, verbose):
    """Real zeros of hypergeometric functions by fixed point iterations"""
    cfg = config[env]
    level = {0: cfg.LOG_LEVEL, 1: 'INFO'}.get(verbose, 'DEBUG')
    configure_logging(level, cfg.DEBUG)
    ctx.obj = cfg


@cli.command()
@problem_options
@sweep_options
@click.option('--dde', multiple=True, help="Override the DDE, e.g. '1,1' (repeat to add fallbacks)")
@click.pass_obj
@handle_errors
@validate_input(FindArgsSchema())
def find(data, cfg):
    """Find every zero in the interval"""
    report = ZeroFinderService.find(data['spec'], data['interval'], data['arg_negated'],
                                    data['dde'] or None, _fpi(data, cfg), cfg)
    emit_report(report, data['format'], cfg)


@cli.command()
@problem_options
@sweep_options
@click.option('--dde', multiple=True, required=True, help="DDE to compare, e.g. '1,0' (repeat)")
@click.pass_obj
@handle_errors
@validate_input(CompareArgsSchema())
def compare(data, cfg):
    """Per-zero iteration counts of two or more DDEs"""
    rows, _ = ZeroFinderService.compare(data['spec'], data['interval'], data['dde'], data['arg_negated'],
                                        _fpi(data, cfg), cfg)
    if data['format'] == 'json':
        _emit_json(CompareRowSchema(many=True).dump(rows))
        return
    header = ['zero_index', 'x'] + [f'iters_dde{i}' for i in range(1, len(data['dde']) + 1)] + ['ratio']
    lines = []
    for row in rows:
        counts = ['' if count is None else count for count in row.iterations]
        lines.append([row.zero_index, format_float(row.x, cfg.FLOAT_DIGITS)] + counts
                     + [format_float(row.ratio, cfg.FLOAT_DIGITS)])
    _emit_csv(header, lines)


@cli.command()
@problem_options
@click.option('--grid', type=int, default=None, help='Grid points of the sign scan')
@click.option('--grid-space', type=click.Choice([g.value for g in GridSpace]), default=None)
@click.pass_obj
@handle_errors
@validate_input(OracleArgsSchema())
def oracle(data, cfg):
    """Brute-force zeros by sign scan and bisection"""
    settings = OracleConfig.from_config(cfg, grid_points=data['grid'], grid_space=GridSpace(data['grid_space']))
    report = ZeroFinderService.oracle(data['spec'], data['interval'], data['arg_negated'], settings, cfg)
    emit_report(report, data['format'], cfg)


@cli.command()
@click.option('--kind', required=True, type=click.Choice(NODE_KINDS))
@click.option('-n', 'n', type=int, required=True, help='Degree, or number of Bessel zeros')
@click.option('--alpha', type=float, default=None)
@click.option('--beta', type=float, default=None)
@click.option('--nu', type=float, default=None, help='Bessel order')
@click.option('--format', 'format', type=click.Choice(['csv', 'json']), default='csv')
@click.pass_obj
@handle_errors
@validate_input(NodesArgsSchema())
def nodes(data, cfg):
    """Laguerre, Jacobi or Bessel zeros (quadrature nodes)"""
    values = SpecialFamiliesService.nodes(data['kind'], data['n'], data['alpha'], data['beta'], data['nu'], cfg=cfg)
    rows = [{'index': i, 'node': value} for i, value in enumerate(values)]
    if data['format'] == 'json':
        _emit_json(NodeSchema(many=True).dump(rows))
        return
    _emit_csv(['index', 'node'], [[row['index'], format_float(row['node'], cfg.FLOAT_DIGITS)] for row in rows])


@cli.command()
@problem_options
@click.option('--dde', required=True, help="DDE to inspect, e.g. '2'")
@click.option('--points', type=int, default=None, help='Samples, uniform in z')
@click.pass_obj
@handle_errors
@validate_input(DescribeArgsSchema())
def describe(data, cfg):
    """Tabulate eta, A_tilde and D of one DDE over the interval"""
    problem = SelectorService.normalize(data['spec'], data['interval'], data['arg_negated'])
    spec = problem.spec
    dde = DDECatalogService.make_dde(spec, DDEDirection(spec.family, data['dde']), cfg)
    lo = max(problem.canonical_interval[0], dde.domain[0])
    hi = min(problem.canonical_interval[1], dde.domain[1])
    z_lo = dde.z_of_x(nudge_inside(lo, lo, hi, -1))
    z_hi = dde.z_of_x(nudge_inside(hi, lo, hi, 1))

    header = ['x', 'z', 'eta', 'A_tilde', 'dA_tilde_dz', 'D']
    rows = []
    for z in np.linspace(z_lo, z_hi, data['points']):
        t = dde.x_of_z(float(z))
        rows.append([t, float(z), dde.eta(t), dde.A_tilde(t), dde.A_tilde_dz(t), dde.D(t)])
    if data['format'] == 'json':
        _emit_json([dict(zip(header, row)) for row in rows])
        return
    _emit_csv(header, [[format_float(value, cfg.FLOAT_DIGITS) for value in row] for row in rows])


if __name__ == '__main__':
    cli()
