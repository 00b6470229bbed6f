import logging
import warnings

from src.config import Config
from src.models.dde import DDEDirection
from src.models.problem import GridSpace, OracleConfig
from src.models.sweep import CompareRow, FpiConfig, RunReport, ZeroRecord
from src.services.dde_catalog import DDECatalogService
from src.services.evaluation import EvaluationService
from src.services.fpi_engine import FpiEngine
from src.services.oracle import OracleService
from src.services.oscillation import OscillationService
from src.services.selector import SelectorService
from src.utils.errors import NoAdmissibleDDE, NoConvergence, PrecisionLoss, RecurrenceUnstable
from src.utils.helpers import relative_gap

logger = logging.getLogger(__name__)

MATCH_TOLERANCE = 1e-8
SEAM_TOLERANCE = 1e-12


def _sign(problem):
    return -1 if problem.negated_argument else 1


def _oracle_record(problem, t, cfg):
    result = EvaluationService.eval_stable(problem.spec, _sign(problem) * t, cfg)
    return ZeroRecord(t, None, 0, result.residual, None)


def _merge(records):
    """Sort canonical records and drop the copy of a zero found on both sides of a seam"""
    merged = []
    for rec in sorted(records, key=lambda r: r.x):
        if merged and relative_gap(rec.x, merged[-1].x) <= SEAM_TOLERANCE:
            if rec.residual < merged[-1].residual:
                merged[-1] = rec
            continue
        merged.append(rec)
    return merged


def _pull_back(problem, records):
    lo, hi = problem.user_interval
    moved = [rec.with_x(problem.pullback(rec.x)) for rec in records]
    return sorted((rec for rec in moved if lo < rec.x < hi), key=lambda r: r.x)


def _warn(report, message):
    logger.warning(message)
    warnings.warn(message, PrecisionLoss, stacklevel=3)
    report.warnings.append(message)


def _check_precision(problem, canonical, report, cfg):
    """Flag cancellation between consecutive zeros, where the sweep evaluated the most"""
    xs = [rec.x for rec in canonical]
    for left, right in zip(xs[:-1], xs[1:]):
        mid = 0.5 * (left + right)
        result = EvaluationService.eval_stable(problem.spec, _sign(problem) * mid, cfg)
        if result.precision_loss:
            _warn(report, f'{problem.spec.label}: cancellation {result.cancellation:.3g} near x={mid:.6g}')
            return
    for rec in canonical:
        if rec.residual >= cfg.RESIDUAL_LIMIT:
            _warn(report, f'{problem.spec.label}: zero at x={rec.x:.17g} has residual {rec.residual:.3g}')


def _sweep_piece(piece, fpi, cfg):
    """Sweep with the selected DDE, moving down the fallbacks when it breaks"""
    candidates = (piece.dde,) + piece.fallbacks
    failure = None
    for dde in candidates:
        try:
            return dde, FpiEngine.sweep(dde, piece.interval, fpi, cfg)
        except (NoConvergence, RecurrenceUnstable, ArithmeticError, ValueError) as err:
            logger.warning('%s failed on %s: %s', dde.direction.label, piece.interval, err)
            failure = err
    raise failure


class ZeroFinderService:

    @staticmethod
    def find(spec, interval, arg_negated=False, directions=None, fpi=None, cfg=Config):
        """All real zeros of spec on the open interval"""
        fpi = fpi or FpiConfig.from_config(cfg)
        problem = SelectorService.normalize(spec, interval, arg_negated)
        report = RunReport()
        canonical = []
        logger.info('Solving %r', problem)

        verdict = OscillationService.check_parameters(problem.spec, problem.argument_interval)
        if not verdict.is_oscillatory:
            report.warnings.append(f'{problem.spec.label}: at most one zero ({verdict.condition})')
            zero = OracleService.isolated_zero(problem.spec, problem.canonical_interval,
                                               argument_sign=_sign(problem), cfg=cfg)
            if zero is not None:
                canonical.append(_oracle_record(problem, zero, cfg))
            report.records = _pull_back(problem, canonical)
            return report

        try:
            selection = SelectorService.select_dde(problem, directions, cfg)
        except NoAdmissibleDDE as err:
            report.warnings.append(str(err))
            zeros = OracleService.brute_force_zeros(problem.spec, problem.canonical_interval,
                                                    argument_sign=_sign(problem), cfg=cfg)
            report.records = _pull_back(problem, [_oracle_record(problem, t, cfg) for t in zeros])
            return report

        for piece in selection:
            gate = OscillationService.check_pointwise(piece.dde, piece.interval, cfg)
            entry = piece.to_dict()
            entry['interval'] = list(problem.pull_back_interval(*piece.interval))
            entry['verdict'] = gate.to_dict()
            if not gate.is_oscillatory:
                zero = OracleService.isolated_zero(problem.spec, piece.interval, dde=piece.dde,
                                                   argument_sign=_sign(problem), cfg=cfg)
                if zero is not None:
                    canonical.append(_oracle_record(problem, zero, cfg))
                report.dde_used.append(entry)
                continue
            try:
                used, found = _sweep_piece(piece, fpi, cfg)
            except NoConvergence as err:
                partial = _pull_back(problem, _merge(canonical + err.partial))
                raise NoConvergence(str(err), partial=partial, z=err.z) from err
            entry['dde'] = used.direction.label
            report.dde_used.append(entry)
            canonical.extend(found)

        canonical = _merge(canonical)
        _check_precision(problem, canonical, report, cfg)
        report.records = _pull_back(problem, canonical)
        logger.info('%d zero(s), %d iteration(s)', len(report.records), report.total_iterations)
        return report

    @staticmethod
    def compare(spec, interval, directions, arg_negated=False, fpi=None, cfg=Config):
        """Sweep once per DDE and line the iteration counts up zero by zero"""
        fpi = fpi or FpiConfig.from_config(cfg)
        problem = SelectorService.normalize(spec, interval, arg_negated)
        runs = []
        for shift in directions:
            dde = DDECatalogService.make_dde(problem.spec, DDEDirection(problem.spec.family, tuple(shift)), cfg)
            found = FpiEngine.sweep(dde, problem.canonical_interval, fpi, cfg)
            runs.append(_pull_back(problem, found))

        notes = []
        rows = []
        reference = runs[0]
        for index, rec in enumerate(reference):
            counts = [rec.iterations]
            for other in runs[1:]:
                match = next((r for r in other if relative_gap(r.x, rec.x) <= MATCH_TOLERANCE), None)
                counts.append(match.iterations if match else None)
            if any(count is None for count in counts):
                notes.append(f'zero {index} at x={rec.x:.17g} is missing from some DDE runs')
            ratio = None
            if len(counts) > 1 and counts[1] is not None:
                ratio = max(counts[0], 1) / max(counts[1], 1)
            rows.append(CompareRow(index, rec.x, tuple(counts), ratio))

        for position, other in enumerate(runs[1:], start=2):
            extra = [r for r in other if not any(relative_gap(r.x, ref.x) <= MATCH_TOLERANCE for ref in reference)]
            if extra:
                notes.append(f'DDE {position} found {len(extra)} zero(s) the first DDE did not')
        for note in notes:
            logger.warning(note)
        return rows, notes

    @staticmethod
    def oracle(spec, interval, arg_negated=False, oracle=None, cfg=Config):
        """Brute-force zeros on the same canonical problem the sweep would use"""
        oracle = oracle or OracleConfig.from_config(cfg)
        problem = SelectorService.normalize(spec, interval, arg_negated)
        sign = _sign(problem)
        pieces = [(problem.canonical_interval, None)]
        if oracle.grid_space == GridSpace.UNIFORM_Z:
            try:
                pieces = [(piece.interval, piece.dde) for piece in SelectorService.select_dde(problem, cfg=cfg)]
            except NoAdmissibleDDE:
                logger.info('No DDE for %s, using a uniform x grid', problem.spec.label)

        canonical = []
        for piece_interval, dde in pieces:
            zeros = OracleService.brute_force_zeros(problem.spec, piece_interval, oracle, dde, sign, cfg)
            canonical.extend(_oracle_record(problem, t, cfg) for t in zeros)
        return RunReport(records=_pull_back(problem, _merge(canonical)))
