import logging
import math

from src.config import Config
from src.models.function_spec import Family, FunctionSpec
from src.services.zero_finder import ZeroFinderService

logger = logging.getLogger(__name__)

NODE_KINDS = ('laguerre', 'jacobi', 'bessel')


def _mcmahon(nu, k):
    """Leading McMahon estimate of the k-th positive zero of J_nu"""
    return (k + nu / 2 - 0.25) * math.pi


class SpecialFamiliesService:
    """Classical zeros expressed through the hypergeometric front end"""

    @staticmethod
    def laguerre_nodes(n, alpha=0.0, fpi=None, cfg=Config):
        """Zeros of L_n^alpha, i.e. of 1F1(-n; alpha+1; x) on (0, inf)"""
        if n < 1 or alpha <= -1:
            raise ValueError('Laguerre nodes need n >= 1 and alpha > -1')
        spec = FunctionSpec(Family.F11, a=-n, c=alpha + 1)
        report = ZeroFinderService.find(spec, (0.0, math.inf), fpi=fpi, cfg=cfg)
        return [rec.x for rec in report.records]

    @staticmethod
    def jacobi_nodes(n, alpha=0.0, beta=0.0, fpi=None, cfg=Config):
        """Zeros of P_n^(alpha,beta) on (-1, 1) through 2F1(-n, n+alpha+beta+1; alpha+1; (1-x)/2)"""
        if n < 1 or alpha <= -1 or beta <= -1:
            raise ValueError('Jacobi nodes need n >= 1 and alpha, beta > -1')
        spec = FunctionSpec(Family.F21, a=-n, b=n + alpha + beta + 1, c=alpha + 1)
        report = ZeroFinderService.find(spec, (0.0, 1.0), fpi=fpi, cfg=cfg)
        return sorted(1 - 2 * rec.x for rec in report.records)

    @staticmethod
    def bessel_zeros(nu, count, fpi=None, cfg=Config):
        """First count positive zeros of J_nu, as 2 sqrt(t) for zeros t of 0F1(;nu+1;-t)"""
        if count < 1 or nu <= -1:
            raise ValueError('Bessel zeros need count >= 1 and nu > -1')
        spec = FunctionSpec(Family.F01, c=nu + 1)
        j_max = _mcmahon(nu, count) + 0.75 * math.pi
        while True:
            report = ZeroFinderService.find(spec, (0.0, j_max * j_max / 4), arg_negated=True, fpi=fpi, cfg=cfg)
            zeros = [2 * math.sqrt(rec.x) for rec in report.records]
            if len(zeros) >= count:
                return zeros[:count]
            logger.debug('Found %d of %d Bessel zeros below %.6g, widening', len(zeros), count, j_max)
            j_max *= 1.5

    @staticmethod
    def nodes(kind, n, alpha=0.0, beta=0.0, nu=0.0, fpi=None, cfg=Config):
        if kind == 'laguerre':
            return SpecialFamiliesService.laguerre_nodes(n, alpha, fpi, cfg)
        if kind == 'jacobi':
            return SpecialFamiliesService.jacobi_nodes(n, alpha, beta, fpi, cfg)
        if kind == 'bessel':
            return SpecialFamiliesService.bessel_zeros(nu, n, fpi, cfg)
        raise ValueError(f"Unknown node kind '{kind}'")
