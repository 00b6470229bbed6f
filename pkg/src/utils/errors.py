"""Exception hierarchy shared by the services and the CLI."""


class HyperzeroError(Exception):
    """Base error; exit_code is what the CLI returns for it"""
    exit_code = 1


class PoleAtParameter(HyperzeroError):
    exit_code = 2


class OutOfSeriesDomain(HyperzeroError):
    exit_code = 2


class RecurrenceUnstable(HyperzeroError):
    pass


class DegenerateDirection(HyperzeroError):
    exit_code = 2


class NotOscillatoryHere(HyperzeroError):
    exit_code = 2


class SingularInterval(HyperzeroError):
    exit_code = 2


class UnboundedInterval(HyperzeroError):
    exit_code = 2


class UnsupportedSolutionBranch(HyperzeroError):
    exit_code = 4


class NoAdmissibleDDE(HyperzeroError):
    exit_code = 2


class GridTooCoarse(HyperzeroError):
    pass


class MultipleZerosFound(HyperzeroError):
    """The oracle found more zeros than the oscillation verdict allows"""

    def __init__(self, message, zeros=()):
        super().__init__(message)
        self.zeros = list(zeros)


class DomainExit(HyperzeroError):
    """An iterate left the z-window of the sweep"""

    def __init__(self, message, z):
        super().__init__(message)
        self.z = z


class NoConvergence(HyperzeroError):
    exit_code = 3

    def __init__(self, message, partial=(), z=None, iterates=()):
        super().__init__(message)
        self.partial = list(partial)
        self.z = z
        self.iterates = tuple(iterates)


class PrecisionLoss(UserWarning):
    """Cancellation beyond the configured budget; results are flagged, never aborted"""
