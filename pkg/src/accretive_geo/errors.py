"""Exception hierarchy.

Every error carries a ``kind`` (the class name) and an ``exit_code`` used by
the command-line front end:

* 1 -- the input lies outside the domain of the operation
* 2 -- usage / malformed input
* 3 -- numerical failure
"""

import numpy as np


class AccretiveGeoError(Exception):
    """Base class for all library errors."""

    exit_code = 3

    @property
    def kind(self):
        return type(self).__name__


# usage / malformed input -----------------------------------------------------

class InvalidInput(AccretiveGeoError, ValueError):
    exit_code = 2


class ParseError(InvalidInput):
    pass


class InvalidSpec(InvalidInput):
    pass


# domain violations -----------------------------------------------------------

class MatrixDomainError(AccretiveGeoError, ValueError):
    exit_code = 1


class NotHermitian(MatrixDomainError):
    pass


class NotSkewHermitian(MatrixDomainError):
    pass


class NotNormal(MatrixDomainError):
    pass


class NotPositiveDefinite(MatrixDomainError):
    pass


class NotAccretive(MatrixDomainError):
    pass


class NotAccretiveUnitary(MatrixDomainError):
    pass


class NotSectorial(MatrixDomainError):
    pass


class PhaseOutOfSector(MatrixDomainError):
    pass


class Singular(MatrixDomainError):
    pass


class DomainError(MatrixDomainError):
    """A scalar function was applied outside its domain."""


class BranchCut(MatrixDomainError):
    """An eigenvalue sits on (or too close to) the branch cut of log/sqrt."""


class DomainExit(MatrixDomainError):
    """A curve left the manifold at parameter ``t``."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


# numerical failures ----------------------------------------------------------

class NumericalFailure(AccretiveGeoError, np.linalg.LinAlgError):
    exit_code = 3


class EigFailure(NumericalFailure):
    pass


class ConvergenceFailure(NumericalFailure):
    pass


class ConsistencyError(NumericalFailure):
    """Two independent evaluations of the same quantity disagree."""
