"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line can map failures to
distinct process statuses.
"""


class EnumGeomError(Exception):
    exit_code = 10


class BoundExceeded(EnumGeomError):
    exit_code = 3


class SizeLimitExceeded(BoundExceeded):
    exit_code = 4


class InvalidCommand(EnumGeomError):
    exit_code = 2


# algebra
class NonDivisible(EnumGeomError, ArithmeticError):
    exit_code = 11


class NotExpandable(EnumGeomError):
    exit_code = 12


class PoleAtPoint(EnumGeomError, ZeroDivisionError):
    exit_code = 13


class NonSquareBase(EnumGeomError, ValueError):
    exit_code = 14


class NonInvertibleConstantTerm(EnumGeomError, ZeroDivisionError):
    exit_code = 15


# plethystic calculus
class ZeroWeightPresent(EnumGeomError):
    exit_code = 16


class ConstantTermNotOne(EnumGeomError):
    exit_code = 17


class TrivialWeight(EnumGeomError):
    exit_code = 18


# combinatorics
class BoxOutsideDiagram(EnumGeomError, ValueError):
    exit_code = 19


class MissingDiagonalVariable(EnumGeomError, KeyError):
    exit_code = 20


# Hilbert schemes
class TrivialWeightInTvir(TrivialWeight):
    exit_code = 21


class NonPolynomialStar(EnumGeomError):
    exit_code = 22


class EpsilonPoleRemains(EnumGeomError):
    exit_code = 23


# transfer matrix / stable envelopes
class WindowTooSmall(EnumGeomError):
    exit_code = 24


class BasisOrderMismatch(EnumGeomError):
    exit_code = 25


# harness
class GoldenMismatch(EnumGeomError):
    exit_code = 26

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location
