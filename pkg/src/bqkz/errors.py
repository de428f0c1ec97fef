"""Exception types raised across the package."""


class BqkzError(Exception):
    """Base class for all errors raised by this package."""


class InvalidBase(BqkzError):
    pass


class TruncationNotConverged(BqkzError):
    pass


class ZeroArgument(BqkzError):
    pass


class SingularPoint(BqkzError):
    pass


class OutOfRange(BqkzError):
    pass


class NotHalfInteger(BqkzError):
    pass


class IllConditioned(BqkzError):
    pass


class ResidualTooLarge(BqkzError):
    pass


class Infeasible(BqkzError):
    pass


class DomainError(BqkzError):
    pass


class SectorViolation(BqkzError):
    pass


class PoleOnContour(BqkzError):
    pass


class NotConverged(BqkzError):
    pass


class ConfigError(BqkzError):
    pass
