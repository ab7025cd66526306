"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedBranchError(ValueError):
    """A closed-form branch was requested outside its validity region."""


class OracleScaleError(ValueError):
    """A brute-force oracle was asked to run beyond its intended scale."""


class NumericalQualityError(ArithmeticError):
    """A computed value failed an internal conditioning or range check."""


class StatisticalPowerError(RuntimeError):
    """Too few samples to support the requested statistical estimate."""
