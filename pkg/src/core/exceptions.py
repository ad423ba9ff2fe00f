"""
Exception hierarchy for graph filter construction, design and simulation
"""


class GraphFilterError(Exception):
    """Base class for every error raised by the toolkit"""
    pass


class UnsupportedKindError(GraphFilterError, ValueError):
    """Raised when a shift operator kind cannot be built for a graph"""
    pass


class DefectiveOperatorError(GraphFilterError):
    """Raised when a shift operator is not numerically diagonalizable"""
    pass


class DimensionMismatchError(GraphFilterError, ValueError):
    """Raised when matrix or signal dimensions disagree"""
    pass


class DegenerateInputError(GraphFilterError, ValueError):
    """Raised when an input is degenerate (zero matrix, singular covariance)"""
    pass


class ConnectivityError(GraphFilterError):
    """Raised when a connected random graph could not be generated within the retry budget"""
    pass


class SupportViolationError(GraphFilterError, ValueError):
    """Raised when a coefficient matrix has entries outside supp(S + I)"""
    pass


class DivergentFilterError(GraphFilterError):
    """Raised when an ARMA recursion is not contractive or diverges"""
    pass


class SingularModeError(GraphFilterError):
    """Raised when a rational modal response has a vanishing denominator"""
    pass


class InvalidParameterError(GraphFilterError, ValueError):
    """Raised when a parameter is outside its documented range"""
    pass


class LocalityViolationError(GraphFilterError):
    """Raised when a node would need data from a non-neighbor"""
    pass


class ZeroTargetError(GraphFilterError, ValueError):
    """Raised when the normalized error is requested against a zero target"""
    pass


class ConfigError(GraphFilterError, ValueError):
    """Raised for malformed or unknown configuration entries"""
    pass
