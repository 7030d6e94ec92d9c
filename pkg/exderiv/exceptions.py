"""Exceptions for the exderiv package."""


class ExteriorDerivativeException(Exception):
    """Base exception for the exderiv package."""


class InvalidArgumentException(ExteriorDerivativeException, ValueError):
    """Exception for arguments outside their documented range."""


class DataParseException(ExteriorDerivativeException, ValueError):
    """Exception for data files that cannot be read as a numeric table."""


class DegenerateNeighborhoodException(ExteriorDerivativeException):
    """Exception for a neighborhood where every kernel weight is zero."""


class RankDeficiencyException(ExteriorDerivativeException):
    """Exception for a penalized system that is numerically singular."""


class NoiseCorrectionException(ExteriorDerivativeException):
    """Exception for a predictor noise variance larger than the local covariance supports."""


class SelectionException(ExteriorDerivativeException):
    """Exception for a selection stage in which no fit succeeded."""
