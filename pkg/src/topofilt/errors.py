"""Exception hierarchy.

Every exception carries a short ``code`` used by the CLI to print a
machine-parsable one-line error and to pick an exit status.
"""
from __future__ import annotations


class TopofiltError(Exception):
    code = "Error"
    exit_status = 1


class ValidationError(TopofiltError, ValueError):
    exit_status = 3


class NonSquare(ValidationError):
    code = "NonSquare"


class AsymmetryBeyondTolerance(ValidationError):
    code = "AsymmetryBeyondTolerance"


class NegativeEntry(ValidationError):
    code = "NegativeEntry"


class NonzeroDiagonal(ValidationError):
    code = "NonzeroDiagonal"


class DimensionMismatch(ValidationError):
    code = "DimensionMismatch"


class SizeMismatch(ValidationError):
    code = "SizeMismatch"


class KOutOfRange(ValidationError):
    code = "KOutOfRange"


class NotATopology(ValidationError):
    code = "NotATopology"


class EmptyPoset(ValidationError):
    code = "EmptyPoset"


class UnsupportedCrosscut(ValidationError):
    code = "UnsupportedCrosscut"


class CapExceeded(TopofiltError):
    exit_status = 4


class ComplexityCapExceeded(CapExceeded):
    code = "ComplexityCapExceeded"


class OracleCapExceeded(CapExceeded):
    code = "OracleCapExceeded"


class InternalError(TopofiltError, RuntimeError):
    """Raised when an internal consistency check fails; always a bug."""

    exit_status = 1


class NotMonotone(InternalError):
    code = "NotMonotone"


class ChainMapNotCommuting(InternalError):
    code = "ChainMapNotCommuting"


class NegativeMultiplicity(InternalError):
    code = "NegativeMultiplicity"


class RelationInclusionFails(TopofiltError):
    code = "RelationInclusionFails"
