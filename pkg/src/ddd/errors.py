"""Exception hierarchy shared by all ddd modules."""


class DDDError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInput(DDDError):
    """An operation received an empty dataset or record list."""


class InvalidDimension(DDDError):
    """Embedding dimension is zero or inconsistent with the declaration."""


class EmptyClass(DDDError):
    """A declared class has no records."""


class DimensionMismatch(DDDError):
    """Two inputs disagree on embedding dimension."""


class InvalidAlpha(DDDError):
    """Temperature parameter is non-positive, NaN or infinite."""


class UnknownLabel(DDDError):
    """A prediction refers to a label outside the declared label list."""


class MixedModes(DDDError):
    """Prediction records mix hard labels and probability vectors."""


class EmptyIntersection(DDDError):
    """No common labels between the compared matrices."""


class ZeroVector(DDDError):
    """Cosine similarity is undefined for a zero vector."""


class ParseError(DDDError):
    """A file failed to parse; message carries line number or byte offset."""


class DuplicateSampleId(DDDError):
    """Two records in one file share a sample id."""


class RaggedRow(DDDError):
    """A CSV row has the wrong number of columns."""


class NonFiniteValue(DDDError):
    """An embedding coordinate is NaN or infinite."""


class NegativeProbability(DDDError):
    """A probability column holds a negative value."""


class RowSumOutOfTolerance(DDDError):
    """A probability row does not sum to 1 within 1e-6."""


class InvalidConfig(DDDError):
    """A synthetic-benchmark or distortion configuration is invalid."""
