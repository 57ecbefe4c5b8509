"""Exception types shared across the package."""


class CgofsError(Exception):
    """Base class for all package-specific errors."""


class DimMismatch(CgofsError):
    """Vector/matrix widths that were required to agree do not."""


class EmptyMask(CgofsError):
    """A mask with zero selected features where at least one is required."""


class ObjectiveNonFinite(CgofsError):
    """An objective evaluation returned NaN or infinity."""


class UnknownAlgorithm(CgofsError):
    """Optimizer name not in the supported set."""


class SingleClass(CgofsError):
    """Training labels contain fewer than two classes."""


class NonFinite(CgofsError):
    """Classifier training produced non-finite parameters."""


class LengthMismatch(CgofsError):
    """Paired label vectors differ in length."""


class LabelOutOfRange(CgofsError):
    """A class id outside [0, class_count)."""


class ParseError(CgofsError):
    """Malformed input file; message carries the offending line number."""


class UnknownLabel(CgofsError):
    """Test-split label never seen in the train split."""


class DegenerateInput(CgofsError):
    """Score table too degenerate to rank."""


class InsufficientBlocks(CgofsError):
    """Rank analysis needs at least two blocks and two treatments."""
