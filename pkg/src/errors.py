from __future__ import annotations

"""Error hierarchy shared by every phase-walk module.

All errors derive from ``ValueError`` so callers that only guard against invalid
data keep working.
"""


class PhaseWalkError(ValueError):
    """Base class for invalid data, invalid configuration and malformed files."""


class NonFiniteEntry(PhaseWalkError):
    def __init__(self, frame: int, column: int) -> None:
        super().__init__(f"non-finite feature entry at frame {frame}, column {column}")
        self.frame = frame
        self.column = column


class ZeroRow(PhaseWalkError):
    def __init__(self, frame: int) -> None:
        super().__init__(f"feature row {frame} is all zeros (cosine similarity undefined)")
        self.frame = frame


class TooShort(PhaseWalkError):
    def __init__(self, frames: int, minimum: int = 2) -> None:
        super().__init__(f"sequence has {frames} frame(s); at least {minimum} required")
        self.frames = frames
        self.minimum = minimum


class InvalidLabel(PhaseWalkError):
    pass


class InvalidTimestampSet(PhaseWalkError):
    pass


class InvalidHyperparameters(PhaseWalkError):
    pass


class NonPositiveWeight(PhaseWalkError):
    def __init__(self, index: int, value: float) -> None:
        super().__init__(f"edge weight {index} must be positive and finite, got {value!r}")
        self.index = index
        self.value = value


class DimensionMismatch(PhaseWalkError):
    pass


class AlreadyCorrected(PhaseWalkError):
    def __init__(self) -> None:
        super().__init__("probability matrix already has the sum-to-one correction applied")


class FrameOutOfRange(PhaseWalkError):
    def __init__(self, frame: int, frames: int) -> None:
        super().__init__(f"timestamp frame {frame} outside [0, {frames})")
        self.frame = frame
        self.frames = frames


class DuplicateFrame(PhaseWalkError):
    def __init__(self, frame: int) -> None:
        super().__init__(f"timestamp frame {frame} appears more than once")
        self.frame = frame


class EmptyPhase(PhaseWalkError):
    def __init__(self, phase: int) -> None:
        super().__init__(f"phase {phase} has no frames to sample from")
        self.phase = phase


class InsufficientSamples(PhaseWalkError):
    def __init__(self, phase: int, count: int) -> None:
        super().__init__(
            f"phase {phase} has {count} feature vector(s); at least 2 are needed "
            "for an unbiased covariance"
        )
        self.phase = phase
        self.count = count


class NonPSDAfterShrinkage(PhaseWalkError):
    def __init__(self, phase: int, epsilon: float) -> None:
        super().__init__(
            f"covariance of phase {phase} is not positive definite after shrinkage "
            f"epsilon={epsilon:g}; increase epsilon"
        )
        self.phase = phase
        self.epsilon = epsilon


class EmptyDataset(PhaseWalkError):
    pass


class LengthMismatch(PhaseWalkError):
    def __init__(self, left: int, right: int, what: str = "sequences") -> None:
        super().__init__(f"{what} differ in length: {left} vs {right}")
        self.left = left
        self.right = right


class EmptyEvaluation(PhaseWalkError):
    pass


class FormatError(PhaseWalkError):
    """Raised by readers in ``formats``; no partial result is ever returned."""


class BadMagic(FormatError):
    pass


class TruncatedFile(FormatError):
    pass


class VersionUnsupported(FormatError):
    pass


class MalformedRow(FormatError):
    def __init__(self, line: int, detail: str) -> None:
        super().__init__(f"line {line}: {detail}")
        self.line = line


class MissingHeader(FormatError):
    pass


class MalformedDocument(FormatError):
    pass


__all__ = [
    "PhaseWalkError",
    "NonFiniteEntry",
    "ZeroRow",
    "TooShort",
    "InvalidLabel",
    "InvalidTimestampSet",
    "InvalidHyperparameters",
    "NonPositiveWeight",
    "DimensionMismatch",
    "AlreadyCorrected",
    "FrameOutOfRange",
    "DuplicateFrame",
    "EmptyPhase",
    "InsufficientSamples",
    "NonPSDAfterShrinkage",
    "EmptyDataset",
    "LengthMismatch",
    "EmptyEvaluation",
    "FormatError",
    "BadMagic",
    "TruncatedFile",
    "VersionUnsupported",
    "MalformedRow",
    "MissingHeader",
    "MalformedDocument",
]
