"""Exception hierarchy shared by every module of the package."""


class MwtError(Exception):
    """Base class for all errors raised by gridmwt."""


class DegenerateInputError(MwtError, ValueError):
    """Input violates distinctness or general position, or is too small."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class GridError(MwtError):
    """A point landed on a grid line, or a level lookup went out of range."""


class CrossingInsertionError(MwtError):
    """An edge insertion would break planarity."""


class ClassificationError(MwtError):
    """A face-boundary occurrence cannot be classified or searched."""


class Phase1Error(MwtError):
    """A runtime assertion of the ring phase failed.

    Carries the face, the processed occurrence and the step so the failing
    configuration can be reproduced.
    """

    def __init__(self, message, face=None, occurrence=None, step=None):
        super().__init__(
            f"{message} (face={face}, occurrence={occurrence}, step={step})"
        )
        self.face = face
        self.occurrence = occurrence
        self.step = step


class OracleScaleError(MwtError):
    """The exhaustive oracle was asked to handle too many points."""


class InputFormatError(MwtError, ValueError):
    """A point file line could not be parsed."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class PreconditionError(MwtError, ValueError):
    """A validator was called on a graph outside its domain."""
