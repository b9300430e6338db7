"""Exception types shared across the package."""


class LathomError(Exception):
    """Base class for all package errors."""


class ZeroDeterminant(LathomError):
    """Pattern matrix is singular."""


class LengthMismatch(LathomError):
    """Sequence length does not match the pattern size m."""


class NotReduced(LathomError):
    """Frequency vector is not a canonical congruence representative."""


class DegenerateClass(LathomError):
    """A frequency class has vanishing bracket sum (translates dependent)."""

    def __init__(self, h, message=None):
        self.h = tuple(int(x) for x in h)
        super().__init__(message or f"degenerate frequency class {self.h}")


class NoInterpolant(LathomError):
    """Fundamental interpolant does not exist (a class sum vanishes)."""

    def __init__(self, h, message=None):
        self.h = tuple(int(x) for x in h)
        super().__init__(message or f"vanishing class sum at {self.h}")


class InvalidSpec(LathomError):
    """Kernel specification is malformed or inadmissible."""


class InvalidMaterial(LathomError):
    """Material parameters outside the physical range."""


class DimensionMismatch(LathomError):
    """Tensor operands have incompatible dimensions."""


class SingularAcousticTensor(LathomError):
    """Acoustic tensor not invertible at a nonzero frequency."""


class KernelNotOrthonormal(LathomError):
    """Operation requires an orthonormalised coefficient table."""


class ShapeMismatch(LathomError):
    """Field array shape does not match the expected layout."""


class NotConverged(LathomError):
    """Fixed-point iteration exhausted max_iter.

    Carries the partial report so callers can inspect the residual history.
    """

    def __init__(self, iterations, report=None, message=None):
        self.iterations = int(iterations)
        self.report = report
        super().__init__(message or f"no convergence after {self.iterations} iterations")


class NonElliptic(LathomError):
    """Stiffness field is not uniformly elliptic."""


class InvalidGeometry(LathomError):
    """Benchmark geometry parameters are inconsistent."""


class PatternMismatch(LathomError):
    """Fields live on incompatible patterns."""


class ParseError(LathomError):
    """Manifest syntax error."""

    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ValidationError(LathomError):
    """Manifest is syntactically fine but semantically invalid."""

    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
