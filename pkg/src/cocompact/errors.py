class CocompactError(Exception):
    """Base class for every error raised by this package."""


class BudgetExceeded(CocompactError):
    """A desk-scale resource cap was hit; the computation was abandoned, not truncated."""


class SpecError(CocompactError):
    """Malformed map, cover or certificate file."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotPerfect(CocompactError):
    pass


class NotACover(CocompactError):
    pass


class ZeroSlopeSegment(CocompactError):
    pass


class NonDivergent(CocompactError):
    pass


class InvalidCertificate(CocompactError):
    pass


class GridTooCoarse(CocompactError):
    pass


class InvalidMeasure(CocompactError):
    pass


class OverlappingIntervals(InvalidCertificate):
    pass


class DegenerateInterval(InvalidCertificate):
    pass


class NotAChain(CocompactError):
    pass
