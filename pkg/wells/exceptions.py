"""Errors raised by the wells library. Every one derives from WellsError."""


class WellsError(Exception):
    """Base class for solver failures the command layer maps to exit code 3."""


class PoleError(WellsError, ValueError):
    """A gamma function or hypergeometric denominator sits on a pole."""


class DegenerateParameterError(WellsError, ArithmeticError):
    """Whittaker evaluation failed at (near-)integer 2*nu."""


class SpecialFunctionOverflow(WellsError, OverflowError):
    """A special-function value left the representable range."""


class DomainError(WellsError, ValueError):
    """Parameters outside the family the closed forms cover."""


class ScanResolutionError(WellsError):
    """Two sign changes of one condition fell inside a single scan cell."""

    def __init__(self, interval, parity):
        self.interval = tuple(float(edge) for edge in interval)
        self.parity = parity
        super().__init__(
            f"{parity} condition changes sign twice inside scan cell "
            f"[{self.interval[0]:.6g}, {self.interval[1]:.6g}]; refine the scan"
        )


class ParityOrderingError(WellsError):
    """Located roots do not alternate even, odd, even, ... from the top."""


class TailDominanceError(WellsError):
    """The analytic tail holds too much of the norm; x_max is too small."""


class ResolutionError(WellsError, ValueError):
    """A sampled wavefunction is too coarse to count its nodes."""


class GridMismatchError(WellsError, ValueError):
    """Oracle and analytic grids cannot be brought onto a common grid."""
