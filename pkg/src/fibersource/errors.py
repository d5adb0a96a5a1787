"""Exception types raised by the solvers."""


class FiberSourceError(Exception):
    """Base class for all package errors."""


class OutOfValidityRange(FiberSourceError, ValueError):
    def __init__(self, wavelength_um, window):
        self.wavelength_um = wavelength_um
        self.window = tuple(window)
        super().__init__(
            f"wavelength {wavelength_um!r} um outside the dispersion model "
            f"validity window [{window[0]}, {window[1]}] um"
        )


class ModeCutoff(FiberSourceError):
    """No guided solution for the requested mode at this frequency."""

    def __init__(self, message, omega=None):
        self.omega = omega
        super().__init__(message)


class ConvergenceFailure(FiberSourceError):
    pass


class NoSolutionInBracket(FiberSourceError):
    pass


class QuadratureError(FiberSourceError):
    pass


class UnnormalizedProfile(FiberSourceError, ValueError):
    pass


class OutOfTableRange(FiberSourceError, ValueError):
    """A frequency falls outside a tabulated dispersion range."""
