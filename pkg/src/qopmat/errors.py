"""Exception types raised by qopmat."""


class QopmatError(Exception):
    """Base class for all library errors."""


class DimensionError(QopmatError, ValueError):
    """Operand shapes are incompatible with the requested operation."""


class NotHermitianError(QopmatError, ValueError):
    def __init__(self, deviation: float, tol: float):
        self.deviation = deviation
        self.tol = tol
        super().__init__(
            f"matrix is not Hermitian: max |A - A^dag| = {deviation:.3e} > {tol:.1e}"
        )


class NotCompletelyPositiveError(QopmatError, ValueError):
    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"chi matrix is not positive (min eigenvalue {min_eigenvalue:.6g}); "
            "the map is not completely positive"
        )


class InvalidBasisError(QopmatError, ValueError):
    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class BasisMismatchError(QopmatError, ValueError):
    """Two representations refer to different operator bases."""


class NotRankOneError(QopmatError, ValueError):
    pass


class SizeGuardError(QopmatError, ValueError):
    """Requested register would exceed the configured matrix size cap."""


class FormatError(QopmatError, ValueError):
    """A file does not follow one of the qopmat JSON schemas."""
