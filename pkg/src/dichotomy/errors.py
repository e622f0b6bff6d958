"""Exception hierarchy.  Every error the library raises derives from
:class:`DichotomyError` so the CLI can map it to an exit code."""


class DichotomyError(Exception):
    pass


class DimensionMismatch(DichotomyError, ValueError):
    pass


class NonpositiveMass(DichotomyError):
    """A ball got zero (or negative) mass: malformed measure or empty ball."""


class EmptyBall(NonpositiveMass):
    """A lattice ball that contains no point of the lattice/window."""


class QuadratureNonconvergence(DichotomyError):
    pass


class EmptyFamily(DichotomyError):
    """No ball of the requested family contains the query point."""


class WitnessNotFound(DichotomyError):
    """No growth witness within the search horizon; ``prefix`` holds what was found."""

    def __init__(self, message, prefix=()):
        super().__init__(message)
        self.prefix = list(prefix)


class SelectionFailed(DichotomyError):
    pass


class VerificationFailed(DichotomyError):
    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level
