"""Exception hierarchy shared by all modules."""


class DirichletCompositionError(Exception):
    """Base class for every error raised by this package."""


class DegenerateMapError(DirichletCompositionError, ValueError):
    """Coefficients with ad - bc = 0 (a constant, not a Mobius map)."""


class PoleError(DirichletCompositionError, ZeroDivisionError):
    """A map was evaluated at (or too near) its pole."""


class LineImageError(DirichletCompositionError, ValueError):
    """The unit circle is sent to a line, so there is no image circle."""


class PoleInsideDiskError(DirichletCompositionError, ValueError):
    """The pole of the map lies in the closed unit disk."""


class NotAutomorphismError(DirichletCompositionError, ValueError):
    """An operation that needs a disk automorphism received something else."""


class IdentityMapError(DirichletCompositionError, ValueError):
    """Every point is fixed; the fixed-point set is not finite."""


class DomainError(DirichletCompositionError, ValueError):
    """A point that must lie in the open unit disk does not."""


class ImageAtBoundaryError(DomainError):
    """A symbol pushed a disk point onto (or past) the unit circle."""


class KreinImageError(DomainError):
    """The Krein adjoint sends an evaluation point outside the disk."""


class NotSelfMapError(DirichletCompositionError, ValueError):
    """A composition or symbol does not map the disk into itself."""


class SamplingError(DirichletCompositionError, RuntimeError):
    """A function could not be evaluated on the sampling circle."""


class PrefixTooShortError(DirichletCompositionError, ValueError):
    """A finite sequence prefix never reaches the regime a lemma needs."""


class MapSpecError(DirichletCompositionError, ValueError):
    """A textual map specification could not be parsed.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} (at position {position} in {text!r})")
