"""Exception types shared across the package."""


class GptObsError(Exception):
    """Base class for every error raised by this package."""


class InvalidMatrix(GptObsError):
    """A matrix argument is malformed (non-finite, non-square, not Hermitian, ...)."""


class DimensionCap(GptObsError):
    """A tensor product would exceed the configured dimension cap."""


class SpaceMismatch(GptObsError):
    """Objects from different state spaces were combined."""


class InvalidState(GptObsError):
    """A state representation does not describe a valid state of its space."""


class InvalidParameter(GptObsError):
    """A scalar or structural argument is outside its allowed range."""


class OutcomeMismatch(GptObsError):
    """Outcome sets do not line up between the objects involved."""


class AffineInconsistency(GptObsError):
    """Requested vertex values violate the affine dependencies of the polytope."""


class InsufficientNoise(GptObsError):
    """An observable lacks the noise content required by a joint construction.

    Carries the index of the failing observable and the missing amount.
    """

    def __init__(self, index: int, deficit: float):
        super().__init__(
            f"observable {index} is short {deficit:.3e} noise content "
            f"for the requested weights"
        )
        self.index = index
        self.deficit = deficit


class SizeCap(GptObsError):
    """A product outcome grid exceeds the configured size cap."""


class InvalidPPOVM(GptObsError):
    """Effects do not form a valid process measurement."""


class GenerationFailure(GptObsError):
    """A seeded random generator failed to produce a valid object."""
