"""Exception taxonomy for su2qfi."""


class Su2QfiError(ValueError):
    """Base class for all su2qfi errors."""


class DegenerateVectorError(Su2QfiError):
    """A zero-length vector was given where a direction is required."""


class SeriesDepthError(Su2QfiError):
    """A nested-commutator series did not converge within the term cap."""


class UnphysicalStateError(Su2QfiError):
    """A Bloch vector or density matrix violates physicality constraints."""


class ZeroDerivativeError(Su2QfiError):
    """The coefficient vector does not depend on the requested parameter."""


class StepSizeError(Su2QfiError):
    """A finite-difference step is outside the trustworthy range."""


class NormalizationError(Su2QfiError):
    """A state vector is not normalized."""


class DimensionalityError(Su2QfiError):
    """More parameters were requested than the dynamics can encode."""
