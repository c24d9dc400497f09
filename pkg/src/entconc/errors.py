"""Exception types raised by the concentration pipeline."""


class ConcentrationError(Exception):
    """Base class for numerical failures distinct from bad arguments.

    Argument/domain violations raise plain ValueError; subclasses of this
    error mark conditions that arise from the physics (a branch with no
    probability mass, an unreachable fidelity threshold, a cutoff that
    discards too much state).
    """


class TruncationError(ConcentrationError):
    """The photon-number cutoff discards more weight than tolerated."""

    def __init__(self, message: str, suggested_n_max: int | None = None):
        super().__init__(message)
        self.suggested_n_max = suggested_n_max


class ZeroProbabilityError(ConcentrationError):
    """A conditional branch carries numerically zero probability."""


class EmptyRegionError(ConcentrationError):
    """No grid point reaches the requested fidelity threshold."""

    def __init__(self, message: str, max_fidelity: float | None = None):
        super().__init__(message)
        self.max_fidelity = max_fidelity
