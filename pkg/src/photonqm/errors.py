"""Exception types raised by photonqm."""


class PhotonError(ValueError):
    """Base class for invalid inputs and failed preconditions."""


class SupportMismatchError(PhotonError):
    """Two momentum wave functions are not sampled on the same support."""


class NonNormalizableError(PhotonError):
    """The state is delta-normalized (or zero) and has no finite norm."""


class GaugeSingularityError(PhotonError):
    """The beam gauge connection is singular at a requested sample."""


class ManifoldError(PhotonError):
    """The sample manifold lacks the derivative directions an operator needs."""


class NyquistError(PhotonError):
    """A position grid is too coarse for the wave vectors it must carry."""


class ZeroEnergyError(PhotonError):
    """A ratio was requested for a field with zero total energy."""


class StaticComponentError(PhotonError):
    """The field has a zero-frequency (mean) component where none is allowed."""


class CFLViolation(PhotonError):
    """The time step exceeds the Courant bound of the stepper."""


class NonFiniteStateError(RuntimeError):
    """A propagation produced NaN or Inf values."""

    def __init__(self, step: int, time: float):
        super().__init__(f"non-finite field at step {step} (t={time:.6g})")
        self.step = step
        self.time = time
