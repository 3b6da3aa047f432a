"""Exception types raised by wignerpos."""


class WignerPosError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionError(WignerPosError):
    """Matrix or vector has the wrong shape, or operands disagree in size."""


class ContractError(WignerPosError):
    """An input violates the structural contract of an operation.

    Examples are a non-Hermitian matrix passed to an eigensolver or a
    non-orthonormal basis passed to a projector.
    """


class DomainError(WignerPosError):
    """Parameters fall outside the set of physical states (e.g. not PSD)."""


class PreconditionError(WignerPosError):
    """A mathematical precondition of an operation does not hold.

    Raised for instance when a reference state used to build boundary
    states is not strictly Wigner-positive.
    """
