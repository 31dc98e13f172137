"""Exception types shared across the library."""


class EnsembleForgeError(Exception):
    """Base class for all library errors."""


class DimensionError(EnsembleForgeError):
    """Matrix or partition sizes are inconsistent with the operation."""


class DomainError(EnsembleForgeError):
    """Parameters violate a domain constraint (e.g. p < q for Laguerre)."""


class SingularMatrixError(EnsembleForgeError):
    """Rank deficiency detected where full rank is required."""


class SymmetryError(EnsembleForgeError):
    """Input is not Hermitian/symmetric to the required tolerance."""


class UnitarityError(EnsembleForgeError):
    """Input is not unitary/orthogonal to the required tolerance."""


class DegeneracyError(EnsembleForgeError):
    """Eigenvalue clustering or pairing failed at the degeneracy threshold."""


class PathError(EnsembleForgeError):
    """Requested sampler path is invalid for the given beta/family."""


class ModeError(EnsembleForgeError):
    """Requested Jacobian mode is incompatible with the root data."""


class ChamberError(EnsembleForgeError):
    """Torus element lies outside the declared maximal abelian subspace."""


class InvolutionError(EnsembleForgeError):
    """Involution pair fails to commute or square to the identity."""


class IdentificationError(EnsembleForgeError):
    """Numerical root-coefficient fit did not resolve to integers."""


class ContractError(EnsembleForgeError):
    """Caller violated an input contract (e.g. unsorted samples)."""


class UnsupportedSpaceError(EnsembleForgeError):
    """The symmetric-space type has no classical-parameter mapping."""
