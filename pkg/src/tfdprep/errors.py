"""Exception hierarchy shared by all toolkit modules."""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMatrix(ToolkitError):
    """Input matrix is not square / not Hermitian within tolerance."""


class GateTooLarge(ToolkitError):
    """Matrix exponential requested for a block larger than a few sites."""


class EmptyLattice(ToolkitError):
    """A model builder was asked for a lattice with no sites."""


class InvalidBodySize(ToolkitError):
    """Disorder model with q > n or odd q."""


class InvalidCoupling(ToolkitError):
    """Coupling operator is not a Hermitian sum on a single copy."""


class TooLarge(ToolkitError):
    """Dense representation requested above the supported dimension."""


class AntiunitaryMismatch(ToolkitError):
    """Hamiltonian is not real in the computational basis (conjugation map)."""


class NoConvergence(ToolkitError):
    """Iterative eigensolver failed to converge; message carries residual."""


class InvalidGrid(ToolkitError):
    """Empty or non-monotone parameter grid."""


class PoleError(ToolkitError):
    """Resolvent evaluated at (or too close to) an eigenvalue."""


class BelowCritical(ToolkitError):
    """Continuum random-matrix solution requested below the critical coupling."""


class SpanOverflow(ToolkitError):
    """Operator term spans too many chain sites for the exact MPO route."""


class Incompatible(ToolkitError):
    """Operands have mismatched lengths / dimensions / orderings."""


class InvalidSchedule(ToolkitError):
    """Trotter schedule with non-integral step count or invalid ramp."""


class FitError(ToolkitError):
    """Degenerate data passed to a fitting routine."""


class ConfigError(ToolkitError):
    """Malformed experiment configuration."""
