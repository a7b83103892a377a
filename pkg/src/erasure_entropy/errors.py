"""Exception hierarchy shared by all modules."""


class ErasureEntropyError(Exception):
    """Base class for all library errors."""


class ValidationError(ErasureEntropyError):
    """Invalid probability table, chain, lattice, or argument."""


class StructureError(ValidationError):
    """Markov chain is reducible or periodic; message names the classes."""


class BudgetError(ErasureEntropyError):
    """Requested exact computation exceeds the enumeration budget."""


class NearCriticalError(ErasureEntropyError):
    """Pressure integrand touches its singularity (second-order transition point)."""


class ConvergenceError(ErasureEntropyError):
    """Iterative scheme failed to reach its target residual."""


class InconsistentInputError(ErasureEntropyError):
    """User-supplied correlations are not realizable by any symmetric measure."""


class MixingFailureError(ErasureEntropyError):
    """Hot- and cold-start chains disagree beyond the acceptance threshold."""
