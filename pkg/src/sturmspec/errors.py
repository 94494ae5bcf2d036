"""Exception hierarchy for the toolkit."""


class SturmspecError(Exception):
    """Base class for all toolkit errors."""


class SchemaViolationError(SturmspecError):
    """A document does not match its schema; carries the offending field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"field '{field}': {message}")


class AdmissibilityError(SturmspecError):
    """A perturbation sequence violates 1 + c_n * a_n > 0; carries the index."""

    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(
            f"inadmissible coefficient at index {index}: 1 + c_n*a_n = {value:.6g} <= 0")


class CoverageError(SturmspecError):
    """A spectrum table is missing an index required by the caller."""


class PreconditionError(SturmspecError):
    """An argument violates an operation's precondition (for example, a value
    passed as an eigenvalue is not one)."""


class IntegrationOverflowError(SturmspecError):
    """State blew up during integration (very negative spectral parameter on a
    coarse grid); refine the grid or restrict the spectral window."""


class SearchFailureError(SturmspecError):
    """Eigenvalue bracketing failed after bounded window expansion."""

    def __init__(self, index, message):
        self.index = index
        super().__init__(f"eigenvalue index {index}: {message}")


class EigenvalueConsistencyError(SturmspecError):
    """A cross-check between left- and right-normalized eigenfunctions failed,
    usually a sign that the eigenvalue tolerance is too loose."""


class SolvabilityError(SturmspecError):
    """A collocation system was singular; should not happen for admissible input."""


class GridMismatchError(SturmspecError):
    """Two objects that must share a grid do not."""


class HypothesisError(SturmspecError):
    """A certificate's hypothesis is violated by the supplied operators."""
