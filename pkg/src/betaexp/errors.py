"""Exception hierarchy for the betaexp package.

Two broad families matter to callers (and to the CLI exit-code contract):
``DomainError`` subclasses mean the request itself was invalid, while
``ResolutionError`` subclasses mean the answer could not be certified within
the configured precision / horizon / budget.
"""


class BetaExpError(Exception):
    """Base class for all betaexp errors."""


class DomainError(BetaExpError):
    """Invalid input: violates a documented precondition."""


class ResolutionError(BetaExpError):
    """Could not certify a result within precision/horizon limits."""


# -- construction / parsing ------------------------------------------------

class ParseError(DomainError):
    """Malformed polynomial, decimal, word, or expression input."""


class NoRootInIntervalError(DomainError):
    """Polynomial has no root (or several roots) in the given interval."""


class RootOutsideUnitRangeError(DomainError):
    """The base must lie strictly inside (1, 2)."""


class MixedBaseError(DomainError):
    """Arithmetic attempted between values attached to different bases."""


# -- domain violations -----------------------------------------------------

class OutOfDomainError(DomainError):
    """Argument outside the interval the operation is defined on."""


class ValueExceedsOneError(DomainError):
    """Normalization requires the word value to be at most 1."""


class NotAdmissibleError(DomainError):
    """A word required to be admissible is not."""


class BackendUnsupportedError(DomainError):
    """Operation requires the exact algebraic backend."""


class LengthCapExceededError(DomainError):
    """Word length beyond the configured cap for exhaustive search."""


class NotFinitaryError(DomainError):
    """Normalization of a needed word did not terminate finitely."""


# -- precision / horizon / budget -------------------------------------------

class UndecidedError(ResolutionError):
    """A sign decision straddled zero at maximum working precision."""


class UndeterminedWithinHorizonError(ResolutionError):
    """Comparison or detection not settled within the configured horizon."""


class QuasiGreedyUnavailableError(ResolutionError):
    """Exact quasi-greedy expansion of 1 not available as required."""


class HorizonExhaustedError(ResolutionError):
    """No admissible increment found within the digit horizon."""


class OccurrenceNotFoundError(ResolutionError):
    """Cover word never occurred within the scan horizon."""

    def __init__(self, message, target=None, scanned=None):
        super().__init__(message)
        self.target = target
        self.scanned = scanned


class PrecisionCapExceededError(ResolutionError):
    """Requested precision beyond the configured cap."""


class NodeBudgetExceededError(ResolutionError):
    """Tree expansion hit the node budget."""


class BudgetExhaustedError(ResolutionError):
    """Digit budget ran out; partial result attached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
