"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: malformed input -> 1, exhausted
search budgets -> 2, reduction construction failures -> 3 (experiment
verdict failures use exit 4 without an exception).
"""


class VotelabError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(VotelabError, ValueError):
    """Operands live over different alternative sets."""


class BudgetExceededError(VotelabError, RuntimeError):
    """An exact solver refused to run past its configured search budget."""


class ConstructionError(VotelabError, ValueError):
    """A reduction construction cannot be completed for this input."""
