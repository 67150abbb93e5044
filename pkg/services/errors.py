"""Exceptions raised by the cloneforge services."""
from typing import Optional


class CloneforgeError(Exception):
    """Base class for all domain errors"""


class ElementParseError(CloneforgeError, ValueError):
    """Text could not be parsed into a forest, element or system name"""


class SystemMismatchError(CloneforgeError, ValueError):
    """Operands belong to different cloning systems or a name is unknown"""


class RankError(CloneforgeError, ValueError):
    """A forest does not fit the degree it is asked to act on"""


class UnsupportedOperationError(CloneforgeError, NotImplementedError):
    """An optional capability is not provided by a system"""


class BudgetExceededError(CloneforgeError, RuntimeError):
    """A computation would exceed its configured size budget"""

    def __init__(self, message: str, projected: Optional[int] = None, budget: Optional[int] = None):
        super().__init__(message)
        self.projected = projected
        self.budget = budget
