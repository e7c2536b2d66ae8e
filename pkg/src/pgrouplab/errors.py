"""Exception types shared across modules."""


class PropertyViolation(AssertionError):
    """A mathematical property that must hold was observed to fail."""


class SearchInconclusive(RuntimeError):
    """A bounded search ran out of budget before reaching a decision."""


class SplitPreconditionError(ValueError):
    """Inputs to the height-splitting construction violate its preconditions."""


class UlmTooSmall(SplitPreconditionError):
    def __init__(self, level: int, invariant: int):
        self.level = level
        self.invariant = invariant
        super().__init__(f"Ulm factor at level n={level} is too small (invariant {invariant})")
