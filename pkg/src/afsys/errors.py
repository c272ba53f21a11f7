"""Shared exception types and the global enumeration budget default."""

DEFAULT_BUDGET = 10**6


class AfsysError(Exception):
    """Base class for all structured errors raised by this package."""


class SignatureMismatchError(AfsysError):
    """An algebra lacks a symbol required by an operation or profile."""

    def __init__(self, symbol: str, context: str = ""):
        self.symbol = symbol
        msg = f"missing operation symbol {symbol!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class MalformedMapError(AfsysError):
    """A mapping is not total or hits indices outside the target carrier."""


class BudgetExceededError(AfsysError):
    """An enumeration would exceed the configured candidate budget."""

    def __init__(self, needed: int, budget: int, what: str = "enumeration"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} candidates, budget is {budget}")


class VacuousFamilyError(AfsysError):
    """A universal-property check was invoked with an empty test family."""


class DirectionalityError(AfsysError):
    """Comorphism-direction data was supplied where a morphism is expected."""
