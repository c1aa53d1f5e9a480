"""Exception types shared across the toolkit."""


class CapExceededError(Exception):
    """An input is larger than the configured enumeration cap."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


class BudgetExceededError(Exception):
    """A search exceeded its step budget."""

    def __init__(self, message: str, budget: int):
        super().__init__(message)
        self.budget = budget


class NotBetaAcyclicError(Exception):
    """Raised by operations that require a beta-acyclic input.

    `certificate` is the vertex set at which nest-point elimination got stuck.
    """

    def __init__(self, message: str, certificate=frozenset()):
        super().__init__(message)
        self.certificate = frozenset(certificate)


class DimacsParseError(ValueError):
    """Malformed DIMACS CNF input."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NnfParseError(ValueError):
    """Malformed NNF circuit file."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CircuitPropertyError(Exception):
    """A circuit operation was refused because a required structural
    property (decomposability, decision gates) does not hold."""
