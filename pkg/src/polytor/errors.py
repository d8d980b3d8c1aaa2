"""Exception hierarchy shared by every polytor module."""


class PolytorError(Exception):
    """Base class for all structured errors raised by polytor."""


class DomainError(PolytorError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DimensionMismatch(PolytorError, ValueError):
    def __init__(self, expected: int, got: int, what: str = "vector"):
        self.expected = expected
        self.got = got
        super().__init__(f"{what} has length {got}, expected {expected}")


class FactorizationError(PolytorError, ValueError):
    """An integer has a prime factor outside the configured prime table."""

    def __init__(self, n: int, prime: int, n_primes: int):
        self.n = n
        self.prime = prime
        self.n_primes = n_primes
        super().__init__(
            f"{n} has prime factor {prime}, which is not among the first {n_primes} primes"
        )


class NotTetrahedral(PolytorError, ValueError):
    pass


class NotHomogeneous(PolytorError, ValueError):
    pass


class BudgetExceeded(PolytorError, RuntimeError):
    """A deterministic enumeration would exceed its evaluation budget.

    ``fallback`` names the estimator to use instead.
    """

    def __init__(self, needed: int, budget: int, fallback: str):
        self.needed = needed
        self.budget = budget
        self.fallback = fallback
        super().__init__(
            f"{needed} evaluations exceed the budget of {budget}; use {fallback} instead"
        )


class ConfigError(PolytorError, ValueError):
    pass
