"""Exception types raised across the package."""


class MealyError(ValueError):
    """Base class for every error raised by mealylearn."""


class InvalidArgumentError(MealyError):
    """Unknown state or input symbol, or an argument outside its domain."""


class UnreachableStateError(MealyError):
    def __init__(self, states):
        self.states = sorted(states)
        super().__init__(f"states unreachable from the initial state: {self.states}")


class NotMinimalError(MealyError):
    def __init__(self, p, q):
        self.pair = (p, q)
        super().__init__(f"machine is not minimal: states {p!r} and {q!r} are indistinguishable")


class NonDeterminismError(MealyError):
    """Two observations disagree on the output after a shared input prefix."""

    def __init__(self, prefix, expected, observed, where=""):
        self.prefix = tuple(prefix)
        self.expected = expected
        self.observed = observed
        at = f" ({where})" if where else ""
        super().__init__(
            f"non-deterministic output after prefix {list(self.prefix)}{at}: "
            f"{expected!r} vs {observed!r}"
        )


class NotInputEnabledError(MealyError):
    def __init__(self, state, symbol):
        self.state = state
        self.symbol = symbol
        super().__init__(f"no transition defined for state {state!r} on input {symbol!r}")


class DotSyntaxError(MealyError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class InvalidCounterexampleError(MealyError):
    """The supplied counterexample does not separate hypothesis and system."""


class TableNotClosedError(MealyError):
    pass


class BudgetExceededError(MealyError):
    pass
