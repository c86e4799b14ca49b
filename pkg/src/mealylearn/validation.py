"""Argument checks shared by the estimators and the CLI."""
from __future__ import annotations

from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .errors import InvalidArgumentError
from .mealy import MealyMachine, PartialMealy, Trace

__all__ = ["check_is_fitted", "NotFittedError", "check_words", "check_traces", "check_alphabet",
           "check_system", "check_positive_int"]


def _as_word(w, where) -> tuple:
    if isinstance(w, str):
        # a bare string would silently become a word of characters
        raise InvalidArgumentError(f"{where}: expected a sequence of symbols, got the string {w!r}")
    try:
        word = tuple(w)
    except TypeError:
        raise InvalidArgumentError(f"{where}: expected a sequence of symbols, got {type(w).__name__}")
    for sym in word:
        if not isinstance(sym, str):
            raise InvalidArgumentError(f"{where}: symbol {sym!r} is not a string")
    return word


def check_words(X) -> list:
    """Input sequences as a list of tuples of strings."""
    if X is None:
        raise InvalidArgumentError("expected a collection of input sequences, got None")
    return [_as_word(w, f"sequence {n}") for n, w in enumerate(X)]


def check_traces(X, y=None) -> list:
    """Training data as Traces.

    Either ``X`` holds Trace objects (and ``y`` is None) or ``X`` holds input
    sequences and ``y`` the matching output sequences.
    """
    if X is None:
        raise InvalidArgumentError("no training data")
    X = list(X)
    if y is None:
        if not all(isinstance(t, Trace) for t in X):
            raise InvalidArgumentError("without y, X must contain Trace objects")
        return X
    y = list(y)
    if len(X) != len(y):
        raise InvalidArgumentError(f"X has {len(X)} sequences but y has {len(y)}")
    words = check_words(X)
    outs = [_as_word(o, f"output {n}") for n, o in enumerate(y)]
    return [Trace(w, o) for w, o in zip(words, outs)]


def check_alphabet(inputs, words=()) -> tuple | None:
    """Sorted alphabet; every symbol of ``words`` must belong to it."""
    if inputs is None:
        return None
    if isinstance(inputs, str):
        raise InvalidArgumentError("alphabet must be a collection of symbols, not a string")
    alphabet = tuple(sorted(set(inputs)))
    if not alphabet:
        raise InvalidArgumentError("empty alphabet")
    known = set(alphabet)
    for w in words:
        bad = set(w) - known
        if bad:
            raise InvalidArgumentError(f"symbols outside the alphabet: {sorted(bad)}")
    return alphabet


def check_system(X):
    """A MealyMachine or anything with ``inputs`` and ``output_query``."""
    if isinstance(X, MealyMachine) or (hasattr(X, "inputs") and hasattr(X, "output_query")):
        return X
    if isinstance(X, PartialMealy):
        raise InvalidArgumentError("the system must be input-enabled; got a partial machine")
    raise InvalidArgumentError(f"expected a MealyMachine or a query session, got {type(X).__name__}")


def check_positive_int(value, name) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")
    return value
