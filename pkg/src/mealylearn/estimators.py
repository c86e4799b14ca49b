"""scikit-learn style wrappers around the functional learners.

Both estimators expose ``fit``/``predict``/``score`` and the usual
``get_params``/``set_params``.  A sample is an input sequence and its target
is the output sequence; ``predict`` runs the learned model with sink
completion, so unseen transitions yield the reserved sink output.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator

from .conformance import StateCoverageOracle, run_with_sink
from .lstar import learn_lstar
from .rpni import rpni
from .sul import SulSession
from .validation import (
    check_alphabet,
    check_is_fitted,
    check_positive_int,
    check_system,
    check_traces,
    check_words,
)


class _MealyPredictor:
    def predict(self, X) -> list:
        check_is_fitted(self, "model_")
        return [run_with_sink(self.model_, w) for w in check_words(X)]

    def score(self, X, y=None) -> float:
        """Fraction of sequences whose whole output is reproduced."""
        traces = check_traces(X, y)
        if not traces:
            return 0.0
        hits = sum(1 for t in traces if self.predict([t.inputs])[0] == t.outputs)
        return hits / len(traces)


class RPNIMealyLearner(_MealyPredictor, BaseEstimator):
    """Passive learner.  ``inputs`` fixes the alphabet; by default it is read off the data."""

    def __init__(self, inputs=None):
        self.inputs = inputs

    def fit(self, X, y=None):
        traces = check_traces(X, y)
        alphabet = check_alphabet(self.inputs, (t.inputs for t in traces))
        self.model_ = rpni(traces, alphabet)
        self.inputs_ = tuple(self.model_.inputs)
        self.n_states_ = len(self.model_)
        return self


class LStarMealyLearner(_MealyPredictor, BaseEstimator):
    """Active learner.  ``fit`` takes the system itself (a machine or a query session)."""

    def __init__(self, n_walks=25, n_step=30, random_state=0, max_rounds=200, cache=False):
        self.n_walks = n_walks
        self.n_step = n_step
        self.random_state = random_state
        self.max_rounds = max_rounds
        self.cache = cache

    def fit(self, X, y=None):
        system = check_system(X)
        check_positive_int(self.n_walks, "n_walks")
        check_positive_int(self.n_step, "n_step")
        check_positive_int(self.max_rounds, "max_rounds")
        sul = system if hasattr(system, "output_query") else SulSession(system, cache=self.cache)
        oracle = StateCoverageOracle(self.n_walks, self.n_step, self.random_state)
        self.model_, self.stats_ = learn_lstar(sul, oracle=oracle, max_rounds=self.max_rounds)
        self.inputs_ = tuple(self.model_.inputs)
        self.n_states_ = len(self.model_)
        return self
