"""A Mealy machine wrapped as a black-box system under learning."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .errors import InvalidArgumentError, MealyError
from .mealy import MealyMachine, Trace
from .pta import Pta


@dataclass
class QueryStats:
    queries: int = 0
    steps: int = 0
    cache_hits: int = 0

    def snapshot(self) -> "QueryStats":
        return replace(self)

    def __sub__(self, other: "QueryStats") -> "QueryStats":
        return QueryStats(
            self.queries - other.queries,
            self.steps - other.steps,
            self.cache_hits - other.cache_hits,
        )


class SulSession:
    """Query interface to a hidden model.

    Every query starts from a reset.  A query that touches the model costs one
    query plus one step per input symbol.  With ``cache=True`` queries go
    through a prefix tree first and only full matches are answered from it.
    """

    def __init__(self, model: MealyMachine, cache: bool = False):
        self._model = model
        self._alphabet = frozenset(model.inputs)
        self.inputs = model.inputs
        self.stats = QueryStats()
        self.cache: Pta | None = Pta() if cache else None

    def __repr__(self) -> str:
        return f"SulSession(inputs={len(self.inputs)}, stats={self.stats})"

    def _check(self, inputs) -> tuple:
        inputs = tuple(inputs)
        for i in inputs:
            if i not in self._alphabet:
                raise InvalidArgumentError(f"unknown input symbol {i!r}")
        return inputs

    def output_query(self, inputs: Iterable[str]) -> tuple:
        inputs = self._check(inputs)
        self.stats.queries += 1
        self.stats.steps += len(inputs)
        return self._model.run(inputs)

    def cached_query(self, inputs: Iterable[str]) -> tuple:
        if self.cache is None:
            raise MealyError("cache is not enabled for this session")
        inputs = self._check(inputs)
        stored = self.cache.lookup(inputs)
        if stored is not None:
            self.stats.cache_hits += 1
            return stored
        outputs = self.output_query(inputs)
        self.cache.add(Trace(inputs, outputs))
        return outputs

    def query(self, inputs: Iterable[str]) -> tuple:
        """Cached query when the cache is enabled, plain output query otherwise."""
        if self.cache is not None:
            return self.cached_query(inputs)
        return self.output_query(inputs)

    def prime_cache(self, traces: Iterable[Trace]) -> int:
        """Load pre-recorded traces into the cache; returns its node count.

        Enables the cache if needed.  Counters are not touched.
        """
        if self.cache is None:
            self.cache = Pta()
        for t in getattr(traces, "traces", traces):
            self.cache.add(t)
        return len(self.cache)
