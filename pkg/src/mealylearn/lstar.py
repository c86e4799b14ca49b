"""L* for Mealy machines with Rivest-Schapire counterexample processing.

The observation table starts with ``S = {ε}`` and ``E = I``.  Counterexamples
never extend ``S``; each one contributes a single new suffix to ``E``, found
by binary search over the counterexample.  Rows of ``S`` therefore stay
pairwise distinct and no consistency check is needed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import (
    BudgetExceededError,
    InvalidCounterexampleError,
    MealyError,
    TableNotClosedError,
)
from .mealy import MealyMachine, PartialMealy, Trace, shortlex

log = logging.getLogger(__name__)


def _query_fn(sul) -> Callable[[tuple], tuple]:
    return sul.query if hasattr(sul, "query") else sul


class ObservationTable:
    """The ``<S, E, T>`` triple.

    ``T[s][e]`` holds the outputs produced by suffix ``e`` after prefix ``s``.
    """

    def __init__(self, inputs: Iterable[str], suffixes: Iterable[Sequence[str]] | None = None):
        self.inputs = tuple(sorted(inputs))
        self.S: list = [()]
        if suffixes is None:
            self.E: list = [(i,) for i in self.inputs]
        else:
            self.E = [tuple(e) for e in suffixes]
        self.T: dict = {}

    def extensions(self) -> list:
        """``S·I`` without the members of ``S``, in shortlex order."""
        in_s = set(self.S)
        ext = {s + (i,) for s in self.S for i in self.inputs}
        return sorted(ext - in_s, key=shortlex)

    def all_rows(self) -> list:
        return sorted(set(self.S) | set(self.extensions()), key=shortlex)

    def row(self, s) -> tuple:
        cells = self.T[s]
        return tuple(cells[e] for e in self.E)

    def fill(self, query) -> int:
        """Query every missing cell, one query per cell; returns the number asked."""
        query = _query_fn(query)
        asked = 0
        for s in self.all_rows():
            cells = self.T.setdefault(s, {})
            for e in self.E:
                if e not in cells:
                    out = query(s + e)
                    cells[e] = tuple(out[len(s):])
                    asked += 1
        return asked

    def is_filled(self) -> bool:
        return all(s in self.T and len(self.T[s]) >= len(self.E) for s in self.all_rows())

    def representatives(self) -> dict:
        """Row signature -> first element of ``S`` carrying it."""
        reps = {}
        for s in self.S:
            reps.setdefault(self.row(s), s)
        return reps

    def unclosed(self) -> list:
        reps = self.representatives()
        return [s for s in self.extensions() if self.row(s) not in reps]

    def is_closed(self) -> bool:
        return not self.unclosed()

    def promote(self, s) -> None:
        if s in self.S:
            return
        if s[:-1] not in self.S:
            raise MealyError(f"promoting {s} would break prefix-closedness of S")
        self.S.append(s)

    def add_suffix(self, e) -> None:
        e = tuple(e)
        if e in self.E:
            raise MealyError(f"suffix {e} already in E")
        self.E.append(e)

    def __str__(self) -> str:
        def fmt(word):
            return "·".join(word) if word else "ε"

        head = ["", *(fmt(e) for e in self.E)]
        lines = ["\t".join(head)]
        for s in self.S + ["--"] + self.extensions():
            if s == "--":
                lines.append("-" * 8)
                continue
            cells = self.T.get(s, {})
            lines.append("\t".join([fmt(s), *(fmt(cells.get(e, ("?",))) for e in self.E)]))
        return "\n".join(lines)


def make_closed(table: ObservationTable, sul) -> ObservationTable:
    """Promote unmatched ``S·I`` rows (shortlex first) until the table is closed."""
    table.fill(sul)
    while True:
        pending = table.unclosed()
        if not pending:
            return table
        table.promote(pending[0])
        table.fill(sul)


def _output_column(table: ObservationTable, i: str) -> int:
    try:
        return table.E.index((i,))
    except ValueError:
        pass
    for n, e in enumerate(table.E):
        if e and e[0] == i:
            return n
    raise MealyError(f"no column in E starts with input {i!r}")


def build_hypothesis(table: ObservationTable) -> MealyMachine:
    """Machine whose states are the distinct rows of ``S``.

    States are named ``s0, s1, ...`` in the order their representatives
    entered ``S``.
    """
    if not table.is_filled():
        raise TableNotClosedError("observation table has unfilled cells")
    if not table.is_closed():
        raise TableNotClosedError("observation table is not closed")
    reps = table.representatives()
    name = {row: f"s{k}" for k, row in enumerate(reps)}
    columns = {i: _output_column(table, i) for i in table.inputs}
    trans = {}
    for row, s in reps.items():
        cells = table.T[s]
        trans[name[row]] = {
            i: (name[table.row(s + (i,))], cells[table.E[columns[i]]][0])
            for i in table.inputs
        }
    return MealyMachine(trans, name[table.row(())], table.inputs)


def process_counterexample(
    table: ObservationTable, sul, hypothesis: PartialMealy, cex: Trace
) -> ObservationTable:
    """Add one distinguishing suffix of ``cex`` to ``E`` (Rivest-Schapire).

    ``cex`` carries the system's outputs.  Binary search finds a position
    ``i`` where swapping the prefix for its access sequence in ``S`` flips
    the verdict; ``cex.inputs[i + 1:]`` becomes the new column.
    """
    query = _query_fn(sul)
    x = tuple(cex.inputs)
    if hypothesis.run(x) == tuple(cex.outputs):
        raise InvalidCounterexampleError(
            f"hypothesis already produces {list(cex.outputs)} on {list(x)}"
        )
    access = {}
    for s in table.S:
        access.setdefault(hypothesis.reach(s), s)

    verdicts = {0: False, len(x): True}

    def agrees(i: int) -> bool:
        if i not in verdicts:
            q = hypothesis.reach(x[:i])
            prefix = access[q]
            out = tuple(query(prefix + x[i:]))[len(prefix):]
            verdicts[i] = out == hypothesis.run(x[i:], q)
        return verdicts[i]

    lo, hi = 0, len(x)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if agrees(mid):
            hi = mid
        else:
            lo = mid
    suffix = x[lo + 1:]
    if not suffix or suffix in table.E:
        # fall back to any other flip point that yields a fresh suffix
        suffix = None
        for i in range(len(x) - 1):
            if not agrees(i) and agrees(i + 1):
                candidate = x[i + 1:]
                if candidate and candidate not in table.E:
                    suffix = candidate
                    break
        if suffix is None:
            raise InvalidCounterexampleError(f"no new distinguishing suffix in {list(x)}")
    table.add_suffix(suffix)
    table.fill(sul)
    return table


@dataclass
class LearningStats:
    """Per-run accounting.

    Counts are of queries posed by the learner; with a cache, SUL-side counts
    live in the session's ``QueryStats``.  ``all_traces`` keeps every posed
    query, conformance tests included, once each in first-seen order.
    """

    rounds: int = 0
    output_queries: int = 0
    output_query_steps: int = 0
    conformance_tests: int = 0
    conformance_test_steps: int = 0
    all_traces: dict = field(default_factory=dict, repr=False)
    final_s: int = 0
    final_e: int = 0

    @property
    def sum_queries(self) -> int:
        return self.output_queries + self.conformance_tests

    @property
    def sum_steps(self) -> int:
        return self.output_query_steps + self.conformance_test_steps

    @property
    def traces(self) -> list:
        return list(self.all_traces)

    @property
    def sample_size(self) -> int:
        """Size of the deduplicated trace set."""
        return len(self.all_traces)

    @property
    def mean_length(self) -> float:
        if not self.all_traces:
            return 0.0
        return sum(len(t) for t in self.all_traces) / len(self.all_traces)


def learn_lstar(
    sul,
    alphabet: Iterable[str] | None = None,
    oracle=None,
    max_rounds: int = 200,
):
    """Learn a Mealy machine from ``sul``.

    ``oracle(hypothesis, query)`` returns a counterexample Trace or None;
    the default is the state-coverage oracle with 25 walks of 30 steps.
    Returns ``(hypothesis, LearningStats)``.
    """
    from .conformance import StateCoverageOracle

    inputs = tuple(sorted(alphabet if alphabet is not None else sul.inputs))
    if hasattr(sul, "inputs") and set(inputs) != set(sul.inputs):
        raise MealyError(f"alphabet {inputs} differs from the system's {tuple(sul.inputs)}")
    if oracle is None:
        oracle = StateCoverageOracle()
    raw = _query_fn(sul)
    stats = LearningStats()

    def output_query(inputs):
        inputs = tuple(inputs)
        out = tuple(raw(inputs))
        stats.output_queries += 1
        stats.output_query_steps += len(inputs)
        stats.all_traces.setdefault(Trace(inputs, out), None)
        return out

    def test_query(inputs):
        inputs = tuple(inputs)
        out = tuple(raw(inputs))
        stats.conformance_tests += 1
        stats.conformance_test_steps += len(inputs)
        stats.all_traces.setdefault(Trace(inputs, out), None)
        return out

    table = ObservationTable(inputs)
    while True:
        make_closed(table, output_query)
        hypothesis = build_hypothesis(table)
        stats.rounds += 1
        log.debug("round %d: hypothesis with %d states", stats.rounds, len(hypothesis))
        cex = oracle(hypothesis, test_query)
        if cex is None:
            break
        if stats.rounds >= max_rounds:
            raise BudgetExceededError(f"no conforming hypothesis after {max_rounds} rounds")
        process_counterexample(table, output_query, hypothesis, cex)
    stats.final_s = len(table.S)
    stats.final_e = len(table.E)
    return hypothesis, stats
