"""Mealy machines, traces and the structural queries the learners rely on.

A machine maps ``(state, input)`` to ``(target, output)``.  ``PartialMealy``
allows undefined pairs (the result of passive learning); ``MealyMachine``
enforces input-enabledness.  Symbols are opaque strings and sequences of them
are plain tuples.  Wherever an order is needed, inputs are sorted by name and
sequences are compared shortlex (length first, then lexicographically).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import (
    InvalidArgumentError,
    NonDeterminismError,
    NotInputEnabledError,
    NotMinimalError,
    UnreachableStateError,
)

SINK_OUTPUT = "⊥sink"
SINK_STATE = "⊥sink"

Word = tuple


def shortlex(word: Sequence) -> tuple:
    """Sort key for input sequences: shorter first, then lexicographic."""
    return (len(word), tuple(word))


@dataclass(frozen=True)
class Trace:
    """An input/output sequence of equal-length halves."""

    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if len(self.inputs) != len(self.outputs):
            raise InvalidArgumentError(
                f"trace halves differ in length: {len(self.inputs)} inputs, "
                f"{len(self.outputs)} outputs"
            )

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple]) -> "Trace":
        pairs = list(pairs)
        return cls(tuple(i for i, _ in pairs), tuple(o for _, o in pairs))

    @property
    def pairs(self) -> tuple:
        return tuple(zip(self.inputs, self.outputs))

    def __len__(self) -> int:
        return len(self.inputs)

    def __str__(self) -> str:
        return " ".join(f"{i}/{o}" for i, o in self.pairs)


class PartialMealy:
    """Deterministic Mealy machine whose transition map may be partial.

    ``transitions`` maps each state to ``{input: (target, output)}``.  States
    only mentioned as targets are added with no outgoing transitions.  The
    input alphabet defaults to every input used on some transition.
    """

    def __init__(
        self,
        transitions: Mapping[Hashable, Mapping[str, tuple]],
        initial: Hashable,
        inputs: Iterable[str] | None = None,
    ):
        delta: dict = {}
        for q, row in transitions.items():
            delta[q] = {i: (t, o) for i, (t, o) in row.items()}
        for row in list(delta.values()):
            for t, _ in row.values():
                delta.setdefault(t, {})
        if initial not in delta:
            raise InvalidArgumentError(f"initial state {initial!r} is not a state")
        used = {i for row in delta.values() for i in row}
        alphabet = set(used) if inputs is None else set(inputs)
        if not used <= alphabet:
            raise InvalidArgumentError(
                f"transitions use inputs outside the alphabet: {sorted(used - alphabet)}"
            )
        self._delta = delta
        self.initial = initial
        self.inputs = tuple(sorted(alphabet))
        self._input_set = frozenset(alphabet)
        self.states = tuple(delta)
        self.outputs = frozenset(o for row in delta.values() for _, o in row.values())

    @classmethod
    def from_edges(cls, initial, edges: Iterable[tuple], inputs=None, states=()):
        """Build from ``(source, input, output, target)`` tuples.

        Duplicate ``(source, input)`` keys are rejected.
        """
        transitions: dict = {q: {} for q in states}
        transitions.setdefault(initial, {})
        for src, i, o, dst in edges:
            row = transitions.setdefault(src, {})
            if i in row and row[i] != (dst, o):
                raise NonDeterminismError((i,), row[i], (dst, o))
            row[i] = (dst, o)
        return cls(transitions, initial, inputs)

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(states={len(self.states)}, "
            f"inputs={len(self.inputs)}, initial={self.initial!r})"
        )

    @property
    def is_complete(self) -> bool:
        n = len(self.inputs)
        return all(len(row) == n for row in self._delta.values())

    def transitions(self, q) -> Mapping[str, tuple]:
        if q not in self._delta:
            raise InvalidArgumentError(f"unknown state {q!r}")
        return MappingProxyType(self._delta[q])

    def edges(self) -> Iterator[tuple]:
        """Yield ``(source, input, output, target)`` in state then input order."""
        for q in self.states:
            row = self._delta[q]
            for i in sorted(row):
                t, o = row[i]
                yield q, i, o, t

    def step(self, q, i) -> tuple:
        row = self._delta.get(q)
        if row is None:
            raise InvalidArgumentError(f"unknown state {q!r}")
        try:
            return row[i]
        except KeyError:
            if i not in self._input_set:
                raise InvalidArgumentError(f"unknown input symbol {i!r}") from None
            raise NotInputEnabledError(q, i) from None

    def run(self, inputs: Sequence[str], state=None) -> tuple:
        """Output sequence produced from ``state`` (default: initial)."""
        q = self.initial if state is None else state
        out = []
        for i in inputs:
            q, o = self.step(q, i)
            out.append(o)
        return tuple(out)

    def reach(self, inputs: Sequence[str], state=None):
        q = self.initial if state is None else state
        for i in inputs:
            q = self.step(q, i)[0]
        return q

    def trace(self, inputs: Sequence[str]) -> Trace:
        return Trace(tuple(inputs), self.run(inputs))

    def reachable_states(self) -> set:
        seen = {self.initial}
        queue = deque([self.initial])
        while queue:
            q = queue.popleft()
            for t, _ in self._delta[q].values():
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return seen

    def relabel(self, mapping: Mapping) -> "PartialMealy":
        """Copy with states renamed through ``mapping``."""
        trans = {
            mapping[q]: {i: (mapping[t], o) for i, (t, o) in row.items()}
            for q, row in self._delta.items()
        }
        return type(self)(trans, mapping[self.initial], self.inputs)


class MealyMachine(PartialMealy):
    """Input-enabled deterministic Mealy machine."""

    def __init__(self, transitions, initial, inputs=None):
        super().__init__(transitions, initial, inputs)
        for q in self.states:
            row = self._delta[q]
            for i in self.inputs:
                if i not in row:
                    raise NotInputEnabledError(q, i)


def step(m: PartialMealy, q, i) -> tuple:
    return m.step(q, i)


def run(m: PartialMealy, inputs: Sequence[str]) -> tuple:
    return m.run(inputs)


def complete_with_sink(m: PartialMealy, sink_output: str = SINK_OUTPUT) -> MealyMachine:
    """Total version of ``m``: undefined inputs lead to an absorbing sink.

    The sink emits ``sink_output`` on every input, which must not be an output
    of ``m``.
    """
    if isinstance(m, MealyMachine):
        return m
    if m.is_complete:
        return MealyMachine({q: m.transitions(q) for q in m.states}, m.initial, m.inputs)
    if sink_output in m.outputs:
        raise InvalidArgumentError(f"sink output {sink_output!r} clashes with a model output")
    sink = SINK_STATE
    while sink in m.states:
        sink += "'"
    trans = {}
    for q in m.states:
        row = dict(m.transitions(q))
        for i in m.inputs:
            row.setdefault(i, (sink, sink_output))
        trans[q] = row
    trans[sink] = {i: (sink, sink_output) for i in m.inputs}
    return MealyMachine(trans, m.initial, m.inputs)


def access_sequences(m: PartialMealy) -> dict:
    """Shortlex-least input sequence reaching each state.

    Raises UnreachableStateError when some state cannot be reached.
    """
    access = {m.initial: ()}
    queue = deque([m.initial])
    while queue:
        q = queue.popleft()
        row = m.transitions(q)
        for i in sorted(row):
            t = row[i][0]
            if t not in access:
                access[t] = access[q] + (i,)
                queue.append(t)
    missing = set(m.states) - set(access)
    if missing:
        raise UnreachableStateError(missing)
    return access


def _pairwise_suffixes(m: PartialMealy) -> dict:
    """Shortest (then lexicographically least) separating suffix per state pair.

    Moore-style refinement: pairs separated at level k by some input followed
    by a level k-1 suffix.  Only meaningful for complete machines.
    """
    states = list(m.states)
    index = {q: n for n, q in enumerate(states)}
    inputs = m.inputs
    delta = {q: m.transitions(q) for q in states}

    def key(p, q):
        a, b = index[p], index[q]
        return (a, b) if a < b else (b, a)

    found: dict = {}
    for x in range(len(states)):
        for y in range(x + 1, len(states)):
            p, q = states[x], states[y]
            for i in inputs:
                if delta[p][i][1] != delta[q][i][1]:
                    found[(x, y)] = (i,)
                    break
    pending = [
        (x, y)
        for x in range(len(states))
        for y in range(x + 1, len(states))
        if (x, y) not in found
    ]
    while pending:
        level = {}
        for x, y in pending:
            p, q = states[x], states[y]
            for i in inputs:
                tp, tq = delta[p][i][0], delta[q][i][0]
                if tp == tq:
                    continue
                w = found.get(key(tp, tq))
                if w is not None:
                    level[(x, y)] = (i,) + w
                    break
        if not level:
            break
        found.update(level)
        pending = [pair for pair in pending if pair not in level]
    if pending:
        x, y = pending[0]
        raise NotMinimalError(states[x], states[y])
    return {(states[x], states[y]): w for (x, y), w in found.items()}


def distinguishes(m: PartialMealy, suffixes: Iterable[Sequence[str]]) -> bool:
    """True iff the output signatures under ``suffixes`` are pairwise distinct."""
    suffixes = list(suffixes)
    signatures = set()
    for q in m.states:
        sig = tuple(m.run(w, q) for w in suffixes)
        if sig in signatures:
            return False
        signatures.add(sig)
    return True


def characterization_set(m: PartialMealy) -> tuple:
    """Input sequences whose outputs jointly separate every pair of states.

    Suffixes come from pairwise refinement, then are pruned greedily (longest
    first, lexicographic tiebreak) while the set still separates all states.
    Returned in shortlex order.  Raises NotMinimalError naming an
    indistinguishable pair.
    """
    if not m.is_complete:
        m = complete_with_sink(m)
    w_set = set(_pairwise_suffixes(m).values())
    for w in sorted(w_set, key=lambda w: (-len(w), w)):
        rest = w_set - {w}
        if distinguishes(m, rest):
            w_set = rest
    return tuple(sorted(w_set, key=shortlex))


def is_minimal(m: PartialMealy) -> bool:
    try:
        _pairwise_suffixes(m if m.is_complete else complete_with_sink(m))
    except NotMinimalError:
        return False
    return True


class Verdict(NamedTuple):
    """Outcome of an equivalence check.

    ``witness`` is a shortest input sequence on which the machines differ, or
    None.  ``reason`` explains a negative verdict that has no witness.
    """

    equal: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.equal


def equivalence(m1: PartialMealy, m2: PartialMealy) -> Verdict:
    """Trace equivalence by breadth-first traversal of the product machine.

    Partial machines are sink-completed first.  Machines over different input
    alphabets are reported as unequal without a witness.
    """
    if m1.inputs != m2.inputs:
        return Verdict(False, None, f"alphabet mismatch: {m1.inputs} vs {m2.inputs}")
    a = complete_with_sink(m1)
    b = complete_with_sink(m2)
    start = (a.initial, b.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, q = pair
        for i in a.inputs:
            tp, op = a.step(p, i)
            tq, oq = b.step(q, i)
            if op != oq:
                word = [i]
                node = pair
                while parent[node] is not None:
                    node, sym = parent[node]
                    word.append(sym)
                return Verdict(False, tuple(reversed(word)), "outputs differ")
            nxt = (tp, tq)
            if nxt not in parent:
                parent[nxt] = (pair, i)
                queue.append(nxt)
    return Verdict(True)


def isomorphic(m1: PartialMealy, m2: PartialMealy) -> bool:
    """Structural isomorphism of the reachable parts, outputs included.

    Undefined transitions must coincide, so a partial machine is never
    isomorphic to a complete one.
    """
    if m1.inputs != m2.inputs:
        return False
    fwd = {m1.initial: m2.initial}
    bwd = {m2.initial: m1.initial}
    queue = deque([m1.initial])
    while queue:
        p = queue.popleft()
        q = fwd[p]
        r1, r2 = m1.transitions(p), m2.transitions(q)
        if r1.keys() != r2.keys():
            return False
        for i, (tp, op) in r1.items():
            tq, oq = r2[i]
            if op != oq:
                return False
            if tp in fwd:
                if fwd[tp] != tq:
                    return False
            elif tq in bwd:
                return False
            else:
                fwd[tp] = tq
                bwd[tq] = tp
                queue.append(tp)
    return True
