"""RPNI state merging for Mealy machines.

Starts from the prefix tree of the training traces.  Red states are kept;
blue states (children of red states that are not red) are visited in shortlex
order of their access words and folded into the first compatible red state,
tried in promotion order.  A fold is compatible when no pair of identified
states disagrees on the output of a shared input.  A blue state compatible
with no red state is promoted.
"""
from __future__ import annotations

import heapq
from copy import deepcopy
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvalidArgumentError
from .mealy import PartialMealy, Trace
from .pta import Pta

_MISSING = object()


def build_pta(traces: Iterable[Trace]) -> Pta:
    """Prefix tree of ``traces``; conflicting outputs raise NonDeterminismError."""
    return Pta(getattr(traces, "traces", traces))


@dataclass
class MergeStep:
    blue: tuple
    red: tuple
    accepted: bool


class MergeAutomaton:
    """Mutable automaton derived from a prefix tree, with red/blue colouring.

    Node ids are those of the tree.  ``trans[node]`` maps an input to
    ``(target, output)``.  Red nodes keep the tree words that reach them.
    """

    def __init__(self, pta: Pta):
        self.trans = [dict(row) for row in pta.children]
        self.red = [0]
        self._red_set = {0}
        self.access = {0: ()}
        self.inputs = sorted({i for row in pta.children for i in row})

    def copy(self) -> "MergeAutomaton":
        return deepcopy(self)

    def blue_states(self) -> list:
        """``(node, parent, input)`` for every blue node, shortlex by access word."""
        blue = []
        for r in self.red:
            for i, (c, _) in self.trans[r].items():
                if c not in self._red_set:
                    blue.append((self.access[r] + (i,), c, r, i))
        blue.sort(key=lambda b: (len(b[0]), b[0]))
        return [(c, r, i) for _, c, r, i in blue]

    def word(self, node) -> tuple:
        if node in self.access:
            return self.access[node]
        for c, r, i in self.blue_states():
            if c == node:
                return self.access[r] + (i,)
        raise InvalidArgumentError(f"node {node} is neither red nor blue")

    def promote(self, node, parent, via) -> None:
        self.red.append(node)
        self._red_set.add(node)
        self.access[node] = self.access[parent] + (via,)

    def try_merge(self, red, blue) -> bool:
        """Fold ``blue`` into ``red`` in place; on conflict leave everything unchanged."""
        if red not in self._red_set:
            raise InvalidArgumentError(f"node {red} is not red")
        for c, r, i in self.blue_states():
            if c == blue:
                return self._merge(red, blue, r, i) is not None
        raise InvalidArgumentError(f"node {blue} is not blue")

    def _merge(self, red, blue, parent, via):
        """Returns the list of new red-to-non-red edges on success, else None."""
        trans = self.trans
        red_set = self._red_set
        undo = []
        grafted = []

        def set_edge(node, a, value):
            undo.append((node, a, trans[node].get(a, _MISSING)))
            trans[node][a] = value

        set_edge(parent, via, (red, trans[parent][via][1]))
        stack = [(red, blue)]
        while stack:
            t, s = stack.pop()
            target_row = trans[t]
            for a, (sc, so) in trans[s].items():
                edge = target_row.get(a)
                if edge is None:
                    set_edge(t, a, (sc, so))
                    if t in red_set:
                        grafted.append((t, a, sc))
                elif edge[1] != so:
                    for node, key, old in reversed(undo):
                        if old is _MISSING:
                            del trans[node][key]
                        else:
                            trans[node][key] = old
                    return None
                else:
                    stack.append((edge[0], sc))
        return grafted

    def to_machine(self, inputs: Iterable[str] | None = None) -> PartialMealy:
        """Red part as a machine with states ``q0, q1, ...`` in promotion order."""
        name = {r: f"q{k}" for k, r in enumerate(self.red)}
        trans = {}
        for r in self.red:
            row = {}
            for i, (c, o) in self.trans[r].items():
                if c in name:
                    row[i] = (name[c], o)
            trans[name[r]] = row
        alphabet = set(self.inputs) if inputs is None else set(inputs)
        return PartialMealy(trans, "q0", alphabet)


def try_merge(automaton: MergeAutomaton, red, blue) -> MergeAutomaton | None:
    """Functional fold: the merged copy, or None if incompatible."""
    merged = automaton.copy()
    return merged if merged.try_merge(red, blue) else None


@dataclass
class RpniResult:
    model: PartialMealy
    pta_size: int
    steps: list = field(default_factory=list)


def run_rpni(pta: Pta, inputs: Iterable[str] | None = None, record: bool = False) -> RpniResult:
    """Red-blue merging over ``pta``.  With ``record`` every merge attempt is logged."""
    aut = MergeAutomaton(pta)
    steps = []
    heap = []

    def push(parent, via, node):
        word = aut.access[parent] + (via,)
        heapq.heappush(heap, (len(word), word, node, parent))

    for i, (c, _) in aut.trans[0].items():
        push(0, i, c)
    while heap:
        _, word, node, parent = heapq.heappop(heap)
        via = word[-1]
        edge = aut.trans[parent].get(via)
        if edge is None or edge[0] != node or node in aut._red_set:
            continue
        for r in aut.red:
            grafted = aut._merge(r, node, parent, via)
            if record:
                steps.append(MergeStep(word, aut.access[r], grafted is not None))
            if grafted is not None:
                for t, a, c in grafted:
                    push(t, a, c)
                break
        else:
            aut.promote(node, parent, via)
            for i, (c, _) in aut.trans[node].items():
                if c not in aut._red_set:
                    push(node, i, c)
    return RpniResult(aut.to_machine(inputs), len(pta), steps)


def rpni(traces: Iterable[Trace], inputs: Iterable[str] | None = None) -> PartialMealy:
    """Learn a (possibly partial) Mealy machine from positive traces."""
    return run_rpni(build_pta(traces), inputs).model
