"""Prefix tree of input/output traces.

Nodes are integers, ``0`` is the root.  Each node stores
``{input: (child, output)}``.  The tree backs both the query cache of a
simulated system and the starting automaton of state merging.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable

from .errors import NonDeterminismError
from .mealy import PartialMealy, Trace, shortlex


class Pta:
    def __init__(self, traces: Iterable[Trace] = ()):
        self.children: list[dict] = [{}]
        self.parent: list[int] = [-1]
        self.via: list = [None]
        for t in traces:
            self.add(t)

    def __len__(self) -> int:
        return len(self.children)

    @property
    def root(self) -> int:
        return 0

    def add(self, trace: Trace) -> int:
        """Insert a trace; returns the node reached.

        Raises NonDeterminismError if the trace disagrees with a stored
        output on a shared input prefix.  The tree is left unchanged in that
        case.
        """
        node = 0
        pairs = list(zip(trace.inputs, trace.outputs))
        # validate first so a rejected trace leaves no partial branch
        for n, (i, o) in enumerate(pairs):
            edge = self.children[node].get(i)
            if edge is None:
                break
            if edge[1] != o:
                raise NonDeterminismError(trace.inputs[: n + 1], edge[1], o)
            node = edge[0]
        node = 0
        for i, o in pairs:
            edge = self.children[node].get(i)
            if edge is None:
                child = len(self.children)
                self.children.append({})
                self.parent.append(node)
                self.via.append(i)
                self.children[node][i] = (child, o)
                node = child
            else:
                node = edge[0]
        return node

    def lookup(self, inputs) -> tuple | None:
        """Stored outputs if ``inputs`` labels a root path, else None."""
        node = 0
        out = []
        for i in inputs:
            edge = self.children[node].get(i)
            if edge is None:
                return None
            node, o = edge
            out.append(o)
        return tuple(out)

    def node_at(self, inputs) -> int | None:
        node = 0
        for i in inputs:
            edge = self.children[node].get(i)
            if edge is None:
                return None
            node = edge[0]
        return node

    def word(self, node: int) -> tuple:
        """Input sequence labelling the path from the root to ``node``."""
        word = []
        while node > 0:
            word.append(self.via[node])
            node = self.parent[node]
        return tuple(reversed(word))

    def nodes_shortlex(self) -> list:
        """All nodes ordered by the shortlex order of their access words."""
        order = []
        queue = deque([0])
        while queue:
            node = queue.popleft()
            order.append(node)
            row = self.children[node]
            for i in sorted(row):
                queue.append(row[i][0])
        return order

    def leaves(self) -> list:
        return [n for n in range(len(self.children)) if not self.children[n]]

    def traces(self) -> list:
        """One trace per leaf, in shortlex order of the leaf words."""
        out = []
        for node in self.leaves():
            word = self.word(node)
            out.append(Trace(word, self.lookup(word)))
        return sorted(out, key=lambda t: shortlex(t.inputs))

    def to_machine(self) -> PartialMealy:
        """The tree as a partial machine with states ``q0, q1, ...`` in shortlex order."""
        order = self.nodes_shortlex()
        name = {n: f"q{k}" for k, n in enumerate(order)}
        trans = {
            name[n]: {i: (name[c], o) for i, (c, o) in self.children[n].items()}
            for n in order
        }
        inputs = {i for row in self.children for i in row}
        return PartialMealy(trans, "q0", inputs)
