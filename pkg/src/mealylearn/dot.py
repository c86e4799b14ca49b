"""Reading and writing Mealy machines in the Graphviz DOT dialect.

Layout::

    digraph g {
        __start0 [label="" shape="none"];
        s0 [shape="circle" label="s0"];
        s0 -> s1 [label="connect/CONNACK"];
        __start0 -> s0;
    }

Edge labels are ``input/output`` split at the first ``/``.  Node attribute
lines are optional; every state appearing on an edge is a state.
"""
from __future__ import annotations

import re
from pathlib import Path

from .errors import DotSyntaxError, MealyError, NonDeterminismError
from .mealy import MealyMachine, PartialMealy

START = "__start0"

_ID = r'(?:"(?:[^"\\]|\\.)*"|[A-Za-z0-9_.\-]+)'
_EDGE = re.compile(rf"^({_ID})\s*->\s*({_ID})\s*(?:\[(.*)\])?\s*;?$")
_NODE = re.compile(rf"^({_ID})\s*(?:\[(.*)\])?\s*;?$")
_LABEL = re.compile(r'label\s*=\s*"((?:[^"\\]|\\.)*)"')
_HEADER = re.compile(rf"^(?:strict\s+)?digraph\s*(?:{_ID})?\s*\{{\s*$")


def _unquote(token: str) -> str:
    if token.startswith('"'):
        return re.sub(r"\\(.)", r"\1", token[1:-1])
    return token


def _quote(name) -> str:
    text = str(name)
    if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", text):
        return text
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def parse_dot(text: str, partial: bool = False) -> PartialMealy:
    """Parse DOT text into a machine.

    With ``partial=False`` (default) the result must be input-enabled and a
    MealyMachine is returned; otherwise a PartialMealy.
    """
    initial = None
    edges = []
    nodes = []
    opened = closed = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("//") or line.startswith("#"):
            continue
        if not opened:
            if not _HEADER.match(line):
                raise DotSyntaxError(lineno, f"expected 'digraph ... {{', got {line!r}")
            opened = True
            continue
        if line == "}":
            closed = True
            continue
        if closed:
            raise DotSyntaxError(lineno, "content after closing brace")
        if re.match(r"^(graph|node|edge)\s*\[", line) or re.match(r"^\w+\s*=", line):
            continue
        m = _EDGE.match(line)
        if m:
            src, dst, attrs = _unquote(m.group(1)), _unquote(m.group(2)), m.group(3) or ""
            if src == START:
                if initial is not None and initial != dst:
                    raise DotSyntaxError(lineno, "more than one initial-state marker")
                initial = dst
                continue
            label = _LABEL.search(attrs)
            if label is None:
                raise DotSyntaxError(lineno, "transition without label")
            text_label = re.sub(r"\\(.)", r"\1", label.group(1))
            if "/" not in text_label:
                raise DotSyntaxError(lineno, f"label {text_label!r} is not of the form input/output")
            i, o = text_label.split("/", 1)
            edges.append((lineno, src, i.strip(), o.strip(), dst))
            continue
        m = _NODE.match(line)
        if m:
            name = _unquote(m.group(1))
            if name != START:
                nodes.append(name)
            continue
        raise DotSyntaxError(lineno, f"cannot parse {line!r}")
    if not opened:
        raise DotSyntaxError(1, "empty document")
    if not closed:
        raise DotSyntaxError(len(text.splitlines()), "missing closing brace")
    if initial is None:
        raise MealyError(f"no initial-state marker ({START} -> state)")

    transitions: dict = {name: {} for name in nodes}
    transitions.setdefault(initial, {})
    for lineno, src, i, o, dst in edges:
        row = transitions.setdefault(src, {})
        if i in row:
            raise NonDeterminismError(
                (i,), row[i][1], o, where=f"line {lineno}: second edge for state {src!r}"
            )
        row[i] = (dst, o)
        transitions.setdefault(dst, {})
    cls = PartialMealy if partial else MealyMachine
    return cls(transitions, initial)


def serialize_dot(m: PartialMealy, name: str = "g") -> str:
    lines = [f"digraph {name} {{", f'    {START} [label="" shape="none"];']
    for q in m.states:
        lines.append(f'    {_quote(q)} [shape="circle" label="{q}"];')
    for src, i, o, dst in m.edges():
        label = f"{i}/{o}".replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'    {_quote(src)} -> {_quote(dst)} [label="{label}"];')
    lines.append(f"    {START} -> {_quote(m.initial)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_dot(path, partial: bool = False) -> PartialMealy:
    return parse_dot(Path(path).read_text(encoding="utf-8"), partial=partial)


def save_dot(m: PartialMealy, path) -> None:
    Path(path).write_text(serialize_dot(m), encoding="utf-8")
