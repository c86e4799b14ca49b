"""Model corpus: DOT files plus a JSON manifest of expected shapes.

The shipped corpus lives in ``mealylearn/corpus/{ble,mqtt}`` and mirrors the
state and input counts of the BLE and MQTT subjects.  The original models
could not be fetched in this environment, so every entry is a synthetic
stand-in (``provenance: synthetic``) produced by :mod:`mealylearn.synth`
with the recorded generator arguments.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .dot import load_dot
from .errors import InvalidArgumentError, MealyError
from .mealy import SINK_OUTPUT, MealyMachine

CORPUS_DIR = Path(__file__).with_name("corpus")
MANIFEST = "manifest.json"
PROVENANCES = ("upstream", "synthetic")


@dataclass
class CorpusEntry:
    name: str
    family: str
    path: str  # relative to the corpus root
    n_states: int
    n_inputs: int
    provenance: str = "synthetic"
    generator: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise InvalidArgumentError(f"unknown provenance {self.provenance!r}")

    def load(self, root=None) -> MealyMachine:
        root = Path(root) if root is not None else CORPUS_DIR
        m = load_model(root / self.path)
        if len(m) != self.n_states or len(m.inputs) != self.n_inputs:
            raise MealyError(
                f"{self.name}: expected |Q|={self.n_states}, |I|={self.n_inputs}, "
                f"file has |Q|={len(m)}, |I|={len(m.inputs)}"
            )
        return m


def load_model(path) -> MealyMachine:
    """Load an input-enabled machine and reject the reserved sink output."""
    m = load_dot(path)
    if SINK_OUTPUT in m.outputs:
        raise MealyError(f"{path}: output {SINK_OUTPUT!r} is reserved for sink completion")
    return m


def read_manifest(root=None) -> list:
    root = Path(root) if root is not None else CORPUS_DIR
    data = json.loads((root / MANIFEST).read_text(encoding="utf-8"))
    return [CorpusEntry(**e) for e in data["models"]]


def write_manifest(entries, root) -> None:
    root = Path(root)
    payload = {"models": [asdict(e) for e in entries]}
    (root / MANIFEST).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_corpus(family: str | None = None, root=None) -> list:
    """``[(entry, machine)]`` for the whole corpus or one family."""
    out = []
    for e in read_manifest(root):
        if family is None or e.family == family:
            out.append((e, e.load(root)))
    if family is not None and not out:
        raise InvalidArgumentError(f"no corpus models in family {family!r}")
    return out


def get_model(name: str, root=None) -> MealyMachine:
    for e in read_manifest(root):
        if e.name == name:
            return e.load(root)
    raise InvalidArgumentError(f"no corpus model named {name!r}")


def resolve_model(spec: str) -> MealyMachine:
    """A DOT path, or the name of a corpus model."""
    p = Path(spec)
    if p.suffix == ".dot" or p.exists():
        return load_model(p)
    return get_model(spec)
