"""Training-data generation for passive learning.

Random traces follow a simple law: length uniform in ``[n_min, n_max]``,
inputs uniform over the alphabet, outputs observed on the system.  Sample
sizes and length bounds are derived from an L* run.  ``optimize_sample``
builds a small sufficient sample from the ground-truth model instead.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidArgumentError, MealyError
from .mealy import MealyMachine, Trace, access_sequences, characterization_set, shortlex
from .sul import SulSession


def round_half_up(x: float) -> int:
    """Nearest integer, halves rounded up."""
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class SampleConfig:
    n_data: int
    n_min: int
    n_max: int
    seed: int | None = 0
    label: str = "random"

    def __post_init__(self):
        if self.n_data < 0:
            raise InvalidArgumentError(f"n_data must be >= 0, got {self.n_data}")
        if not 1 <= self.n_min <= self.n_max:
            raise InvalidArgumentError(
                f"length bounds must satisfy 1 <= n_min <= n_max, got [{self.n_min}, {self.n_max}]"
            )

    def with_seed(self, seed) -> "SampleConfig":
        return SampleConfig(self.n_data, self.n_min, self.n_max, seed, self.label)


@dataclass
class SampleSet:
    traces: list
    config: SampleConfig | None = None
    inputs: tuple | None = None

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    @property
    def size(self) -> int:
        return len(self.traces)

    @property
    def mean_length(self) -> float:
        if not self.traces:
            return 0.0
        return sum(len(t) for t in self.traces) / len(self.traces)


def random_sample(sul: SulSession, cfg: SampleConfig) -> SampleSet:
    rng = random.Random(cfg.seed)
    inputs = tuple(sul.inputs)
    traces = []
    for _ in range(cfg.n_data):
        length = rng.randint(cfg.n_min, cfg.n_max)
        word = tuple(rng.choice(inputs) for _ in range(length))
        traces.append(Trace(word, sul.query(word)))
    return SampleSet(traces, cfg, inputs)


def _active_size(stats) -> tuple:
    size = stats.sample_size
    if size == 0:
        raise MealyError("the active run recorded no traces")
    return size, stats.mean_length


def sample1_config(stats, seed=0) -> SampleConfig:
    """Same size and mean length as the L* trace set."""
    size, mean = _active_size(stats)
    return SampleConfig(size, 1, max(1, round_half_up(2 * mean - 1)), seed, "sample-1")


def sample2_config(stats, seed=0) -> SampleConfig:
    size, mean = _active_size(stats)
    return SampleConfig(2 * size, 1, max(1, round_half_up(2 * mean - 1)), seed, "sample-2")


def sample3_config(stats, n_states: int, seed=0) -> SampleConfig:
    """Traces between ``|Q|`` and ``2|Q|`` long."""
    if n_states < 1:
        raise InvalidArgumentError(f"|Q| must be >= 1, got {n_states}")
    size, _ = _active_size(stats)
    return SampleConfig(size, n_states, 2 * n_states, seed, "sample-3")


def grid_config(stats, factor: int, mean_length: float, seed=0) -> SampleConfig:
    """Size ``factor * |S_L*|``, lengths in ``[1, round(2 * mean_length - 1)]``."""
    if factor < 1 or int(factor) != factor:
        raise InvalidArgumentError(f"size factor must be a positive integer, got {factor}")
    size, _ = _active_size(stats)
    n_max = max(1, round_half_up(2 * mean_length - 1))
    return SampleConfig(int(factor) * size, 1, n_max, seed, "sample-4-cell")


def prefix_reduce(traces: Iterable[Trace]) -> list:
    """Drop traces whose inputs are a prefix of (or equal to) another trace's.

    Survivors keep their first-occurrence order.  The prefix tree of the
    result equals that of the input.
    """
    traces = list(traces)
    first = {}
    for n, t in enumerate(traces):
        first.setdefault(t.inputs, n)
    words = sorted(first)
    keep = set()
    for k, w in enumerate(words):
        nxt = words[k + 1] if k + 1 < len(words) else None
        # in lexicographic order a prefix sorts right before some extension
        if nxt is None or nxt[: len(w)] != w:
            keep.add(first[w])
    return [traces[n] for n in sorted(keep)]


@dataclass
class OptimizationReport:
    original_size: int
    optimized_size: int
    original_mean_len: float
    optimized_mean_len: float
    w_set: tuple = field(default_factory=tuple)

    @property
    def size_ratio(self) -> float:
        return self.optimized_size / self.original_size if self.original_size else float("nan")


def optimize_sample(gt: MealyMachine, baseline=None) -> tuple:
    """Small sample built from access sequences and a characterization set.

    Query set: ``access(q) · x · w`` for every state ``q``, ``x`` in
    ``{ε} ∪ I`` and ``w`` in the characterization set, outputs simulated on
    ``gt``, prefixes removed.  A single-state model has an empty
    characterization set and gets one trace per input.  ``baseline`` (an
    L* trace collection or LearningStats) fills the report's original columns.
    """
    w_set = characterization_set(gt)
    access = access_sequences(gt)
    middles = [()] + [(i,) for i in gt.inputs]
    suffixes = list(w_set) if w_set else [()]
    words = set()
    for q in access:
        for x in middles:
            for w in suffixes:
                word = access[q] + x + w
                if word:
                    words.add(word)
    traces = prefix_reduce(Trace(w, gt.run(w)) for w in sorted(words, key=shortlex))
    sample = SampleSet(traces, None, gt.inputs)
    if baseline is None:
        base_traces = [Trace(w, gt.run(w)) for w in sorted(words, key=shortlex)]
    else:
        base_traces = list(getattr(baseline, "traces", baseline))
    base_mean = sum(len(t) for t in base_traces) / len(base_traces) if base_traces else 0.0
    report = OptimizationReport(
        len(base_traces), sample.size, base_mean, sample.mean_length, w_set
    )
    return sample, report


# trace files -----------------------------------------------------------------

def format_traces(sample: SampleSet) -> str:
    """One trace per line as ``in/out`` tokens; ``()`` is the empty trace."""
    lines = []
    if sample.inputs is not None:
        lines.append("# inputs: " + " ".join(sample.inputs))
    if sample.config is not None:
        lines.append("# config: " + json.dumps(asdict(sample.config), sort_keys=True))
    for t in sample.traces:
        for sym in t.inputs + t.outputs:
            if not sym or "/" in sym or sym.startswith("#") or any(c.isspace() for c in sym) or sym == "()":
                raise InvalidArgumentError(f"symbol {sym!r} cannot be written to a trace file")
        lines.append(str(t) if len(t) else "()")
    return "\n".join(lines) + "\n"


def parse_traces(text: str) -> SampleSet:
    inputs = None
    config = None
    traces = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            key = key.strip()
            if key == "inputs":
                inputs = tuple(value.split())
            elif key == "config":
                config = SampleConfig(**json.loads(value))
            continue
        if line == "()":
            traces.append(Trace((), ()))
            continue
        pairs = []
        for token in line.split():
            if "/" not in token:
                raise InvalidArgumentError(f"line {lineno}: token {token!r} is not input/output")
            pairs.append(tuple(token.split("/", 1)))
        traces.append(Trace.from_pairs(pairs))
    if inputs is not None:
        alphabet = set(inputs)
        for t in traces:
            unknown = set(t.inputs) - alphabet
            if unknown:
                raise InvalidArgumentError(f"trace uses undeclared inputs {sorted(unknown)}")
    return SampleSet(traces, config, inputs)


def write_traces(sample: SampleSet, path) -> None:
    Path(path).write_text(format_traces(sample), encoding="utf-8")


def read_traces(path) -> SampleSet:
    return parse_traces(Path(path).read_text(encoding="utf-8"))


# size x length sweep -----------------------------------------------------------

@dataclass
class HeatmapResult:
    factors: list
    mean_lengths: list
    cells: list  # rows follow mean_lengths, columns follow factors; per-rep percentages

    @property
    def means(self) -> list:
        return [[sum(c) / len(c) for c in row] for row in self.cells]


def heatmap_grid(
    gt: MealyMachine,
    stats,
    size_factors: Sequence[int],
    mean_lengths: Sequence[float],
    reps: int = 5,
    base_seed: int = 0,
    suite=None,
    jobs: int = 1,
) -> HeatmapResult:
    """Coverage conformance of RPNI over a grid of sample sizes and lengths.

    Cell ``(row, col)``, repetition ``r`` uses seed
    ``base_seed + 1000 * (row * len(size_factors) + col) + r``, so cell
    ``(0, 0)`` repeats the Sample-1 seeds.
    """
    from .conformance import gen_coverage_suite

    if reps < 1:
        raise InvalidArgumentError("reps must be >= 1")
    if suite is None:
        suite = gen_coverage_suite(gt, seed=base_seed)
    jobs_list = []
    for row, length in enumerate(mean_lengths):
        for col, factor in enumerate(size_factors):
            cell = row * len(size_factors) + col
            for r in range(reps):
                cfg = grid_config(stats, factor, length, base_seed + 1000 * cell + r)
                jobs_list.append((row, col, cfg))
    scores = _map(_grid_cell, [(gt, cfg, suite) for _, _, cfg in jobs_list], jobs)
    cells = [[[] for _ in size_factors] for _ in mean_lengths]
    for (row, col, _), pct in zip(jobs_list, scores):
        cells[row][col].append(pct)
    return HeatmapResult(list(size_factors), list(mean_lengths), cells)


def _grid_cell(args) -> float:
    from .conformance import conformance_pct
    from .rpni import rpni

    gt, cfg, suite = args
    sample = random_sample(SulSession(gt), cfg)
    model = rpni(sample.traces, gt.inputs)
    return conformance_pct(model, suite).percentage


def _map(fn, items, jobs: int):
    if jobs and jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]
