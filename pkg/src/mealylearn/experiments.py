"""Experiment drivers: active baseline, passive samples, cache priming,
optimisation and the size/length grid.

Every driver returns a :class:`RunRecord` holding one row per repetition.
Repetition ``r`` uses seed ``base_seed + r``; the evaluation suites use
``base_seed`` so all repetitions are scored on the same tests.  Aggregates
are recomputed from the rows (mean and sample standard deviation).
"""
from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .conformance import StateCoverageOracle, conformance_pct, gen_coverage_suite, gen_random_suite
from .errors import InvalidArgumentError
from .lstar import learn_lstar
from .mealy import MealyMachine, isomorphic
from .rpni import rpni
from .sampling import (
    HeatmapResult,
    _map,
    heatmap_grid,
    optimize_sample,
    random_sample,
    sample1_config,
    sample2_config,
    sample3_config,
)
from .sul import SulSession

ACTIVE_COLUMNS = [
    "rep", "seed", "output_queries", "output_query_steps", "conformance_tests",
    "conformance_test_steps", "rounds", "sum_queries", "sum_steps", "n_data", "mean_len",
    "optimized_queries", "optimized_mean_len", "isomorphic", "wall_time",
]
PASSIVE_COLUMNS = [
    "rep", "seed", "n_data", "mean_len", "conformance_random", "conformance_coverage",
    "correct", "learned_states", "wall_time",
]
CACHE_COLUMNS = [
    "rep", "seed", "primed_traces", "total_queries", "cache_hits", "sul_queries",
    "hit_fraction", "additional_fraction", "isomorphic", "wall_time",
]
OPTIMIZE_COLUMNS = [
    "original_size", "optimized_size", "size_ratio", "original_mean_len",
    "optimized_mean_len", "w_size", "isomorphic",
]
CONFORMANCE_COLUMNS = ["suite", "total", "passed", "percentage"]

# columns that are not averaged in the summary row
_NOT_AGGREGATED = {"rep", "seed"}
_TALLIED = {"correct", "isomorphic"}


KINDS = (
    "active", "passive-sample1", "passive-sample2", "passive-sample3", "passive-sample4",
    "optimize", "cache-primed-active", "conformance",
)


@dataclass
class ExperimentSpec:
    models: list
    kind: str = "active"
    reps: int = 5
    base_seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown experiment kind {self.kind!r}")
        _check_reps(self.reps)
        if not self.models:
            raise InvalidArgumentError("no model given")


def sample_std(values) -> float:
    """Standard deviation with the n-1 denominator; 0 for a single value."""
    values = list(values)
    return statistics.stdev(values) if len(values) > 1 else 0.0


@dataclass
class RunRecord:
    kind: str
    model: str
    columns: list
    rows: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def values(self, column) -> list:
        return [row[column] for row in self.rows]

    def mean(self, column) -> float:
        return statistics.fmean(float(v) for v in self.values(column))

    def std(self, column) -> float:
        return sample_std(float(v) for v in self.values(column))

    def tally(self, column="correct") -> int:
        return sum(1 for v in self.values(column) if v)

    def aggregate(self) -> dict:
        """Per column: ``(mean, std)``, or the count of true flags for boolean columns."""
        out = {}
        for c in self.columns:
            if c in _NOT_AGGREGATED:
                continue
            if c in _TALLIED:
                out[c] = self.tally(c)
            else:
                out[c] = (self.mean(c), self.std(c))
        return out

    def summary_rows(self) -> list:
        agg = self.aggregate()
        mean_row = {"rep": "mean", "seed": ""}
        std_row = {"rep": "std", "seed": ""}
        for c, v in agg.items():
            if c in _TALLIED:
                mean_row[c] = v
                std_row[c] = ""
            else:
                mean_row[c], std_row[c] = v
        return [mean_row, std_row]


def _fmt(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return f"{value:.4f}"
    return value


def write_csv(path, columns, rows, model: str | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = (["model"] if model is not None else []) + list(columns)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            prefix = [model] if model is not None else []
            w.writerow(prefix + [_fmt(row.get(c, "")) for c in columns])


def write_record(record: RunRecord, path, summary: bool = True) -> None:
    rows = list(record.rows) + (record.summary_rows() if summary else [])
    write_csv(path, record.columns, rows, model=record.model)


def write_heatmap(result: HeatmapResult, path) -> None:
    """Rows are mean lengths, columns are size factors, cells are mean conformance %."""
    columns = ["mean_len"] + [f"x{f}" for f in result.factors]
    rows = []
    for length, row in zip(result.mean_lengths, result.means):
        rows.append({"mean_len": length, **{f"x{f}": v for f, v in zip(result.factors, row)}})
    write_csv(path, columns, rows)


def _check_reps(reps):
    if reps < 1:
        raise InvalidArgumentError(f"repetitions must be >= 1, got {reps}")


def _suites(gt, seed):
    return gen_random_suite(gt, seed=seed), gen_coverage_suite(gt, seed=seed)


def active_run(gt: MealyMachine, seed: int = 0, n_walks: int = 25, n_step: int = 30):
    """One L* run; returns ``(hypothesis, LearningStats)``."""
    oracle = StateCoverageOracle(n_walks, n_step, seed)
    return learn_lstar(SulSession(gt), oracle=oracle)


def _active_rep(args) -> tuple:
    gt, r, seed, n_walks, n_step = args
    t0 = time.perf_counter()
    hyp, st = active_run(gt, seed, n_walks, n_step)
    wall = time.perf_counter() - t0
    opt, _ = optimize_sample(gt)
    row = {
        "rep": r, "seed": seed,
        "output_queries": st.output_queries, "output_query_steps": st.output_query_steps,
        "conformance_tests": st.conformance_tests,
        "conformance_test_steps": st.conformance_test_steps,
        "rounds": st.rounds, "sum_queries": st.sum_queries, "sum_steps": st.sum_steps,
        "n_data": st.sample_size, "mean_len": st.mean_length,
        "optimized_queries": opt.size, "optimized_mean_len": opt.mean_length,
        "isomorphic": isomorphic(hyp, gt), "wall_time": wall,
    }
    return row, hyp, st


def run_active(
    gt: MealyMachine, name="model", reps=5, base_seed=0, n_walks=25, n_step=30, jobs=1
) -> RunRecord:
    _check_reps(reps)
    rec = RunRecord("active", name, ACTIVE_COLUMNS)
    args = [(gt, r, base_seed + r, n_walks, n_step) for r in range(reps)]
    for k, (row, hyp, st) in enumerate(_map(_active_rep, args, jobs)):
        rec.rows.append(row)
        if k == 0:
            rec.extra["hypothesis"] = hyp
            rec.extra["stats"] = st
    return rec


def sample_config(kind: int, stats, n_states: int, seed: int):
    if kind == 1:
        return sample1_config(stats, seed)
    if kind == 2:
        return sample2_config(stats, seed)
    if kind == 3:
        return sample3_config(stats, n_states, seed)
    raise InvalidArgumentError(f"sample kind must be 1, 2 or 3, got {kind}")


def _passive_rep(args) -> dict:
    gt, kind, stats, r, seed, random_suite, coverage_suite = args
    cfg = sample_config(kind, stats, len(gt), seed)
    t0 = time.perf_counter()
    sample = random_sample(SulSession(gt), cfg)
    model = rpni(sample.traces, gt.inputs)
    wall = time.perf_counter() - t0
    return {
        "rep": r, "seed": seed, "n_data": sample.size, "mean_len": sample.mean_length,
        "conformance_random": conformance_pct(model, random_suite).percentage,
        "conformance_coverage": conformance_pct(model, coverage_suite).percentage,
        "correct": isomorphic(model, gt), "learned_states": len(model), "wall_time": wall,
    }


def run_passive(
    gt: MealyMachine, kind: int = 1, name="model", reps=5, base_seed=0, stats=None, jobs=1
) -> RunRecord:
    """RPNI on random samples shaped after one active baseline run.

    The baseline uses oracle seed ``base_seed``; pass ``stats`` to reuse one.
    """
    _check_reps(reps)
    if stats is None:
        _, stats = active_run(gt, base_seed)
    sample_config(kind, stats, len(gt), base_seed)  # validates kind before any work
    random_suite, coverage_suite = _suites(gt, base_seed)
    rec = RunRecord(f"passive-sample{kind}", name, PASSIVE_COLUMNS)
    rec.extra["baseline"] = stats
    args = [
        (gt, kind, stats, r, base_seed + r, random_suite, coverage_suite) for r in range(reps)
    ]
    rec.rows.extend(_map(_passive_rep, args, jobs))
    return rec


def cached_lstar(gt: MealyMachine, priming, seed: int):
    """L* through a cache primed with ``priming``.

    Returns ``(hypothesis, learner stats, session)``; the session's counters
    hold the queries that reached the system.
    """
    session = SulSession(gt, cache=True)
    session.prime_cache(priming)
    hyp, st = learn_lstar(session, oracle=StateCoverageOracle(seed=seed))
    return hyp, st, session


def run_cache(
    gt: MealyMachine, name="model", reps=5, base_seed=0, priming: str = "sample1"
) -> RunRecord:
    """Cache-priming experiment.

    ``priming`` is ``sample1`` (a fresh Sample-1-shaped random set per
    repetition), ``self`` (the baseline's own traces) or ``empty``.
    ``hit_fraction`` is cache hits over queries posed by the learner;
    ``additional_fraction`` is queries that still reached the system over
    the same total.
    """
    _check_reps(reps)
    if priming not in ("sample1", "self", "empty"):
        raise InvalidArgumentError(f"unknown priming {priming!r}")
    rec = RunRecord(f"cache-{priming}", name, CACHE_COLUMNS)
    for r in range(reps):
        seed = base_seed + r
        _, base = active_run(gt, seed)
        if priming == "sample1":
            traces = random_sample(SulSession(gt), sample1_config(base, seed)).traces
        elif priming == "self":
            traces = base.traces
        else:
            traces = []
        t0 = time.perf_counter()
        hyp, st, session = cached_lstar(gt, traces, seed)
        wall = time.perf_counter() - t0
        total = st.sum_queries
        rec.rows.append({
            "rep": r, "seed": seed, "primed_traces": len(traces), "total_queries": total,
            "cache_hits": session.stats.cache_hits, "sul_queries": session.stats.queries,
            "hit_fraction": session.stats.cache_hits / total,
            "additional_fraction": session.stats.queries / total,
            "isomorphic": isomorphic(hyp, gt), "wall_time": wall,
        })
    return rec


def run_optimize(gt: MealyMachine, name="model", seed=0) -> RunRecord:
    _, st = active_run(gt, seed)
    sample, report = optimize_sample(gt, st)
    learned = rpni(sample.traces, gt.inputs)
    rec = RunRecord("optimize", name, OPTIMIZE_COLUMNS)
    rec.rows.append({
        "original_size": report.original_size, "optimized_size": report.optimized_size,
        "size_ratio": report.size_ratio, "original_mean_len": report.original_mean_len,
        "optimized_mean_len": report.optimized_mean_len, "w_size": len(report.w_set),
        "isomorphic": isomorphic(learned, gt),
    })
    rec.extra["sample"] = sample
    return rec


def run_conformance(learned, gt: MealyMachine, name="model", seed=0) -> RunRecord:
    rec = RunRecord("conformance", name, CONFORMANCE_COLUMNS)
    for suite in _suites(gt, seed):
        rep = conformance_pct(learned, suite)
        rec.rows.append({
            "suite": suite.kind, "total": rep.total, "passed": rep.passed,
            "percentage": rep.percentage,
        })
    return rec


def run_heatmap(
    gt: MealyMachine,
    factors: Sequence[int],
    lengths: Sequence[float],
    reps=5,
    base_seed=0,
    stats=None,
    jobs=1,
) -> HeatmapResult:
    _check_reps(reps)
    if not factors or not lengths:
        raise InvalidArgumentError("need at least one size factor and one mean length")
    if stats is None:
        _, stats = active_run(gt, base_seed)
    suite = gen_coverage_suite(gt, seed=base_seed)
    return heatmap_grid(gt, stats, factors, lengths, reps, base_seed, suite, jobs)


def comparable(record: RunRecord) -> list:
    """Rows without wall time, for determinism checks."""
    return [{k: v for k, v in row.items() if k != "wall_time"} for row in record.rows]
