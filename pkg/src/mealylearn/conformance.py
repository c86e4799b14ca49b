"""Conformance testing: the learning-time equivalence oracle and the
post-hoc evaluation suites.

Learned models may be partial.  They are scored with sink semantics: an
undefined input leads to an absorbing sink whose reserved output never
matches the reference, so the trace fails.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import InvalidArgumentError
from .mealy import SINK_OUTPUT, MealyMachine, PartialMealy, Trace, access_sequences, shortlex


@dataclass(frozen=True)
class OracleConfig:
    n_walks: int = 25
    n_step: int = 30
    seed: int | None = 0

    def __post_init__(self):
        if self.n_walks < 1:
            raise InvalidArgumentError(f"n_walks must be >= 1, got {self.n_walks}")
        if self.n_step < 1:
            raise InvalidArgumentError(f"n_step must be >= 1, got {self.n_step}")


class StateCoverageOracle:
    """Equivalence oracle: every hypothesis state is entered via its access
    sequence ``n_walks`` times, each followed by ``n_step`` random inputs.

    States are visited in shortlex order of their access sequences and the
    first divergence is returned as a counterexample, truncated just after
    the first differing output.  The random stream persists across calls.
    """

    def __init__(self, n_walks: int = 25, n_step: int = 30, seed: int | None = 0):
        self.config = OracleConfig(n_walks, n_step, seed)
        self.rng = random.Random(seed)

    @classmethod
    def from_config(cls, cfg: OracleConfig) -> "StateCoverageOracle":
        return cls(cfg.n_walks, cfg.n_step, cfg.seed)

    def __call__(self, hypothesis: PartialMealy, sul) -> Trace | None:
        query = sul.query if hasattr(sul, "query") else sul
        access = access_sequences(hypothesis)
        inputs = hypothesis.inputs
        cfg = self.config
        for q in sorted(access, key=lambda q: shortlex(access[q])):
            prefix = access[q]
            for _ in range(cfg.n_walks):
                word = prefix + tuple(self.rng.choice(inputs) for _ in range(cfg.n_step))
                observed = tuple(query(word))
                expected = hypothesis.run(word)
                if observed != expected:
                    k = next(n for n, (a, b) in enumerate(zip(observed, expected)) if a != b)
                    return Trace(word[: k + 1], observed[: k + 1])
        return None


def state_coverage_oracle(hypothesis: PartialMealy, sul, cfg: OracleConfig | None = None):
    """One-shot form of StateCoverageOracle, seeded from ``cfg``."""
    return StateCoverageOracle.from_config(cfg or OracleConfig())(hypothesis, sul)


@dataclass
class TestSuite:
    kind: str
    traces: list
    seed: int | None = None

    __test__ = False  # not a pytest class

    def __len__(self) -> int:
        return len(self.traces)


@dataclass
class ConformanceReport:
    total: int
    passed: int
    first_failures: list = field(default_factory=list)

    @property
    def percentage(self) -> float:
        if self.total == 0:
            return float("nan")
        return 100.0 * self.passed / self.total

    @property
    def degenerate(self) -> bool:
        return self.total == 0


def gen_random_suite(
    gt: MealyMachine, n: int = 10_000, n_min: int = 3, n_max: int = 32, seed: int | None = 0
) -> TestSuite:
    """``n`` traces with uniform length in ``[n_min, n_max]`` and uniform inputs."""
    if n_min < 0 or n_min > n_max:
        raise InvalidArgumentError(f"invalid length bounds [{n_min}, {n_max}]")
    rng = random.Random(seed)
    inputs = gt.inputs
    traces = []
    for _ in range(n):
        length = rng.randint(n_min, n_max)
        word = tuple(rng.choice(inputs) for _ in range(length))
        traces.append(Trace(word, gt.run(word)))
    return TestSuite("random", traces, seed)


def gen_coverage_suite(
    gt: MealyMachine, total: int = 10_000, word_len: int = 10, seed: int | None = 0
) -> TestSuite:
    """``ceil(total / |Q|)`` traces per state: access sequence plus random word."""
    access = access_sequences(gt)
    per_state = math.ceil(total / len(access))
    rng = random.Random(seed)
    inputs = gt.inputs
    traces = []
    for q in sorted(access, key=lambda q: shortlex(access[q])):
        for _ in range(per_state):
            word = access[q] + tuple(rng.choice(inputs) for _ in range(word_len))
            traces.append(Trace(word, gt.run(word)))
    return TestSuite("coverage", traces, seed)


def run_with_sink(m: PartialMealy, inputs) -> tuple:
    """Outputs of ``m`` on ``inputs``; the reserved sink output from the first undefined step on."""
    out = []
    q = m.initial
    for n, i in enumerate(inputs):
        edge = m.transitions(q).get(i)
        if edge is None:
            out.extend([SINK_OUTPUT] * (len(inputs) - n))
            break
        q, o = edge
        out.append(o)
    return tuple(out)


def conformance_pct(learned: PartialMealy, suite, keep_failures: int = 5) -> ConformanceReport:
    """Fraction of suite traces whose outputs the learned model reproduces."""
    traces = suite.traces if hasattr(suite, "traces") else list(suite)
    delta = {q: learned.transitions(q) for q in learned.states}
    passed = 0
    failures = []
    for t in traces:
        q = learned.initial
        ok = True
        for i, expected in zip(t.inputs, t.outputs):
            edge = delta[q].get(i)
            if edge is None or edge[1] != expected:
                ok = False
                break
            q = edge[0]
        if ok:
            passed += 1
        elif len(failures) < keep_failures:
            failures.append(t)
    return ConformanceReport(len(traces), passed, failures)
