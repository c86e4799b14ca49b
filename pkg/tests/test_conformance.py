import math
import statistics

import pytest

from mealylearn import (
    InvalidArgumentError,
    MealyMachine,
    OracleConfig,
    StateCoverageOracle,
    SulSession,
    TestSuite,
    access_sequences,
    conformance_pct,
    gen_coverage_suite,
    gen_random_suite,
    rpni,
    state_coverage_oracle,
)
from mealylearn.corpus import get_model


def test_oracle_passes_on_correct_hypothesis():
    m = get_model("CC2652R1")
    sul = SulSession(m)
    assert StateCoverageOracle(seed=1)(m, sul) is None
    acc = access_sequences(m)
    assert sul.stats.queries == 4 * 25
    assert sul.stats.steps == sum(25 * (len(a) + 30) for a in acc.values())


def test_oracle_finds_double_i1(fig2c):
    one = MealyMachine({"h": {"i1": ("h", "o1"), "i2": ("h", "o1")}}, "h")
    cex = StateCoverageOracle(seed=0)(one, SulSession(fig2c))
    assert cex is not None
    assert cex.inputs.count("i1") >= 2
    # truncated right after the first divergence
    assert one.run(cex.inputs)[:-1] == cex.outputs[:-1]
    assert one.run(cex.inputs)[-1] != cex.outputs[-1]


@pytest.mark.parametrize("walks,steps", [(0, 30), (25, 0), (-1, 1)])
def test_oracle_config_rejects_nonpositive(walks, steps):
    with pytest.raises(InvalidArgumentError):
        OracleConfig(walks, steps)


def test_functional_oracle_form(fig2c):
    assert state_coverage_oracle(fig2c, SulSession(fig2c), OracleConfig(2, 5, 0)) is None


def test_random_suite_lengths_and_mean():
    m = get_model("CC2652R1")
    suite = gen_random_suite(m, seed=4)
    assert len(suite) == 10_000 and suite.kind == "random"
    lengths = [len(t) for t in suite.traces]
    assert min(lengths) >= 3 and max(lengths) <= 32
    assert statistics.fmean(lengths) == pytest.approx(17.5, abs=0.5)
    assert all(m.run(t.inputs) == t.outputs for t in suite.traces[:200])


def test_random_suite_deterministic():
    m = get_model("CC2652R1")
    assert gen_random_suite(m, n=50, seed=7).traces == gen_random_suite(m, n=50, seed=7).traces
    assert gen_random_suite(m, n=50, seed=7).traces != gen_random_suite(m, n=50, seed=8).traces


def test_random_suite_bad_bounds(fig2c):
    with pytest.raises(InvalidArgumentError):
        gen_random_suite(fig2c, n=5, n_min=10, n_max=3)


@pytest.mark.parametrize("name,per_state", [("CC2652R1", 2500), ("CYBLE-416045-02", 3334)])
def test_coverage_suite_sizes(name, per_state):
    m = get_model(name)
    suite = gen_coverage_suite(m, seed=0)
    assert len(suite) == per_state * len(m)
    assert per_state == math.ceil(10_000 / len(m))


def test_coverage_suite_prefixes_reach_targets():
    m = get_model("CC2652R1")
    acc = access_sequences(m)
    suite = gen_coverage_suite(m, seed=0)
    per = 2500
    for k, q in enumerate(sorted(acc, key=lambda q: (len(acc[q]), acc[q]))):
        for t in suite.traces[k * per : (k + 1) * per : 250]:
            assert len(t) == len(acc[q]) + 10
            assert m.reach(t.inputs[: len(acc[q])]) == q


def test_self_conformance():
    m = get_model("VerneMQ")
    for suite in (gen_random_suite(m, n=500), gen_coverage_suite(m, total=500)):
        assert conformance_pct(m, suite).percentage == 100.0


def test_partial_model_fails_on_undefined_input(fig2c, fig2_traces):
    learned = rpni(fig2_traces)
    from mealylearn import Trace

    suite = TestSuite("coverage", [Trace(("i1", "i2"), fig2c.run(("i1", "i2"))),
                                   Trace(("i1", "i1"), fig2c.run(("i1", "i1")))])
    rep = conformance_pct(learned, suite)
    assert (rep.total, rep.passed) == (2, 1)
    assert rep.first_failures[0].inputs == ("i1", "i2")
    assert rep.percentage == 50.0


def test_empty_suite_is_degenerate(fig2c):
    rep = conformance_pct(fig2c, TestSuite("random", []))
    assert rep.total == 0 and rep.degenerate
