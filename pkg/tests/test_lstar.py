import pytest

from mealylearn import (
    InvalidCounterexampleError,
    MealyError,
    MealyMachine,
    ObservationTable,
    StateCoverageOracle,
    SulSession,
    TableNotClosedError,
    Trace,
    build_hypothesis,
    isomorphic,
    learn_lstar,
    make_closed,
    process_counterexample,
)
from mealylearn.corpus import get_model


def _filled(m, suffixes=None):
    t = ObservationTable(m.inputs, suffixes)
    t.fill(SulSession(m).output_query)
    return t


def test_table_initialisation(fig2c):
    t = ObservationTable(fig2c.inputs)
    assert t.S == [()]
    assert list(t.E) == [("i1",), ("i2",)]


def test_table1_cells(fig2c):
    t = _filled(fig2c, [("i1",), ("i2",), ("i1", "i1")])
    assert t.row(()) == (("o1",), ("o1",), ("o1", "o2"))
    assert t.row(("i1",)) == (("o2",), ("o1",), ("o2", "o1"))
    assert t.row(("i2",)) == t.row(())


def test_make_closed_promotes_i1_only(fig2c):
    sul = SulSession(fig2c)
    t = _filled(fig2c)
    assert ("i1",) in t.unclosed()
    make_closed(t, sul.output_query)
    assert t.S == [(), ("i1",)]
    assert t.is_closed()


def test_make_closed_fixpoint(fig2c):
    sul = SulSession(fig2c)
    t = _filled(fig2c)
    make_closed(t, sul.output_query)
    before = (list(t.S), sul.stats.queries)
    make_closed(t, sul.output_query)
    assert (list(t.S), sul.stats.queries) == before


def test_one_query_per_cell(fig2c):
    sul = SulSession(fig2c)
    t = ObservationTable(fig2c.inputs)
    n = t.fill(sul.output_query)
    # rows eps, i1, i2 times columns i1, i2
    assert n == 6 and sul.stats.queries == 6


def test_build_hypothesis_from_table1(fig2c):
    sul = SulSession(fig2c)
    t = _filled(fig2c, [("i1",), ("i2",), ("i1", "i1")])
    make_closed(t, sul.output_query)
    h = build_hypothesis(t)
    assert len(h) == 2
    assert isomorphic(h, fig2c)


def test_build_hypothesis_single_row():
    m = MealyMachine({"s": {"a": ("s", "x"), "b": ("s", "y")}}, "s")
    h = build_hypothesis(_filled(m))
    assert len(h) == 1
    assert h.step(h.initial, "a") == (h.initial, "x")


def test_build_hypothesis_requires_closed(fig2c):
    with pytest.raises(TableNotClosedError):
        build_hypothesis(_filled(fig2c))


def test_hypothesis_agrees_with_table(fig2c):
    sul = SulSession(fig2c)
    t = _filled(fig2c)
    make_closed(t, sul.output_query)
    h = build_hypothesis(t)
    for s in t.all_rows():
        for k, e in enumerate(t.E):
            assert h.run(s + e)[len(s):] == t.row(s)[k]


def test_counterexample_adds_one_suffix(fig2c):
    # E = {i2} cannot tell the rows apart; the learner's one-state guess
    # answers o1 everywhere
    sul = SulSession(fig2c)
    t = _filled(fig2c, [("i2",)])
    h1 = MealyMachine({"h": {"i1": ("h", "o1"), "i2": ("h", "o1")}}, "h")
    process_counterexample(t, sul.output_query, h1, Trace(("i1", "i1"), ("o1", "o2")))
    assert list(t.E) == [("i2",), ("i1",)]
    make_closed(t, sul.output_query)
    assert len(build_hypothesis(t)) == 2


def test_counterexample_with_known_suffix_fails_cleanly(fig2c):
    # the only flip point yields i1, which is already a column
    sul = SulSession(fig2c)
    t = _filled(fig2c)
    h1 = MealyMachine({"h": {"i1": ("h", "o1"), "i2": ("h", "o1")}}, "h")
    with pytest.raises(InvalidCounterexampleError):
        process_counterexample(t, sul.output_query, h1, Trace(("i1", "i1"), ("o1", "o2")))


def test_passing_counterexample_rejected(fig2c):
    sul = SulSession(fig2c)
    t = _filled(fig2c)
    make_closed(t, sul.output_query)
    h = build_hypothesis(t)
    with pytest.raises(InvalidCounterexampleError):
        process_counterexample(t, sul.output_query, h, Trace(("i1", "i1"), ("o1", "o2")))


def test_learn_fig2c(fig2c):
    h, st = learn_lstar(SulSession(fig2c))
    assert isomorphic(h, fig2c)
    assert st.rounds == 1


def test_learn_single_state():
    m = MealyMachine({"s": {"a": ("s", "x")}}, "s")
    h, st = learn_lstar(SulSession(m))
    assert len(h) == 1 and st.rounds == 1 and st.final_s == 1


def test_learn_cc2652r1():
    m = get_model("CC2652R1")
    h, st = learn_lstar(SulSession(m))
    assert len(h) == 4 and st.rounds == 1
    assert isomorphic(h, m)


def test_suffix_per_counterexample_and_final_s():
    m = get_model("HBMQTT")
    h, st = learn_lstar(SulSession(m), oracle=StateCoverageOracle(seed=0))
    assert isomorphic(h, m)
    assert st.rounds > 1
    assert st.final_e == len(m.inputs) + st.rounds - 1
    assert st.final_s == len(m)


def test_stats_identities():
    m = get_model("CC2650")
    h, st = learn_lstar(SulSession(m))
    assert st.sum_queries == st.output_queries + st.conformance_tests
    assert st.sum_steps == st.output_query_steps + st.conformance_test_steps
    # deduplicated trace set, conformance tests included
    assert st.sample_size == len(set(st.traces)) <= st.sum_queries
    assert st.mean_length == pytest.approx(sum(map(len, st.traces)) / st.sample_size)


def test_cached_run_matches_uncached():
    m = get_model("emqtt")
    h1, s1 = learn_lstar(SulSession(m), oracle=StateCoverageOracle(seed=3))
    sul = SulSession(m, cache=True)
    h2, s2 = learn_lstar(sul, oracle=StateCoverageOracle(seed=3))
    assert isomorphic(h1, h2)
    assert s1.sum_queries == s2.sum_queries
    assert sul.stats.queries + sul.stats.cache_hits == s2.sum_queries
    assert sul.stats.cache_hits > 0


def test_alphabet_mismatch(fig2c):
    with pytest.raises(MealyError):
        learn_lstar(SulSession(fig2c), alphabet=["i1"])


def test_round_budget():
    from mealylearn import BudgetExceededError

    m = get_model("HBMQTT")
    with pytest.raises(BudgetExceededError):
        learn_lstar(SulSession(m), max_rounds=1)
