import pytest

from mealylearn import InvalidArgumentError, MealyError, NonDeterminismError, SulSession, Trace


def test_output_query_worked_example(fig2c):
    s = SulSession(fig2c)
    assert s.output_query(["i2", "i1", "i1"]) == ("o1", "o1", "o2")
    assert (s.stats.queries, s.stats.steps) == (1, 3)


def test_empty_query(fig2c):
    s = SulSession(fig2c)
    assert s.output_query([]) == ()
    assert (s.stats.queries, s.stats.steps) == (1, 0)


def test_repeated_query_is_charged_twice(fig2c):
    s = SulSession(fig2c)
    a = s.output_query(["i1", "i1"])
    b = s.output_query(["i1", "i1"])
    assert a == b
    assert s.stats.queries == 2 and s.stats.steps == 4


def test_unknown_symbol(fig2c):
    with pytest.raises(InvalidArgumentError):
        SulSession(fig2c).output_query(["i3"])


def test_model_is_hidden(fig2c):
    s = SulSession(fig2c)
    assert not hasattr(s, "model") and not hasattr(s, "states")
    assert "q0" not in repr(s)


def test_cache_full_hit(fig2c):
    s = SulSession(fig2c, cache=True)
    s.prime_cache([Trace(("i1", "i1"), ("o1", "o2"))])
    assert s.cached_query(["i1", "i1"]) == ("o1", "o2")
    assert s.stats.queries == 0 and s.stats.cache_hits == 1
    # a stored prefix is a hit too
    assert s.cached_query(["i1"]) == ("o1",)
    assert s.stats.queries == 0


def test_cache_partial_prefix_is_a_miss(fig2c):
    s = SulSession(fig2c, cache=True)
    s.prime_cache([Trace(("i1", "i1"), ("o1", "o2"))])
    assert s.cached_query(["i1", "i1", "i1"]) == ("o1", "o2", "o1")
    assert s.stats.queries == 1 and s.stats.steps == 3 and s.stats.cache_hits == 0
    # the answer is now stored
    s.cached_query(["i1", "i1", "i1"])
    assert s.stats.queries == 1 and s.stats.cache_hits == 1


def test_prime_conflict():
    from mealylearn import MealyMachine

    m = MealyMachine({"s": {"i1": ("s", "o1")}}, "s")
    s = SulSession(m, cache=True)
    with pytest.raises(NonDeterminismError) as e:
        s.prime_cache([Trace(("i1",), ("o1",)), Trace(("i1",), ("o2",))])
    assert e.value.prefix == ("i1",)


def test_prime_node_counts(fig2c, fig2_traces):
    s = SulSession(fig2c)
    assert s.prime_cache([]) == 1
    assert s.prime_cache(fig2_traces) == 6
    assert s.prime_cache(fig2_traces) == 6
    assert s.stats.queries == 0


def test_cached_query_without_cache(fig2c):
    with pytest.raises(MealyError):
        SulSession(fig2c).cached_query(["i1"])


def test_corrupt_priming_detected(fig2c):
    # a primed trace that disagrees with the system shows up once the SUL answers an extension
    s = SulSession(fig2c, cache=True)
    s.prime_cache([Trace(("i1",), ("o2",))])
    with pytest.raises(NonDeterminismError):
        s.cached_query(["i1", "i1"])
