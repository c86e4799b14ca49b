import pytest

from mealylearn import (
    NonDeterminismError,
    PartialMealy,
    Trace,
    build_pta,
    isomorphic,
    optimize_sample,
    rpni,
    run_rpni,
    try_merge,
)
from mealylearn.corpus import get_model
from mealylearn.rpni import MergeAutomaton


def test_pta_worked_example(fig2_traces):
    pta = build_pta(fig2_traces)
    assert len(pta) == 6
    m = pta.to_machine()
    expected = {
        ("q0", "i1"): ("q1", "o1"),
        ("q0", "i2"): ("q2", "o1"),
        ("q1", "i1"): ("q3", "o2"),
        ("q2", "i1"): ("q4", "o1"),
        ("q3", "i1"): ("q5", "o1"),
    }
    assert {(s, i): (t, o) for s, i, o, t in m.edges()} == expected


def test_pta_empty():
    assert len(build_pta([])) == 1


def test_pta_conflict():
    with pytest.raises(NonDeterminismError) as e:
        build_pta([Trace(("i1",), ("o1",)), Trace(("i1",), ("o2",))])
    assert e.value.prefix == ("i1",)


def test_merge_q1_into_q0_incompatible(fig2_traces):
    pta = build_pta(fig2_traces)
    a = MergeAutomaton(pta)
    before = [dict(row) for row in a.trans]
    assert try_merge(a, 0, pta.node_at(("i1",))) is None
    assert a.trans == before


def test_merge_q2_into_q0_gives_fig2b(fig2_traces):
    pta = build_pta(fig2_traces)
    a = MergeAutomaton(pta)
    q1, q3 = pta.node_at(("i1",)), pta.node_at(("i1", "i1"))
    a.promote(q1, 0, "i1")
    merged = try_merge(a, 0, pta.node_at(("i2",)))
    assert merged is not None
    assert merged.trans[0] == {"i1": (q1, "o1"), "i2": (0, "o1")}
    assert merged.trans[q1] == {"i1": (q3, "o2")}
    # q2's i1/o1 edge folded onto q0's existing i1/o1 edge
    assert [c for c, _, _ in merged.blue_states()] == [q3]


def test_leaf_merge_always_compatible(fig2_traces):
    pta = build_pta(fig2_traces)
    a = MergeAutomaton(pta)
    a.promote(pta.node_at(("i1",)), 0, "i1")
    a.promote(pta.node_at(("i1", "i1")), pta.node_at(("i1",)), "i1")
    leaf = pta.node_at(("i1", "i1", "i1"))
    for red in a.red:
        assert try_merge(a, red, leaf) is not None


def test_rpni_worked_example(fig2_traces):
    res = run_rpni(build_pta(fig2_traces), record=True)
    expected = PartialMealy(
        {"q0": {"i1": ("q1", "o1"), "i2": ("q0", "o1")}, "q1": {"i1": ("q0", "o2")}}, "q0"
    )
    assert isomorphic(res.model, expected)
    steps = [(s.blue, s.red, s.accepted) for s in res.steps]
    assert steps[:3] == [(("i1",), (), False), (("i2",), (), True), (("i1", "i1"), (), True)]


def test_rpni_single_trace_chain():
    # distinct outputs keep the chain apart
    m = rpni([Trace(("a", "a"), ("x", "y"))], inputs=["a", "b"])
    assert len(m) == 2
    assert not m.is_complete


def test_rpni_full_coverage_recovers_model():
    gt = get_model("CC2650")
    sample, _ = optimize_sample(gt)
    assert isomorphic(rpni(sample.traces, gt.inputs), gt)


def test_rpni_replays_and_shrinks():
    gt = get_model("mosquitto")
    from mealylearn import SampleConfig, SulSession, random_sample

    s = random_sample(SulSession(gt), SampleConfig(300, 1, 12, seed=2))
    res = run_rpni(build_pta(s.traces), gt.inputs)
    for t in s.traces:
        assert res.model.run(t.inputs) == t.outputs
    assert len(res.model) <= res.pta_size


def test_sparse_sample_overshoots_size():
    from mealylearn import SulSession, random_sample, sample1_config
    from mealylearn.experiments import active_run

    gt = get_model("HBMQTT")
    _, st = active_run(gt, 0)
    s = random_sample(SulSession(gt), sample1_config(st, 0))
    assert len(rpni(s.traces, gt.inputs)) >= len(gt)


def test_rpni_single_step_trace_folds_leaf():
    # the leaf has no outgoing edges, so it folds into the root
    m = rpni([Trace(("i1",), ("o1",))], inputs=["i1", "i2"])
    assert len(m) == 1
    assert m.step(m.initial, "i1") == (m.initial, "o1")
    assert not m.is_complete
