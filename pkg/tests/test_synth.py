from itertools import product

import pytest

from mealylearn import BudgetExceededError, InvalidArgumentError, characterization_set, serialize_dot
from mealylearn.synth import ble_like, minimize, mqtt_like, random_machine


def brute_force_minimal(m) -> bool:
    # two states of an n-state machine that differ do so on a word of length < n
    words = [w for k in range(1, len(m)) for w in product(m.inputs, repeat=k)] or [()]
    sigs = {tuple(m.run(w, q) for w in words) for q in m.states}
    return len(sigs) == len(m.states)


def strongly_connected(m) -> bool:
    for src in m.states:
        seen, todo = {src}, [src]
        while todo:
            q = todo.pop()
            for i in m.inputs:
                t = m.step(q, i)[0]
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        if len(seen) != len(m.states):
            return False
    return True


@pytest.mark.parametrize("q,i,seed", [(4, 7, 0), (5, 2, 3), (6, 3, 11), (3, 1, 2)])
def test_random_machine_shape(q, i, seed):
    m = random_machine(q, i, seed=seed)
    assert (len(m), len(m.inputs)) == (q, i)
    assert brute_force_minimal(m)
    assert strongly_connected(m)


def test_random_machine_deterministic():
    assert serialize_dot(random_machine(4, 7, seed=5)) == serialize_dot(random_machine(4, 7, seed=5))
    assert serialize_dot(random_machine(4, 7, seed=5)) != serialize_dot(random_machine(4, 7, seed=6))


def test_random_machine_single_state():
    m = random_machine(1, 1)
    assert len(m) == 1
    assert m.step(m.initial, m.inputs[0])[0] == m.initial


def test_random_machine_budget():
    # one output symbol cannot separate two states
    with pytest.raises(BudgetExceededError):
        random_machine(2, 1, n_outputs=1, budget=20)


@pytest.mark.parametrize("q,i", [(0, 3), (3, 0)])
def test_random_machine_rejects_empty(q, i):
    with pytest.raises(InvalidArgumentError):
        random_machine(q, i)


def test_ble_like_single_input_separation():
    for seed in range(3):
        m = ble_like(5, 6, seed=seed)
        assert len(m) == 5
        assert all(len(w) == 1 for w in characterization_set(m))
        assert {"scan_req", "connection_req"} <= set(m.inputs)


def test_ble_like_scan_resets():
    m = ble_like(6, 8, seed=2)
    for q in m.states:
        assert m.step(q, "scan_req")[0] == m.initial


def test_mqtt_like_shape():
    m = mqtt_like(18, seed=1)
    assert len(m) == 18 and len(m.inputs) == 9
    assert "ConnectC1" in m.inputs
    assert characterization_set(m)


def test_mqtt_like_limits():
    with pytest.raises(InvalidArgumentError):
        mqtt_like(18, n_inputs=10)
    with pytest.raises(InvalidArgumentError):
        mqtt_like(6, n_inputs=9)


def test_minimize_merges_equivalent_states():
    from mealylearn import MealyMachine, equivalence

    m = MealyMachine(
        {"a": {"x": ("b", "0")}, "b": {"x": ("c", "1")}, "c": {"x": ("b", "0")}, "d": {"x": ("a", "1")}},
        "a",
    )
    small = minimize(m)
    assert len(small) == 2
    assert equivalence(small, m).equal
