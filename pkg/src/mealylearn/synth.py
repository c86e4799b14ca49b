"""Synthetic Mealy machines.

``random_machine`` draws an arbitrary strongly connected minimal machine.
``ble_like`` and ``mqtt_like`` draw protocol-shaped machines: a connection
life cycle with reset-style inputs for BLE peripherals, and a broker session
graph with hard-to-separate duplicate states for MQTT.  Every generator retries with
derived seeds until the machine is minimal and has the requested size.
"""
from __future__ import annotations

import random
from collections import deque

from .errors import BudgetExceededError, InvalidArgumentError, NotMinimalError
from .mealy import MealyMachine, access_sequences, characterization_set


def minimize(m: MealyMachine) -> MealyMachine:
    """Reachable quotient by output equivalence (Moore refinement)."""
    reach = m.reachable_states()
    states = [q for q in m.states if q in reach]
    block = {q: 0 for q in states}
    while True:
        sig = {
            q: (block[q],) + tuple((m.step(q, i)[1], block[m.step(q, i)[0]]) for i in m.inputs)
            for q in states
        }
        ids: dict = {}
        new = {q: ids.setdefault(sig[q], len(ids)) for q in states}
        if len(ids) == len(set(block.values())):
            break
        block = new
    order = access_sequences_from(m, states)
    rename = {}
    for q in order:
        rename.setdefault(block[q], f"s{len(rename)}")
    trans = {}
    for q in order:
        name = rename[block[q]]
        if name in trans:
            continue
        trans[name] = {
            i: (rename[block[m.step(q, i)[0]]], m.step(q, i)[1]) for i in m.inputs
        }
    return MealyMachine(trans, rename[block[m.initial]], m.inputs)


def access_sequences_from(m: MealyMachine, states) -> list:
    """Reachable states in breadth-first (shortlex access) order."""
    seen = [m.initial]
    found = {m.initial}
    queue = deque([m.initial])
    while queue:
        q = queue.popleft()
        for i in m.inputs:
            t = m.step(q, i)[0]
            if t not in found:
                found.add(t)
                seen.append(t)
                queue.append(t)
    return seen


def _check_shape(n_states, n_inputs):
    if n_states < 1 or n_inputs < 1:
        raise InvalidArgumentError(f"need |Q| >= 1 and |I| >= 1, got {n_states}, {n_inputs}")


def _accept(m: MealyMachine, n_states: int) -> bool:
    if len(m) != n_states:
        return False
    try:
        access_sequences(m)
        characterization_set(m)
    except NotMinimalError:
        return False
    return True


def random_machine(
    n_states: int,
    n_inputs: int,
    seed: int = 0,
    n_outputs: int | None = None,
    budget: int = 1000,
) -> MealyMachine:
    """Random strongly connected minimal machine with inputs ``i0..`` and outputs ``o0..``.

    A random cycle through all states guarantees strong connectivity; the
    remaining transitions and all outputs are uniform.
    """
    _check_shape(n_states, n_inputs)
    inputs = [f"i{k}" for k in range(n_inputs)]
    n_outputs = n_outputs or max(2, min(n_inputs, 4))
    outputs = [f"o{k}" for k in range(n_outputs)]
    for attempt in range(budget):
        rng = random.Random(f"{seed}:{attempt}")
        states = [f"s{k}" for k in range(n_states)]
        trans = {q: {} for q in states}
        order = states[:1] + rng.sample(states[1:], n_states - 1)
        for k, q in enumerate(order):
            nxt = order[(k + 1) % n_states]
            trans[q][rng.choice(inputs)] = (nxt, rng.choice(outputs))
        for q in states:
            for i in inputs:
                if i not in trans[q]:
                    trans[q][i] = (rng.choice(states), rng.choice(outputs))
        m = MealyMachine(trans, "s0", inputs)
        if _accept(m, n_states):
            return m
    raise BudgetExceededError(f"no minimal {n_states}-state machine within {budget} attempts")


BLE_INPUTS = [
    "scan_req",
    "connection_req",
    "length_req",
    "length_rsp",
    "feature_req",
    "feature_rsp",
    "version_req",
    "mtu_req",
    "pairing_req",
]


def ble_like(n_states: int, n_inputs: int, seed: int = 0, budget: int = 2000) -> MealyMachine:
    """BLE-peripheral-shaped machine.

    ``scan_req`` returns to the advertising state from anywhere and
    ``connection_req`` (re)starts a connection.  The other requests move
    through negotiation states; a request usually gets a fresh response the
    first time and an error or a repeated answer afterwards.  States are
    separated by single inputs, as in the observed peripherals.
    """
    _check_shape(n_states, n_inputs)
    if n_inputs < 2 and n_states > 1:
        raise InvalidArgumentError("a multi-state BLE model needs at least scan and connect inputs")
    inputs = BLE_INPUTS[:n_inputs] if n_inputs <= len(BLE_INPUTS) else (
        BLE_INPUTS + [f"req{k}" for k in range(n_inputs - len(BLE_INPUTS))]
    )
    reset, connect = inputs[0], inputs[1] if n_inputs > 1 else None
    requests = [i for i in inputs if i not in (reset, connect)]
    for attempt in range(budget):
        rng = random.Random(f"ble:{seed}:{attempt}")
        states = [f"s{k}" for k in range(n_states)]
        adv = states[0]
        trans = {q: {} for q in states}
        trans[adv][reset] = (adv, "ADV")
        if connect:
            trans[adv][connect] = (states[1] if n_states > 1 else adv, "CONN")
        for i in requests:
            trans[adv][i] = (adv, "EMPTY")
        # negotiation tree over the connected states
        connected = states[1:]
        for k, q in enumerate(connected[1:], start=2):
            parent = rng.choice(states[1:k])
            free = [i for i in requests if i not in trans[parent]]
            if not free:
                break
            i = rng.choice(free)
            trans[parent][i] = (q, f"{i.upper()[:-4]}_RSP")
        for q in connected:
            trans[q][reset] = (adv, rng.choice(["ADV", "ADV", "DATA"]))
            if connect:
                trans[q][connect] = (states[1], rng.choice(["CONN", "SM_RSP", "CONN"]))
            for i in requests:
                if i in trans[q]:
                    continue
                roll = rng.random()
                if roll < 0.55:
                    trans[q][i] = (q, rng.choice([f"{i.upper()[:-4]}_RSP", "DATA", "EMPTY"]))
                elif roll < 0.8:
                    trans[q][i] = (q, rng.choice(["ERR", "DATA", f"{i.upper()[:-4]}_ERR"]))
                else:
                    trans[q][i] = (rng.choice(connected), rng.choice(["DATA", "EMPTY"]))
        if any(len(row) < n_inputs for row in trans.values()):
            continue
        m = MealyMachine(trans, adv, inputs)
        if not _accept(m, n_states):
            continue
        if all(len(w) == 1 for w in characterization_set(m)):
            return m
    raise BudgetExceededError(f"no BLE-shaped machine with |Q|={n_states}, |I|={n_inputs}")


MQTT_INPUTS = [
    "ConnectC1",
    "ConnectC2",
    "DisconnectC1",
    "DisconnectTCPC1",
    "DisconnectC2",
    "SubscribeC2",
    "UnSubScribeC2",
    "PublishC1",
    "PublishRetainC1",
]


MQTT_OUTPUTS = ["ConnAck", "ConnectionClosed", "SubAck", "UnSubAck", "PubAck", "Empty", "Pub"]


def _mqtt_draw(rng, n_states, inputs, n_twins, n_extra, p_self, p_hub, n_d1):
    core = [f"c{k}" for k in range(n_states - 2 * n_twins)]
    trans = {}
    for q in core:
        trans[q] = {}
        for a in inputs:
            r = rng.random()
            tgt = q if r < p_self else ("c0" if r < p_self + p_hub else rng.choice(core))
            trans[q][a] = [tgt, rng.choice(MQTT_OUTPUTS)]
    entry = rng.sample(inputs, n_d1 + n_twins)
    depth1 = core[1 : 1 + n_d1]
    for q, a in zip(depth1, entry):
        trans["c0"][a][0] = q
    for q in core[1 + n_d1 :]:
        trans[rng.choice(depth1)][rng.choice(inputs)][0] = q
    for j in range(n_twins):
        # w copies s except on one input, where it leads to v; v copies s's
        # successor except for one output
        s = rng.choice(core)
        a = rng.choice(inputs)
        t = trans[s][a][0]
        w, v = f"w{j}", f"v{j}"
        trans[w] = {x: list(e) for x, e in trans[s].items()}
        trans[w][a][0] = v
        trans[v] = {x: list(e) for x, e in trans[t].items()}
        b = rng.choice(inputs)
        trans[v][b][1] = rng.choice([o for o in MQTT_OUTPUTS if o != trans[t][b][1]])
        trans["c0"][entry[n_d1 + j]][0] = w
        for _ in range(n_extra):
            p = rng.choice(core[1:])
            trans[p][rng.choice(inputs)][0] = w
    m = MealyMachine({q: {a: tuple(e) for a, e in row.items()} for q, row in trans.items()}, "c0", inputs)
    return minimize(m)


def mqtt_like(
    n_states: int,
    n_inputs: int = 9,
    seed: int = 0,
    n_twins: int = 2,
    n_extra: int = 1,
    p_self: float = 0.5,
    p_hub: float = 0.4,
    n_d1: int = 5,
    raw_states: int | None = None,
    budget: int = 500,
) -> MealyMachine:
    """Broker-shaped machine: a shallow session graph plus near-duplicate states.

    Most transitions of the core either stay put or fall back to the initial
    (disconnected) state, with ``n_d1`` states one step from it.  Each of the
    ``n_twins`` twins duplicates a core state and differs only one step later
    on a single output, so short random traces rarely tell the two apart.
    ``raw_states`` (default ``n_states``) is the size drawn before
    minimisation.  Attempt 0 draws from ``random.Random(seed)``; retries use
    derived seeds.
    """
    _check_shape(n_states, n_inputs)
    if n_inputs > len(MQTT_INPUTS):
        raise InvalidArgumentError(f"MQTT-shaped models support at most {len(MQTT_INPUTS)} inputs")
    raw = n_states if raw_states is None else raw_states
    if n_inputs < n_d1 + n_twins or raw - 2 * n_twins < n_d1 + 1:
        raise InvalidArgumentError(
            f"|Q|={n_states}, |I|={n_inputs} too small for {n_twins} twins and {n_d1} entry states"
        )
    inputs = list(MQTT_INPUTS[:n_inputs])
    for attempt in range(budget):
        rng = random.Random(seed if attempt == 0 else f"mqtt:{seed}:{attempt}")
        m = _mqtt_draw(rng, raw, inputs, n_twins, n_extra, p_self, p_hub, n_d1)
        if _accept(m, n_states):
            return m
    raise BudgetExceededError(f"no MQTT-shaped machine with |Q|={n_states} within {budget} attempts")
