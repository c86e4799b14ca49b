import pytest
from hypothesis import strategies as st

from mealylearn import MealyMachine, Trace

# filled by test_acceptance.py, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def fig2c_machine():
    """Two-state machine learned from the two worked-example traces, made
    input-enabled by letting i2 loop on q1 with output o1."""
    return MealyMachine(
        {
            "q0": {"i1": ("q1", "o1"), "i2": ("q0", "o1")},
            "q1": {"i1": ("q0", "o2"), "i2": ("q1", "o1")},
        },
        "q0",
    )


FIG2_TRACES = [
    Trace(("i1", "i1", "i1"), ("o1", "o2", "o1")),
    Trace(("i2", "i1"), ("o1", "o1")),
]


@pytest.fixture
def fig2c():
    return fig2c_machine()


@pytest.fixture
def fig2_traces():
    return list(FIG2_TRACES)


@st.composite
def machines(draw, max_states=8, max_inputs=6, max_outputs=3):
    """Complete machines with up to ``max_states`` states; may be non-minimal
    and may contain unreachable states."""
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_inputs))
    n_out = draw(st.integers(1, max_outputs))
    inputs = [f"i{j}" for j in range(k)]
    trans = {}
    for q in range(n):
        trans[f"q{q}"] = {
            i: (f"q{draw(st.integers(0, n - 1))}", f"o{draw(st.integers(0, n_out - 1))}")
            for i in inputs
        }
    return MealyMachine(trans, "q0", inputs)


@st.composite
def words(draw, inputs, max_len=12):
    return tuple(draw(st.lists(st.sampled_from(list(inputs)), max_size=max_len)))
