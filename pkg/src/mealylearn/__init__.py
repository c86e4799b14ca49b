"""Active (L*) and passive (RPNI) learning of Mealy machines, with the
sampling, conformance and experiment tooling used to compare them."""
from .conformance import (
    ConformanceReport,
    OracleConfig,
    StateCoverageOracle,
    TestSuite,
    conformance_pct,
    gen_coverage_suite,
    gen_random_suite,
    run_with_sink,
    state_coverage_oracle,
)
from .corpus import CorpusEntry, get_model, load_corpus, load_model
from .dot import load_dot, parse_dot, save_dot, serialize_dot
from .errors import (
    BudgetExceededError,
    DotSyntaxError,
    InvalidArgumentError,
    InvalidCounterexampleError,
    MealyError,
    NonDeterminismError,
    NotInputEnabledError,
    NotMinimalError,
    TableNotClosedError,
    UnreachableStateError,
)
from .estimators import LStarMealyLearner, RPNIMealyLearner
from .experiments import ExperimentSpec, RunRecord
from .lstar import (
    LearningStats,
    ObservationTable,
    build_hypothesis,
    learn_lstar,
    make_closed,
    process_counterexample,
)
from .mealy import (
    SINK_OUTPUT,
    MealyMachine,
    PartialMealy,
    Trace,
    Verdict,
    access_sequences,
    characterization_set,
    complete_with_sink,
    equivalence,
    is_minimal,
    isomorphic,
    run,
    step,
)
from .pta import Pta
from .rpni import build_pta, rpni, run_rpni, try_merge
from .sampling import (
    SampleConfig,
    SampleSet,
    optimize_sample,
    prefix_reduce,
    random_sample,
    read_traces,
    sample1_config,
    sample2_config,
    sample3_config,
    write_traces,
)
from .sul import QueryStats, SulSession
from .synth import ble_like, mqtt_like, random_machine

__version__ = "0.1.0"
