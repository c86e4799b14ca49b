"""``mealylearn`` command line.

Exit codes: 0 success, 1 usage or parse error, 2 learning failure or
exhausted budget, 3 determinism violation (``--check-determinism``).
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import experiments as ex
from .corpus import resolve_model
from .dot import load_dot, save_dot
from .errors import BudgetExceededError, MealyError, NonDeterminismError
from .sampling import write_traces
from .synth import ble_like, mqtt_like, random_machine

log = logging.getLogger("mealylearn")

EXIT_OK, EXIT_USAGE, EXIT_LEARNING, EXIT_DETERMINISM = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for learning failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def default_lengths(n_states: int, points: int = 4) -> list:
    """Evenly spaced mean lengths from 3 up to ``3 * |Q|``."""
    hi = max(3, 3 * n_states)
    if points == 1 or hi == 3:
        return [3.0]
    return [round(3 + k * (hi - 3) / (points - 1), 2) for k in range(points)]


DEFAULT_FACTORS = list(range(1, 10))


def _out_path(args, default_name):
    if args.out is None:
        return None
    out = Path(args.out)
    return out / default_name if out.suffix == "" else out


def _model_name(spec: str) -> str:
    return Path(spec).stem if spec.endswith(".dot") else spec


def _emit(record, args, default_name):
    path = _out_path(args, default_name)
    if path is not None:
        ex.write_record(record, path)
        log.info("wrote %s", path)
    _print_summary(record)


def _print_summary(record):
    agg = record.aggregate()
    parts = []
    for c, v in agg.items():
        if c == "wall_time":
            continue
        if isinstance(v, tuple):
            parts.append(f"{c}={v[0]:.2f} ({v[1]:.2f})")
        else:
            parts.append(f"{c}={v}/{len(record.rows)}")
    print(f"{record.model} [{record.kind}] " + " ".join(parts))


def _determinism(args, run):
    """Run twice when asked and compare the rows."""
    first = run()
    if getattr(args, "check_determinism", False):
        second = run()
        if ex.comparable(first) != ex.comparable(second):
            raise _Nondeterministic(f"{first.model}: repeated run produced different rows")
    return first


class _Nondeterministic(Exception):
    pass


def cmd_learn_active(args):
    gt = resolve_model(args.model)
    name = _model_name(args.model)
    rec = _determinism(args, lambda: ex.run_active(
        gt, name, args.reps, args.seed, args.walks, args.walk_len, args.jobs))
    if not all(rec.values("isomorphic")):
        raise BudgetExceededError(f"{name}: learned model differs from the system")
    if args.dot_out:
        save_dot(rec.extra["hypothesis"], args.dot_out)
    _emit(rec, args, f"{name}-active.csv")


def cmd_learn_passive(args):
    gt = resolve_model(args.model)
    name = _model_name(args.model)
    rec = _determinism(args, lambda: ex.run_passive(
        gt, args.sample, name, args.reps, args.seed, jobs=args.jobs))
    _emit(rec, args, f"{name}-sample{args.sample}.csv")


def cmd_heatmap(args):
    gt = resolve_model(args.model)
    name = _model_name(args.model)
    factors = args.factors or DEFAULT_FACTORS
    lengths = args.lengths or default_lengths(len(gt))
    result = ex.run_heatmap(gt, factors, lengths, args.reps, args.seed, jobs=args.jobs)
    if getattr(args, "check_determinism", False):
        again = ex.run_heatmap(gt, factors, lengths, args.reps, args.seed, jobs=args.jobs)
        if again.cells != result.cells:
            raise _Nondeterministic(f"{name}: repeated heatmap differs")
    path = _out_path(args, f"{name}-heatmap.csv")
    if path is not None:
        ex.write_heatmap(result, path)
    print("mean_len " + " ".join(f"x{f:>6}" for f in factors))
    for length, row in zip(lengths, result.means):
        print(f"{length:8.2f} " + " ".join(f"{v:7.2f}" for v in row))


def cmd_optimize(args):
    gt = resolve_model(args.model)
    name = _model_name(args.model)
    rec = ex.run_optimize(gt, name, args.seed)
    if args.traces_out:
        write_traces(rec.extra["sample"], args.traces_out)
    _emit(rec, args, f"{name}-optimize.csv")


def cmd_cache(args):
    gt = resolve_model(args.model)
    name = _model_name(args.model)
    rec = _determinism(args, lambda: ex.run_cache(gt, name, args.reps, args.seed, args.priming))
    _emit(rec, args, f"{name}-cache-{args.priming}.csv")


def cmd_conformance(args):
    gt = resolve_model(args.model)
    learned = load_dot(args.learned, partial=True)
    rec = ex.run_conformance(learned, gt, _model_name(args.model), args.seed)
    path = _out_path(args, f"{_model_name(args.model)}-conformance.csv")
    if path is not None:
        ex.write_record(rec, path, summary=False)
    for row in rec.rows:
        print(f"{row['suite']}: {row['passed']}/{row['total']} ({row['percentage']:.2f}%)")


def cmd_synth_model(args):
    gen = {"random": random_machine, "ble": ble_like, "mqtt": mqtt_like}[args.family]
    m = gen(args.states, args.inputs, seed=args.seed)
    if args.out is None:
        raise UsageError("synth-model needs --out")
    save_dot(m, args.out)
    print(f"wrote {args.out}: |Q|={len(m)} |I|={len(m.inputs)}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", help="DOT file or corpus model name")
    common.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    common.add_argument("--reps", type=int, default=5, help="repetitions (default 5)")
    common.add_argument("--out", help="CSV file, or a directory for the default file name")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for repetitions")
    common.add_argument("--check-determinism", action="store_true",
                        help="run twice and exit 3 if the rows differ")

    p = _Parser(prog="mealylearn", description="Active and passive Mealy machine learning experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("learn-active", parents=[common], help="L* baseline")
    s.add_argument("--walks", type=int, default=25, help="random walks per state (default 25)")
    s.add_argument("--walk-len", type=int, default=30, help="steps per walk (default 30)")
    s.add_argument("--dot-out", help="write the learned model of the first repetition")
    s.set_defaults(func=cmd_learn_active)

    s = sub.add_parser("learn-passive", parents=[common], help="RPNI on a random sample")
    s.add_argument("--sample", type=int, choices=(1, 2, 3), default=1)
    s.set_defaults(func=cmd_learn_passive)

    s = sub.add_parser("heatmap", parents=[common], help="size x length grid")
    s.add_argument("--factors", type=_int_list, help="size factors, e.g. 1,3,6,9 (default 1..9)")
    s.add_argument("--lengths", type=_float_list,
                   help="mean trace lengths (default 4 points from 3 to 3|Q|)")
    s.set_defaults(func=cmd_heatmap)

    s = sub.add_parser("optimize", parents=[common], help="optimized sample from the model")
    s.add_argument("--traces-out", help="write the optimized sample as a trace file")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("cache", parents=[common], help="L* with a primed query cache")
    s.add_argument("--priming", choices=("sample1", "self", "empty"), default="sample1")
    s.set_defaults(func=cmd_cache)

    s = sub.add_parser("conformance", parents=[common], help="score a learned model")
    s.add_argument("--learned", required=True, help="learned DOT file (may be partial)")
    s.set_defaults(func=cmd_conformance)

    s = sub.add_parser("synth-model", parents=[common], help="generate a random minimal model")
    s.add_argument("--states", type=int, required=True)
    s.add_argument("--inputs", type=int, required=True)
    s.add_argument("--family", choices=("random", "ble", "mqtt"), default="random")
    s.set_defaults(func=cmd_synth_model)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command != "synth-model" and not args.model:
        parser.error(f"{args.command} needs --model")
    try:
        args.func(args)
    except (_Nondeterministic, NonDeterminismError) as e:
        print(f"determinism violation: {e}", file=sys.stderr)
        return EXIT_DETERMINISM
    except BudgetExceededError as e:
        print(f"learning failed: {e}", file=sys.stderr)
        return EXIT_LEARNING
    except (MealyError, UsageError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
