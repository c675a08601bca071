"""Command-line front end: ``mbestmap solve | generate | experiment``."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .bench import FAMILIES, GeneratorSpec, generate, run_sweep, write_report_csv
from .exceptions import BudgetExhaustedError, InvalidInputError
from .model import load_model, save_model
from .solver import SolveResult, SolverConfig, solve_mbest, write_trace_csv

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_DEFAULTS = SolverConfig()


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=_positive_int, required=True,
                        help="number of best labelings to compute")
    parser.add_argument("--tolerance", type=_positive_float, default=_DEFAULTS.tolerance,
                        help="primal-dual gap that certifies a solution (default %(default)g)")
    parser.add_argument("--max-rounds", type=_positive_int, default=_DEFAULTS.max_rounds,
                        help="outer constraint-management rounds per solve step "
                             "(default %(default)d)")
    parser.add_argument("--inner-iterations", type=_positive_int,
                        default=_DEFAULTS.inner_iterations,
                        help="supergradient iterations per round (default %(default)d)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbestmap",
                                     description="M-best MAP inference for pairwise MRFs.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="compute the M best labelings of a model file")
    solve.add_argument("--model", required=True, help="model JSON file")
    _add_solver_flags(solve)
    solve.add_argument("--trace", help="write the per-iteration trace CSV here")
    solve.add_argument("--output", help="result JSON path (default: stdout)")

    gen = sub.add_parser("generate", help="write a synthetic model file")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--n", type=_positive_int, required=True, help="node count")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--labels", type=_positive_int, help="labels per node (family default)")
    gen.add_argument("--output", required=True, help="model JSON path")

    exp = sub.add_parser("experiment", help="solve generated instances and write a CSV report")
    exp.add_argument("--family", choices=FAMILIES, required=True)
    exp.add_argument("--n", type=_positive_int, nargs="+", required=True,
                     help="one or more node counts")
    exp.add_argument("--seed-start", type=int, default=0)
    exp.add_argument("--seeds", type=_positive_int, default=1,
                     help="instances per node count (default %(default)d)")
    _add_solver_flags(exp)
    exp.add_argument("--no-oracle", action="store_true",
                     help="skip brute-force ground truth")
    exp.add_argument("--no-timing", action="store_true",
                     help="leave the cpu_seconds column empty (byte-reproducible reports)")
    exp.add_argument("--output", required=True, help="report CSV path")
    return parser


def _config(args) -> SolverConfig:
    return SolverConfig(tolerance=args.tolerance, inner_iterations=args.inner_iterations,
                        max_rounds=args.max_rounds)


def result_document(M: int, result: SolveResult,
                    failure: Optional[BudgetExhaustedError] = None) -> dict:
    doc = {
        "m": M,
        "solutions": [
            {"rank": k, "labeling": list(s.labeling), "energy": s.energy,
             "dual_bound": s.dual_bound, "status": s.status}
            for k, s in enumerate(result.solutions, start=1)
        ],
    }
    if failure is not None:
        doc["shortfall"] = {
            "missing": M - len(result.solutions),
            "diagnostic": str(failure),
            "dual_bound": failure.dual_bound,
        }
    return doc


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _solve(args) -> int:
    model = load_model(args.model)
    config = _config(args)
    failure = None
    try:
        result = solve_mbest(model, args.m, config)
    except BudgetExhaustedError as exc:
        failure = exc
        result = exc.partial if exc.partial is not None else SolveResult([])
    _emit(json.dumps(result_document(args.m, result, failure), indent=1) + "\n", args.output)
    if args.trace:
        traces = [(m, s.trace) for m, s in enumerate(result.solutions, start=1)]
        if failure is not None and failure.trace is not None:
            traces.append((len(result.solutions) + 1, failure.trace))
        write_trace_csv(args.trace, traces)
    if failure is not None:
        print(f"mbestmap: budget exhausted at m = {len(result.solutions) + 1}: {failure}",
              file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _generate(args) -> int:
    save_model(generate(GeneratorSpec(args.family, args.n, args.seed, args.labels)),
               args.output)
    return EXIT_OK


def _experiment(args) -> int:
    specs = [GeneratorSpec(args.family, n, seed)
             for n in args.n for seed in range(args.seed_start, args.seed_start + args.seeds)]
    rows = run_sweep(specs, args.m, _config(args), use_oracle=not args.no_oracle,
                     timing=not args.no_timing)
    write_report_csv(args.output, rows)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"solve": _solve, "generate": _generate, "experiment": _experiment}
    try:
        return handlers[args.command](args)
    except BudgetExhaustedError as exc:
        print(f"mbestmap: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInputError, OSError) as exc:
        print(f"mbestmap: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
