"""Command-line front end.

Exit codes: 0 converged / fixture passed, 1 not converged / fixture failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .errors import DimensionMismatch, NonFiniteEntry, SolverInputError, SystemFileError
from .report import emit_report
from .solver import MaxActivationWeight, SolverOptions
from .sysfile import load_system
from .tsk import TSKModel

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _sizes(text):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fuzzycg",
        description="Fuzzy-weighted Polak-Ribiere CG and classical baselines for A x = b.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a system read from a text file")
    p.add_argument("--input", required=True, metavar="FILE")
    p.add_argument("--solver", choices=bench.SOLVERS, default="fcg")
    p.add_argument("--epsilon", type=float, default=1e-10)
    p.add_argument("--max-restarts", type=int, default=100)
    p.add_argument("--fuzzy-model", metavar="FILE", help="TSK model JSON supplying the step weight")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("fixture", help="replay one of the built-in worked examples")
    p.add_argument("--id", type=int, required=True, choices=(1, 2, 3, 4))
    p.add_argument("--solver", choices=bench.SOLVERS, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bench", help="FLOPs-per-iteration scaling study for fcg")
    p.add_argument("--sizes", type=_sizes, default=[16, 32, 64, 128])
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    return parser


def _fcg_options(args):
    weight = None
    if args.fuzzy_model:
        if args.solver != "fcg":
            raise UsageError("--fuzzy-model only applies to --solver fcg")
        try:
            with open(args.fuzzy_model, encoding="utf-8") as fh:
                weight = MaxActivationWeight(TSKModel.from_json(fh.read()))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot load fuzzy model: {exc}") from exc
    try:
        if weight is None:
            return SolverOptions(epsilon=args.epsilon, max_restarts=args.max_restarts)
        return SolverOptions(epsilon=args.epsilon, max_restarts=args.max_restarts, weight_source=weight)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cmd_solve(args, out):
    try:
        system = load_system(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    report = bench.run_solver(args.solver, system, _fcg_options(args))
    print(emit_report(report, "json" if args.json else "text"), file=out)
    return EXIT_OK if report.converged else EXIT_FAIL


def _cmd_fixture(args, out):
    report, verdict = bench.run_fixture(args.id, args.solver)
    if args.json:
        payload = report.to_dict()
        payload["verdict"] = {
            "fixture": verdict.fixture,
            "solver": verdict.solver,
            "passed": verdict.passed,
            "max_error": verdict.max_error,
            "tolerance": verdict.tolerance,
            "reported_iterations": verdict.reported_iterations,
        }
        print(json.dumps(payload, indent=2), file=out)
    else:
        print(emit_report(report, "text"), file=out)
        status = "PASS" if verdict.passed else "FAIL"
        reported = verdict.reported_iterations
        print(
            f"fixture {verdict.fixture} [{verdict.solver}]: {status}  "
            f"max error {verdict.max_error:.3e} (tol {verdict.tolerance:.0e}); "
            f"iterations {report.iterations} (published: {reported if reported is not None else 'n/a'})",
            file=out,
        )
    return EXIT_OK if verdict.passed else EXIT_FAIL


def _cmd_bench(args, out):
    try:
        result = bench.scaling_study(args.sizes, args.trials, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        print(json.dumps(result.to_dict(), indent=2), file=out)
    else:
        print(f"{'n':>6}  {'flops/iter':>14}  {'iterations':>10}", file=out)
        for n, f, it in zip(result.sizes, result.flops_per_iteration, result.iterations):
            print(f"{n:>6}  {f:>14.1f}  {it:>10.2f}", file=out)
        print(f"log-log slope {result.slope:.4f}, intercept {result.intercept:.4f}", file=out)
    return EXIT_OK


COMMANDS = {"solve": _cmd_solve, "fixture": _cmd_fixture, "bench": _cmd_bench}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except SystemFileError as exc:
        print(f"fuzzycg: parse error: {exc}", file=sys.stderr)
    except (UsageError, SolverInputError, DimensionMismatch, NonFiniteEntry) as exc:
        print(f"fuzzycg: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
