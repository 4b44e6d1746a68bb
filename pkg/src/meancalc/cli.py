"""Command-line interface.

Every operation is exposed as a subcommand with reproducible flags; output
is text, JSON or CSV, and report-producing subcommands can additionally
render a figure to a file with ``--plot``.

Exit codes: 0 success, 1 usage error (bad flags or unparseable expression
arguments), 2 evaluation/data error, 3 failed pair verification.  Errors
print one line to stderr of the form ``meancalc: error[CODE]: message``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .expr import EvalError, ParseError, contains_variable, evaluate, parse, to_source
from .functions import from_expression
from .mean_integral import (
    antiderivative_grid,
    convergence_study,
    ftc_evaluate,
    function_mean,
    integral,
)
from .derivative import derivative_at, verify_da_pair
from .sampling import DEFAULT_SEED, Interval, SamplePlan
from .tabular import CsvError, load_csv, load_csv_path, tabular_integral, tabular_mean

SEED_ENV_VAR = "MEANCALC_SEED"

DEFAULT_CONVERGE_SIZES = (10, 100, 1000, 10_000, 100_000, 1_000_000)


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # route argparse errors through our exit codes
        raise UsageError(message)


# --------------------------------------------------------------------------
# Flag value converters
# --------------------------------------------------------------------------

def constant(text: str) -> float:
    """A numeric flag value; any constant expression works, e.g. ``pi`` or ``2*pi``."""
    try:
        tree = parse(text)
        if contains_variable(tree):
            raise argparse.ArgumentTypeError(
                f"{text!r} contains the variable x; a constant is required")
        return evaluate(tree, 0.0)
    except (ParseError, EvalError) as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def seed_value(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def int_list(text: str) -> tuple[int, ...]:
    return tuple(positive_int(part) for part in text.split(","))


def strategy_list(text: str) -> tuple[str, ...]:
    out = tuple(part.strip() for part in text.split(","))
    for s in out:
        if s not in ("uniform", "random"):
            raise argparse.ArgumentTypeError(
                f"unknown strategy {s!r}; expected uniform and/or random")
    return out


def number_list(text: str) -> tuple[float, ...]:
    return tuple(constant(part) for part in text.split(","))


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return seed_value(raw)
    except argparse.ArgumentTypeError as err:
        raise UsageError(f"{SEED_ENV_VAR}: {err}") from None


def _build_plan(args, interval: Interval) -> SamplePlan:
    strategy = args.strategy
    points = getattr(args, "points", None)
    if points and strategy != "convenience":
        raise UsageError("--points requires --strategy convenience")
    if strategy == "uniform":
        return SamplePlan.uniform(interval, args.n)
    if strategy == "random":
        return SamplePlan.random(interval, args.n, _resolve_seed(args))
    if not points:
        raise UsageError("--strategy convenience requires --points")
    return SamplePlan.convenience(interval, points)


def _load_table(path: str):
    if path == "-":
        return load_csv(sys.stdin, source="<stdin>")
    return load_csv_path(Path(path))


# --------------------------------------------------------------------------
# Output rendering
# --------------------------------------------------------------------------

def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _emit_csv(header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _emit_kv(pairs: list[tuple[str, object]]) -> None:
    width = max(len(k) for k, _ in pairs)
    for key, value in pairs:
        print(f"{key:<{width}}  {value!r}" if isinstance(value, float)
              else f"{key:<{width}}  {value}")


def _notice(message: str) -> None:
    print(f"meancalc: {message}", file=sys.stderr)


def _maybe_plot(args, render) -> None:
    path = getattr(args, "plot", None)
    if path:
        from . import plots  # deferred: matplotlib is slow to import

        saved = render(plots, path)
        _notice(f"figure written to {saved}")


def _mean_output(args, est, context: dict) -> None:
    if args.format == "json":
        _emit_json({"estimate": est.to_dict(), **context})
    elif args.format == "csv":
        _emit_csv(["mean", "n", "sample_stddev", "stderr"],
                  [[repr(est.mean), est.n, repr(est.sample_stddev), repr(est.stderr)]])
    else:
        _emit_kv([("mean", est.mean), ("n", est.n),
                  ("sample_stddev", est.sample_stddev), ("stderr", est.stderr)])


def _integral_output(args, result, context: dict) -> None:
    if args.format == "json":
        _emit_json({"integral": result.to_dict(), **context})
    elif args.format == "csv":
        m = result.mean
        _emit_csv(
            ["value", "error_bar", "a", "b", "n", "mean", "sample_stddev", "stderr"],
            [[repr(result.value), repr(result.error_bar), repr(result.interval.a),
              repr(result.interval.b), m.n, repr(m.mean), repr(m.sample_stddev),
              repr(m.stderr)]],
        )
    else:
        m = result.mean
        _emit_kv([
            ("value", result.value),
            ("error_bar", result.error_bar),
            ("interval", str(result.interval)),
            ("n", m.n),
            ("mean", m.mean),
            ("sample_stddev", m.sample_stddev),
            ("stderr", m.stderr),
        ])


# --------------------------------------------------------------------------
# Subcommand handlers
# --------------------------------------------------------------------------

def _cmd_mean(args) -> int:
    if args.data and args.fn:
        raise UsageError("--fn and --data are mutually exclusive")
    if args.data:
        tf = _load_table(args.data)
        est = tabular_mean(tf, spacing_weighted=args.spacing_weighted)
        _mean_output(args, est, {"source": tf.source, "rows": len(tf)})
        return 0
    if not args.fn:
        raise UsageError("one of --fn or --data is required")
    if args.a is None or args.b is None:
        raise UsageError("--fn requires --a and --b")
    handle = from_expression(args.fn)
    plan = _build_plan(args, Interval(args.a, args.b))
    est = function_mean(handle, plan, spacing_weighted=args.spacing_weighted)
    _mean_output(args, est, {"function": handle.label, "plan": plan.to_dict()})
    return 0


def _cmd_integrate(args) -> int:
    handle = from_expression(args.fn)
    plan = _build_plan(args, Interval(args.a, args.b))
    result = integral(handle, plan, spacing_weighted=args.spacing_weighted)
    _integral_output(args, result, {"function": handle.label, "plan": plan.to_dict()})
    return 0


def _cmd_antiderivative(args) -> int:
    handle = from_expression(args.fn)
    template = SamplePlan.uniform(Interval(args.a, args.x_max), args.n) \
        if args.strategy == "uniform" else \
        SamplePlan.random(Interval(args.a, args.x_max), args.n, _resolve_seed(args))
    grid = antiderivative_grid(handle, args.a, args.x_max, args.grid, template)
    if args.format == "json":
        _emit_json({"grid": grid.to_dict(), "function": handle.label})
    elif args.format == "csv":
        _emit_csv(["x", "F"], [[repr(x), repr(v)] for x, v in grid.rows()])
    else:
        for x, v in grid.rows():
            print(f"{x!r} {v!r}")
    _maybe_plot(args, lambda plots, path:
                plots.save_antiderivative_figure(grid, path, label=handle.label))
    return 0


def _cmd_ftc(args) -> int:
    tree = parse(args.F)
    value = ftc_evaluate(tree, args.c, args.d)
    if args.format == "json":
        _emit_json({"value": value, "F": to_source(tree), "c": args.c, "d": args.d})
    elif args.format == "csv":
        _emit_csv(["value"], [[repr(value)]])
    else:
        print(repr(value))
    return 0


def _cmd_derivative(args) -> int:
    handle = from_expression(args.fn)
    est = derivative_at(handle, args.at, h0=args.h0, ratio=args.ratio,
                        tol=args.tol, max_iter=args.max_iter,
                        symmetric=args.symmetric)
    if args.format == "json":
        _emit_json({"derivative": est.to_dict(), "function": handle.label})
    elif args.format == "csv":
        _emit_csv(["k", "h", "slope"],
                  [[k, repr(st.h), repr(st.slope)] for k, st in enumerate(est.steps)])
    else:
        _emit_kv([
            ("value", est.value),
            ("point", est.point),
            ("converged", est.converged),
            ("achieved_delta", est.achieved_delta),
            ("steps", len(est.steps)),
        ])
        print("trace:")
        for k, st in enumerate(est.steps):
            print(f"  {k:>3}  h={st.h!r}  slope={st.slope!r}")
    _maybe_plot(args, lambda plots, path:
                plots.save_derivative_figure(est, path, label=handle.label))
    return 0


def _cmd_dapair(args) -> int:
    f = from_expression(args.f)
    F = from_expression(args.F)
    interval = Interval(args.a, args.b)
    template = SamplePlan.uniform(interval, args.n) if args.strategy == "uniform" \
        else SamplePlan.random(interval, args.n, _resolve_seed(args))
    report = verify_da_pair(f, F, interval, grid_count=args.grid,
                            deriv_tol=args.deriv_tol, int_tol=args.int_tol,
                            int_plan=template)
    if args.format == "json":
        _emit_json(report.to_dict())
    elif args.format == "csv":
        _emit_csv(
            ["direction", "max_error", "tolerance", "verdict"],
            [["derivative", repr(report.max_deriv_error), repr(report.deriv_tol),
              "pass" if report.deriv_ok else "fail"],
             ["integral", repr(report.max_integral_error), repr(report.integral_tol),
              "pass" if report.integral_ok else "fail"]],
        )
    else:
        print(f"pair f={report.f_label}  F={report.F_label}  "
              f"interval {report.interval}  grid {len(report.grid)}  "
              f"n per node {report.samples_per_node}")
        print(f"{'direction':<12}{'max error':<16}{'tolerance':<12}verdict")
        for direction, err, tol, ok in (
            ("derivative", report.max_deriv_error, report.deriv_tol, report.deriv_ok),
            ("integral", report.max_integral_error, report.integral_tol, report.integral_ok),
        ):
            print(f"{direction:<12}{err:<16.6g}{tol:<12g}{'PASS' if ok else 'FAIL'}")
    _maybe_plot(args, lambda plots, path: plots.save_dapair_figure(report, path))
    if not report.ok:
        _err("verdict", f"pair ({report.f_label}, {report.F_label}) failed verification")
        return 3
    return 0


def _cmd_converge(args) -> int:
    handle = from_expression(args.fn)
    report = convergence_study(
        handle,
        Interval(args.a, args.b),
        sizes=args.sizes,
        strategies=args.strategies,
        trials=args.trials,
        base_seed=_resolve_seed(args),
        reference=args.reference,
        label=handle.label,
    )
    if args.format == "json":
        _emit_json(report.to_dict())
    elif args.format == "csv":
        header = ["row"] + [str(n) for n in report.sizes]
        rows = [[name] + cells for name, cells in report.display_rows()]
        rows += [[f"{name} (full)"] + [repr(v) for v in cells]
                 for name, cells in report.full_rows()]
        _emit_csv(header, rows)
    else:
        names = ["n"] + [name for name, _ in report.display_rows()]
        width = max(len(s) for s in names) + 2
        print(f"{'n':<{width}}" + "".join(f"{n:>10}" for n in report.sizes))
        for name, cells in report.display_rows():
            print(f"{name:<{width}}" + "".join(f"{c:>10}" for c in cells))
    _maybe_plot(args, lambda plots, path: plots.save_convergence_figure(report, path))
    return 0


def _cmd_table(args) -> int:
    tf = _load_table(args.file)
    if args.table_op == "mean":
        est = tabular_mean(tf, spacing_weighted=args.spacing_weighted)
        _mean_output(args, est, {"source": tf.source, "rows": len(tf)})
    else:
        result = tabular_integral(tf, spacing_weighted=args.spacing_weighted)
        _integral_output(args, result, {"source": tf.source, "rows": len(tf)})
    _maybe_plot(args, lambda plots, path: plots.save_tabular_figure(tf, path))
    return 0


# --------------------------------------------------------------------------
# Parser construction and entry point
# --------------------------------------------------------------------------

def _add_format(p, *, plot: bool = False) -> None:
    p.add_argument("--format", choices=("text", "json", "csv"), default="text",
                   help="output format (default: text)")
    if plot:
        p.add_argument("--plot", metavar="FILE",
                       help="also render a figure to FILE (format from its extension)")


def _add_strategy(p, *, convenience: bool = False, n_default: int = 1000) -> None:
    choices = ("uniform", "random") + (("convenience",) if convenience else ())
    p.add_argument("--strategy", choices=choices, default="uniform",
                   help="sampling strategy (default: uniform)")
    p.add_argument("--n", type=positive_int, default=n_default,
                   help=f"sample count (default: {n_default})")
    p.add_argument("--seed", type=seed_value, default=None,
                   help=f"random-sampling seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})")
    if convenience:
        p.add_argument("--points", type=number_list, default=None,
                       help="comma-separated points for --strategy convenience")


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="meancalc",
        description="Calculus from averages: integrals as width times the "
                    "sampled mean, derivatives as limits of secant slopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("mean", help="sampled mean of a function or data file")
    p.add_argument("--fn", help="function formula, e.g. 'x^2'")
    p.add_argument("--data", metavar="FILE", help="two-column CSV ('-' for stdin)")
    p.add_argument("--a", type=constant, default=None, help="interval start")
    p.add_argument("--b", type=constant, default=None, help="interval end")
    _add_strategy(p, convenience=True)
    p.add_argument("--spacing-weighted", action="store_true",
                   help="weight samples by local spacing (uneven coverage)")
    _add_format(p)
    p.set_defaults(handler=_cmd_mean)

    p = sub.add_parser("integrate", help="integral over [a, b]")
    p.add_argument("--fn", required=True)
    p.add_argument("--a", type=constant, required=True)
    p.add_argument("--b", type=constant, required=True)
    _add_strategy(p, convenience=True)
    p.add_argument("--spacing-weighted", action="store_true")
    _add_format(p)
    p.set_defaults(handler=_cmd_integrate)

    p = sub.add_parser("antiderivative",
                       help="tabulate F(x) = integral from a to x on a grid")
    p.add_argument("--fn", required=True)
    p.add_argument("--a", type=constant, required=True)
    p.add_argument("--x-max", type=constant, required=True)
    p.add_argument("--grid", type=positive_int, default=20, help="node count (default: 20)")
    _add_strategy(p)
    _add_format(p, plot=True)
    p.set_defaults(handler=_cmd_antiderivative)

    p = sub.add_parser("ftc", help="evaluate an integral as F(d) - F(c)")
    p.add_argument("--F", required=True, help="antiderivative formula")
    p.add_argument("--c", type=constant, required=True)
    p.add_argument("--d", type=constant, required=True)
    _add_format(p)
    p.set_defaults(handler=_cmd_ftc)

    p = sub.add_parser("derivative", help="derivative from shrinking secant slopes")
    p.add_argument("--fn", required=True)
    p.add_argument("--at", type=constant, required=True, help="evaluation point")
    p.add_argument("--h0", type=constant, default=0.1, help="initial step (default: 0.1)")
    p.add_argument("--ratio", type=constant, default=0.5,
                   help="step shrink factor in (0,1) (default: 0.5)")
    p.add_argument("--tol", type=constant, default=1e-8,
                   help="successive-slope tolerance (default: 1e-8)")
    p.add_argument("--max-iter", type=positive_int, default=40)
    p.add_argument("--symmetric", action="store_true",
                   help="use centered secants instead of forward ones")
    _add_format(p, plot=True)
    p.set_defaults(handler=_cmd_derivative)

    p = sub.add_parser("dapair", help="verify a derivative-antiderivative pair")
    p.add_argument("--f", required=True, help="claimed derivative")
    p.add_argument("--F", required=True, help="claimed antiderivative")
    p.add_argument("--a", type=constant, required=True)
    p.add_argument("--b", type=constant, required=True)
    p.add_argument("--grid", type=positive_int, default=25)
    p.add_argument("--deriv-tol", type=constant, default=1e-4)
    p.add_argument("--int-tol", type=constant, default=2e-3)
    _add_strategy(p, n_default=100_000)
    _add_format(p, plot=True)
    p.set_defaults(handler=_cmd_dapair)

    p = sub.add_parser("converge",
                       help="sampled-mean convergence table over growing n")
    p.add_argument("--fn", required=True)
    p.add_argument("--a", type=constant, required=True)
    p.add_argument("--b", type=constant, required=True)
    p.add_argument("--sizes", type=int_list, default=DEFAULT_CONVERGE_SIZES,
                   help="comma-separated sample sizes (default: 10,...,1000000)")
    p.add_argument("--strategies", type=strategy_list, default=("uniform", "random"),
                   help="comma-separated subset of uniform,random")
    p.add_argument("--trials", type=positive_int, default=3,
                   help="random trials (default: 3)")
    p.add_argument("--seed", type=seed_value, default=None,
                   help=f"base seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})")
    p.add_argument("--reference", type=constant, default=None,
                   help="known true mean, shown as a reference row")
    _add_format(p, plot=True)
    p.set_defaults(handler=_cmd_converge)

    p = sub.add_parser("table", help="statistics of a tabular data file")
    tsub = p.add_subparsers(dest="table_op", required=True, metavar="OP")
    for op in ("mean", "integrate"):
        tp = tsub.add_parser(op)
        tp.add_argument("file", metavar="FILE", help="two-column CSV ('-' for stdin)")
        tp.add_argument("--spacing-weighted", action="store_true")
        _add_format(tp, plot=True)
        tp.set_defaults(handler=_cmd_table)

    return parser


def _err(code: str, message) -> None:
    print(f"meancalc: error[{code}]: {message}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except UsageError as err:
        _err("usage", err)
        return 1
    except ParseError as err:
        _err("parse", err)
        return 1
    except EvalError as err:
        _err("eval", err)
        return 2
    except CsvError as err:
        _err("data", err)
        return 2
    except OSError as err:
        _err("file", err)
        return 2
    except ValueError as err:
        _err("domain", err)
        return 2


if __name__ == "__main__":
    sys.exit(main())
