"""Command-line interface for the boundary-integral benchmark harness.

Subcommands: solve (emit the boundary density), eval (one point),
grid (full experiment to CSV), circle-oracle (closed-form circle error
field), slope (kernel-expansion convergence fit). Exit codes: 0 ok,
2 config error, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from .closeeval import DEFAULT_THRESHOLD, METHODS, evaluate
from .geometry import BoundaryCurve, ProjectionError
from .harness import (
    ConfigError,
    ErrorField,
    circle_oracle_field,
    fit_slope,
    kernel_slope_data,
    load_config,
    run_experiment,
    solve_config,
)
from .kernels import CoefficientDomainError, FlatPointError, SingularKernelError
from .nystrom import CompatibilityError, IllConditionedError

NUMERICAL_ERRORS = (
    CompatibilityError,
    IllConditionedError,
    ProjectionError,
    SingularKernelError,
    FlatPointError,
    CoefficientDomainError,
    np.linalg.LinAlgError,
    FloatingPointError,
)


def _parser():
    p = argparse.ArgumentParser(
        prog="bie2d",
        description="Laplace layer-potential benchmark: solve, evaluate, report",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, method=False):
        sp.add_argument("--config", required=True, help="TOML experiment config")
        sp.add_argument("--N", type=int, help="override the config's N")
        sp.add_argument("--threshold", type=float, help="override dispatch threshold")
        sp.add_argument("--out", help="output CSV path (default: stdout)")
        if method:
            sp.add_argument(
                "--method", help="comma-separated methods (overrides config)"
            )

    sp = sub.add_parser("solve", help="solve the BIE and emit density samples")
    common(sp)

    sp = sub.add_parser("eval", help="evaluate the potential at one point")
    common(sp, method=True)
    sp.add_argument(
        "--point", nargs=2, type=float, required=True, metavar=("X", "Y")
    )

    sp = sub.add_parser("grid", help="run the configured grid experiment")
    common(sp, method=True)

    sp = sub.add_parser("circle-oracle", help="closed-form circle error field")
    sp.add_argument("--N", type=int, default=128)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--nr", type=int, default=100)
    sp.add_argument("--ntheta", type=int, default=200)
    sp.add_argument("--out", help="output CSV path (default: stdout)")

    sp = sub.add_parser("slope", help="kernel-expansion error slope fit")
    sp.add_argument("--out", help="optional CSV of the per-eps errors")
    return p


def _load(args):
    cfg = load_config(args.config)
    if args.N is not None:
        cfg.N = args.N
        cfg.__post_init__()
    if getattr(args, "threshold", None) is not None:
        cfg.threshold = args.threshold
        cfg.__post_init__()
    if getattr(args, "method", None):
        cfg.methods = [m.strip() for m in args.method.split(",")]
        cfg.__post_init__()
    return cfg


def _emit(lines, out):
    if out is None:
        for line in lines:
            print(line)
    else:
        with open(out, "w") as fh:
            for line in lines:
                fh.write(line + "\n")


def _cmd_solve(args):
    cfg = _load(args)
    sol, _ = solve_config(cfg)

    def lines():
        yield "t,x,y,density,data"
        for i in range(sol.N):
            yield "%.17g,%.17g,%.17g,%.17g,%.17g" % (
                sol.t[i],
                sol.grid.point[i, 0],
                sol.grid.point[i, 1],
                sol.density[i],
                sol.data[i],
            )

    _emit(lines(), args.out)
    return 0


def _cmd_eval(args):
    cfg = _load(args)
    if len(cfg.methods) != 1:
        raise ConfigError("eval takes a single method")
    sol, data = solve_config(cfg)
    x = np.asarray(args.point, dtype=float)
    value = evaluate(sol, x, method=cfg.methods[0], tau=cfg.threshold)
    exact = float(data.exact(x[None, :])[0])
    from .geometry import closest_point

    fr = closest_point(cfg.curve, x, M=max(4 * cfg.N, 512))
    field = ErrorField(
        x=np.array([x[0]]),
        y=np.array([x[1]]),
        tstar=np.array([fr.tstar]),
        eps=np.array([fr.eps]),
        method=np.array([cfg.methods[0]], dtype=object),
        value=np.array([value]),
        exact=np.array([exact]),
    )
    _emit(field.lines(), args.out)
    return 0


def _cmd_grid(args):
    cfg = _load(args)
    field = run_experiment(cfg)
    out = args.out or cfg.out
    if out is None:
        _emit(field.lines(), None)
    else:
        field.write_csv(out)
    for m in cfg.methods:
        print("method %-24s Linf %.6e  L2 %.6e" % (m, field.linf(m), field.l2(m)),
              file=sys.stderr)
    return 0


def _cmd_circle_oracle(args):
    field = circle_oracle_field(a=args.a, N=args.N, nr=args.nr, ntheta=args.ntheta)
    _emit(field.lines(), args.out)
    return 0


def _cmd_slope(args):
    curve = BoundaryCurve.star(1.0, 0.3, 5)
    eps = np.array([1e-4, 1e-3, 1e-2, 1e-1])
    errs = kernel_slope_data(curve, np.pi, eps)
    p = fit_slope(eps, errs)
    if args.out:
        pts = np.zeros((len(eps), 2))
        field = ErrorField(
            x=pts[:, 0],
            y=pts[:, 1],
            tstar=np.full(len(eps), np.pi),
            eps=eps,
            method=np.full(len(eps), "kernel-expansion", dtype=object),
            value=errs,
            exact=np.zeros(len(eps)),
        )
        field.write_csv(args.out)
    print("p = %.6f" % p)
    return 0


def main(argv=None):
    args = _parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "eval": _cmd_eval,
        "grid": _cmd_grid,
        "circle-oracle": _cmd_circle_oracle,
        "slope": _cmd_slope,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as e:
        print("config error: %s" % e, file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as e:
        print("numerical error: %s" % e, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
