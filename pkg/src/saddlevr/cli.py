"""Command line interface.

Subcommands:
  run       solve a configured problem and emit the trace CSV
  schedule  dump (k, a_k, A_k, regime) rows for either step-size rule
  bench     compare the numba and numpy backends
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .runner import ALGOS, PROBLEMS, RunConfig, run_experiment
from .schedule import schedule_rows


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="saddlevr",
                                  description="Saddle-point solvers and benchmark harness")
    top.add_argument("--version", action="version", version=f"saddlevr {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment configuration")
    run.add_argument("--data", metavar="PATH", help="LIBSVM file (optionally .gz)")
    run.add_argument("--problem", choices=PROBLEMS, default="svm-elasticnet")
    run.add_argument("--algo", choices=ALGOS, default="vrpda2")
    run.add_argument("--lambda", dest="lam", type=float, default=1e-4,
                     help="l1 regularization weight (default 1e-4)")
    run.add_argument("--sigma", type=float, default=0.0,
                     help="strong convexity of the regularizer")
    run.add_argument("--lipschitz", type=float, default=None,
                     help="override the Lipschitz constant R/R' "
                          "(tuning grid in the experiments: 0.1 0.25 0.5 0.75 1)")
    run.add_argument("--passes", type=int, default=10)
    run.add_argument("--seed", type=int, required=True,
                     help="64-bit RNG seed (required for reproducibility)")
    run.add_argument("--eval-every", type=float, default=0.25,
                     help="evaluation cadence as a fraction of a pass")
    run.add_argument("--out", metavar="PATH", help="trace CSV path (default stdout)")
    run.add_argument("--fstar", type=float, default=None,
                     help="known/estimated optimal primal value")
    run.add_argument("--delta", type=float, default=None,
                     help="f~* = f_min - delta (default 1e-8 for sigma >= 1e-4, else 1e-13)")
    run.add_argument("--estimate-fstar", action="store_true",
                     help="estimate f~* first by running 30x the iteration budget")
    run.add_argument("--no-normalize", action="store_true",
                     help="skip unit-norm row normalization")
    run.add_argument("--game-n", type=int, default=10, help="box-game rows")
    run.add_argument("--game-d", type=int, default=5, help="box-game columns")

    sched = sub.add_parser("schedule", help="dump the step-size sequence as CSV")
    sched.add_argument("--algo", choices=ALGOS, default="vrpda2")
    sched.add_argument("--k", type=int, default=100, help="number of iterations")
    sched.add_argument("--n", type=int, default=10, help="sample count (vrpda2)")
    sched.add_argument("--sigma", type=float, default=0.0)
    sched.add_argument("--gamma", type=float, default=0.0, help="pda2 only")
    sched.add_argument("--lipschitz", type=float, default=1.0, help="R (pda2) or R' (vrpda2)")
    sched.add_argument("--out", metavar="PATH", help="CSV path (default stdout)")

    bench = sub.add_parser("bench", help="benchmark numba vs numpy backends")
    bench.add_argument("--iters", type=int, default=200_000)
    bench.add_argument("--d", type=int, default=100)
    bench.add_argument("--seed", type=int, default=0)
    return top


def _cmd_run(args) -> int:
    config = RunConfig(
        data=args.data, problem=args.problem, algo=args.algo,
        lam=args.lam, sigma=args.sigma, lipschitz=args.lipschitz,
        passes=args.passes, seed=args.seed, eval_every=args.eval_every,
        out=args.out, fstar=args.fstar, delta=args.delta,
        estimate_fstar=args.estimate_fstar, normalize=not args.no_normalize,
        game_n=args.game_n, game_d=args.game_d,
    )
    if config.out:
        run_experiment(config)
    else:
        run_experiment(config, out_stream=sys.stdout)
    return 0


def _cmd_schedule(args) -> int:
    rows = schedule_rows(args.algo, args.k, n=args.n, sigma=args.sigma,
                         gamma=args.gamma, R=args.lipschitz, rprime=args.lipschitz)
    lines = ["k,a,A,regime"] + [f"{r.k},{r.a!r},{r.A!r},{r.regime}" for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bench(args) -> int:
    from .bench import run_bench

    run_bench(iters=args.iters, d=args.d, seed=args.seed)
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "schedule":
            return _cmd_schedule(args)
        return _cmd_bench(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"saddlevr: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
