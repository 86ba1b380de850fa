"""Experiment harness: dataset prep, f* estimation protocol, CSV trace emission.

The trace schema is fixed: "pass,iter,f_last,f_avg,gap_last,gap_avg,nnz_last,
nnz_avg,wall_ms".  For ERM problems the gap columns are function-value gaps
against an estimated f~* (NaN when no estimate is configured); for box games
they are the exact primal-dual sup-gap.  Reruns with identical config and seed
reproduce the f columns bit-for-bit; wall time is excluded from that guarantee.
"""

from __future__ import annotations

import csv
import gzip
import io
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataio import LabeledDataset, normalize_rows, parse_libsvm
from .pda2 import pda2_run
from .problem import SaddleProblem, box_game_problem, lad_problem, svm_elastic_net_problem
from .vrpda2 import vr_run

log = logging.getLogger(__name__)

NNZ_THRESHOLD = 1e-7
CSV_HEADER = "pass,iter,f_last,f_avg,gap_last,gap_avg,nnz_last,nnz_avg,wall_ms"
PROBLEMS = ("svm-elasticnet", "lad", "box-game")
ALGOS = ("vrpda2", "pda2")


@dataclass(frozen=True)
class RunConfig:
    data: str | None = None
    problem: str = "svm-elasticnet"
    algo: str = "vrpda2"
    lam: float = 1e-4
    sigma: float = 0.0
    lipschitz: float | None = None    # overrides R (pda2) / R' (vrpda2)
    passes: int = 10
    seed: int = 0
    eval_every: float = 0.25          # fraction of a pass between evaluations
    out: str | None = None
    fstar: float | None = None
    delta: float | None = None        # None -> by-sigma default
    estimate_fstar: bool = False
    normalize: bool = True
    game_n: int = 10                  # box-game dimensions (no dataset file)
    game_d: int = 5

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}")
        if self.algo not in ALGOS:
            raise ValueError(f"algo must be one of {ALGOS}")
        if self.passes < 1:
            raise ValueError("passes must be positive")
        if self.lam < 0 or self.sigma < 0:
            raise ValueError("lambda and sigma must be nonnegative")
        if not (0 < self.eval_every <= self.passes):
            raise ValueError("eval-every must be a positive fraction of a pass")


@dataclass(frozen=True)
class TraceRecord:
    pass_no: float
    iter: int
    f_last: float
    f_avg: float
    gap_last: float
    gap_avg: float
    nnz_last: int
    nnz_avg: int
    wall_ms: float

    def csv_row(self) -> str:
        return ",".join([
            repr(self.pass_no), str(self.iter),
            repr(self.f_last), repr(self.f_avg),
            repr(self.gap_last), repr(self.gap_avg),
            str(self.nnz_last), str(self.nnz_avg),
            f"{self.wall_ms:.3f}",
        ])


def nnz(x: np.ndarray, threshold: float = NNZ_THRESHOLD) -> int:
    """Count of coordinates with |x_j| strictly above the threshold."""
    return int(np.sum(np.abs(x) > threshold))


def default_delta(sigma: float) -> float:
    """delta for f~* = f_min - delta; smaller sigma reaches lower gaps."""
    return 1e-8 if sigma >= 1e-4 else 1e-13


def open_dataset(path: str, n_cols: int | None = None) -> LabeledDataset:
    """Read a LIBSVM file; .gz handled transparently."""
    p = Path(path)
    if p.suffix == ".gz":
        with gzip.open(p, "rt") as fh:
            return parse_libsvm(fh, n_cols=n_cols)
    with open(p, "rt") as fh:
        return parse_libsvm(fh, n_cols=n_cols)


def build_problem(config: RunConfig, dataset: LabeledDataset | None = None) -> SaddleProblem:
    if config.problem == "box-game":
        rng = np.random.default_rng(config.seed)
        rows = rng.normal(size=(config.game_n, config.game_d))
        return box_game_problem(rows, sigma=config.sigma, R=config.lipschitz)
    if dataset is None:
        if config.data is None:
            raise ValueError(f"problem {config.problem!r} needs --data")
        dataset = open_dataset(config.data)
    if config.normalize:
        dataset = LabeledDataset(matrix=normalize_rows(dataset.matrix),
                                 labels=dataset.labels)
    if config.problem == "svm-elasticnet":
        return svm_elastic_net_problem(dataset, config.lam, config.sigma,
                                       lipschitz=config.lipschitz)
    return lad_problem(dataset, config.lam, config.sigma, lipschitz=config.lipschitz)


def _evaluators(problem: SaddleProblem, fstar: float | None):
    """(f, gap) callables; gap is the exact sup-gap for box games, else f - f~*."""
    if problem.primal.kind == "box":
        def f_value(x, _y):
            return problem.primal_value(x)

        def gap_value(x, y):
            return problem.sup_gap(x, y)
    else:
        def f_value(x, _y):
            return problem.primal_value(x)

        def gap_value(x, _y):
            return f_value(x, None) - fstar if fstar is not None else math.nan
    return f_value, gap_value


def _iters_for(config: RunConfig, problem: SaddleProblem, passes: int) -> tuple[int, int]:
    """(total iterations, eval period in iterations) for the configured algorithm."""
    if config.algo == "vrpda2":
        total = max(2, passes * problem.n)
        period = max(1, round(config.eval_every * problem.n))
    else:
        total = passes
        period = max(1, round(config.eval_every))
    return total, period


def _trace_one(config: RunConfig, problem: SaddleProblem, passes: int,
               fstar: float | None, collect) -> None:
    """Run the configured algorithm, feeding TraceRecords to `collect`."""
    f_value, gap_value = _evaluators(problem, fstar)
    total, period = _iters_for(config, problem, passes)
    if problem.primal.kind == "box":
        # zeros would be the saddle point of a symmetric game; start at a corner
        x0 = problem.primal.hi.copy()
        y0 = problem.y_hi.copy()
    else:
        x0 = np.zeros(problem.d)
        y0 = np.zeros(problem.n)
    per_pass = problem.n if config.algo == "vrpda2" else 1

    def hook(view):
        f_last = f_value(view.x_last, view.y_last)
        f_avg = f_value(view.x_avg, view.y_avg)
        collect(TraceRecord(
            pass_no=view.k / per_pass, iter=view.k,
            f_last=f_last, f_avg=f_avg,
            gap_last=gap_value(view.x_last, view.y_last),
            gap_avg=gap_value(view.x_avg, view.y_avg),
            nnz_last=nnz(view.x_last), nnz_avg=nnz(view.x_avg),
            wall_ms=view.elapsed_s * 1e3,
        ))

    if config.algo == "vrpda2":
        check_every = 100 if os.environ.get("SADDLEVR_DEBUG_Z") else 0
        vr_run(problem, x0, y0, total, config.seed,
               eval_every=period, hook=hook, check_every=check_every)
    else:
        pda2_run(problem, x0, y0, total, hook=lambda v: hook(v) if v.k % period == 0 or v.k == total else None)


def estimate_fstar(config: RunConfig, problem: SaddleProblem | None = None,
                   budget_factor: int = 30) -> float:
    """f~* = f_min - delta, with f_min the lowest primal value seen over last and
    average iterates during a budget_factor-times-longer run of the configured
    algorithm."""
    if problem is None:
        problem = build_problem(config)
    delta = config.delta if config.delta is not None else default_delta(config.sigma)
    if delta == 0.0:
        log.warning("delta = 0: reported gaps may reach exactly zero")
    best = math.inf

    def collect(rec: TraceRecord):
        nonlocal best
        best = min(best, rec.f_last, rec.f_avg)

    _trace_one(config, problem, config.passes * budget_factor, None, collect)
    if not math.isfinite(best):
        raise RuntimeError("estimation run produced no finite primal values")
    return best - delta


def run_experiment(config: RunConfig, problem: SaddleProblem | None = None,
                   out_stream: io.TextIOBase | None = None) -> list[TraceRecord]:
    """Emit TraceRecords at the evaluation cadence; rows are flushed as produced."""
    if problem is None:
        problem = build_problem(config)
    fstar = config.fstar
    if fstar is None and config.estimate_fstar:
        fstar = estimate_fstar(config, problem)
        log.info("estimated f~* = %r", fstar)

    close_me = None
    if out_stream is None and config.out:
        close_me = out_stream = open(config.out, "w", newline="\n")
    records: list[TraceRecord] = []
    if out_stream is not None:
        out_stream.write(CSV_HEADER + "\n")
        out_stream.flush()

    def collect(rec: TraceRecord):
        records.append(rec)
        if out_stream is not None:
            out_stream.write(rec.csv_row() + "\n")
            out_stream.flush()

    try:
        _trace_one(config, problem, config.passes, fstar, collect)
    finally:
        if close_me is not None:
            close_me.close()
    return records


def read_trace(path: str) -> list[TraceRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise ValueError(f"unexpected trace header {reader.fieldnames}")
        out = []
        for row in reader:
            out.append(TraceRecord(
                pass_no=float(row["pass"]), iter=int(row["iter"]),
                f_last=float(row["f_last"]), f_avg=float(row["f_avg"]),
                gap_last=float(row["gap_last"]), gap_avg=float(row["gap_avg"]),
                nnz_last=int(row["nnz_last"]), nnz_avg=int(row["nnz_avg"]),
                wall_ms=float(row["wall_ms"]),
            ))
    return out


def max_workers() -> int:
    env = os.environ.get("SADDLEVR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_many(configs: list[RunConfig]) -> list[list[TraceRecord]]:
    """Run independent configs in parallel worker threads (SADDLEVR_THREADS caps
    the pool); each run's state is confined to its worker."""
    with ThreadPoolExecutor(max_workers=min(max_workers(), len(configs) or 1)) as ex:
        return list(ex.map(run_experiment, configs))
