"""Production variance-reduced solver: the O(d)-per-iteration implementable form.

State layout follows the implementable algorithm exactly: p and q accumulate
unnormalized linear coefficients of the dual/primal estimate sequences, r the
per-coordinate weights on g_i*, and every prox call divides by n.  The dual
average uses the certified weights w_i = n*a_i - (n-1)*a_{i+1}; the running sum
of w_i*y_i is maintained lazily (prefix-weight trick) so each iteration stays
O(d + nnz(b_j)) with no O(n) work.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .problem import SaddleProblem
from .rng import SplitMix64

_EMPTY = np.empty(0, dtype=np.float64)


@dataclass
class VrState:
    problem: SaddleProblem
    x: np.ndarray
    x_prev: np.ndarray
    y: np.ndarray
    z: np.ndarray        # = B^T y, maintained incrementally
    p: np.ndarray        # linear coefficients on y in the dual estimate sequence
    q: np.ndarray        # linear coefficients on x in the primal estimate sequence
    r: np.ndarray        # per-coordinate weights on g_i*
    s_x: np.ndarray      # sum a_i x_i
    c1: np.ndarray       # lazy dual-average accumulators (deltas)
    c2: np.ndarray       # lazy dual-average accumulators (delta * weight prefix)
    x0: np.ndarray
    y0: np.ndarray
    y1: np.ndarray       # dual iterate after initialization
    sc: np.ndarray       # scalar state, kernels.SC_* layout
    it: np.ndarray       # int64[1]: completed iterations
    zt: np.ndarray = field(default=None)  # scratch for z recomputation

    def __post_init__(self):
        if self.zt is None:
            self.zt = np.zeros_like(self.z)

    @property
    def k(self) -> int:
        return int(self.it[0])

    @property
    def a_k(self) -> float:
        """Weight a_k of the last completed iteration."""
        return self.sc[kernels.SC_A_PREV]

    @property
    def A_k(self) -> float:
        return self.sc[kernels.SC_A_LAST]

    @property
    def max_zdev(self) -> float:
        return self.sc[kernels.SC_ZDEV]

    def x_average(self) -> np.ndarray:
        return self.s_x / self.A_k

    def y_average(self) -> np.ndarray:
        """Dual average with the certified weights, assembled from the lazy sums.

        With W = sum_{i=2..k} w_i the interior sum is
        sum_{i=2..k} w_i y_i = W*y1 + W*c1 - c2 (per coordinate); dropping the
        i=k term and adding the final weight n*a_k gives the average.
        """
        if self.k < 2:
            raise ValueError("dual average defined for k >= 2")
        n = self.problem.n
        a_k = self.sc[kernels.SC_A_PREV]
        A_k = self.sc[kernels.SC_A_LAST]
        W = self.sc[kernels.SC_W]
        w_last = self.sc[kernels.SC_W_LAST]
        interior = W * self.y1 + W * self.c1 - self.c2 - w_last * self.y
        return (n * a_k * self.y + interior) / A_k

    def recompute_z(self) -> np.ndarray:
        return self.problem.rows_tdot(self.y) / self.problem.n


def vr_init(problem: SaddleProblem, x0: np.ndarray, y0: np.ndarray) -> VrState:
    """Deterministic full primal-dual initialization (one pass over the data)."""
    n, d = problem.n, problem.d
    if n < 2:
        raise ValueError("the randomized solver needs n >= 2")
    if problem.gamma > 0:
        raise ValueError("strongly concave g* (gamma > 0) is not supported here")
    x0 = np.asarray(x0, dtype=np.float64).copy()
    y0 = np.asarray(y0, dtype=np.float64).copy()
    problem.check_primal(x0)
    problem.check_dual(y0)

    atil = 1.0 / (2.0 * problem.rprime)
    p_til = -problem.rows_dot(x0) / n                      # -B x0
    y1 = problem.dual_prox_vec(y0 - atil * p_til, atil / n)
    z1 = problem.rows_tdot(y1) / n                         # B^T y1
    x1 = problem.primal.prox(x0 - atil * z1, atil)
    a1 = n * atil
    a2 = a1 / (n - 1.0)
    sc = np.zeros(kernels.SC_LEN)
    sc[kernels.SC_A_PREV] = a1
    sc[kernels.SC_A_CUR] = a2
    sc[kernels.SC_A_LAST] = a1          # A_1
    sc[kernels.SC_A_NEXT] = a1 + a2     # A_2
    return VrState(
        problem=problem,
        x=x1, x_prev=x0.copy(), y=y1, z=z1,
        p=a1 * p_til, q=a1 * z1, r=np.full(n, a1 / n),
        s_x=a1 * x1, c1=np.zeros(n), c2=np.zeros(n),
        x0=x0, y0=y0, y1=y1.copy(),
        sc=sc, it=np.array([1], dtype=np.int64),
    )


def _kernel_args(state: VrState, backend):
    pr = state.problem
    m = pr.matrix
    primal = pr.primal
    if primal.kind == "elastic-net":
        primal_kind, lam, x_lo, x_hi = 0, primal.lam, _EMPTY, _EMPTY
    else:
        primal_kind, lam, x_lo, x_hi = 1, 0.0, primal.lo, primal.hi
    return (m.indptr, m.indices, m.values,
            state.x, state.x_prev, state.y, state.z, state.p, state.q, state.r,
            state.s_x, state.c1, state.c2,
            state.x0, state.y0, pr.eta, pr.y_lo, pr.y_hi, pr.y_quad,
            primal_kind, lam, pr.sigma, x_lo, x_hi,
            pr.n, pr.rprime, int(m.dense_rows), state.sc, state.it)


def vr_step(state: VrState, j: int, *, backend: str | None = None,
            check_every: int = 0) -> VrState:
    """Advance one iteration with the given sampled row index (mainly for tests)."""
    be = kernels.get_backend(backend)
    args = _kernel_args(state, be)
    be.vr_segment(np.array([j], dtype=np.int64), *args, check_every, state.zt)
    return state


@dataclass
class EvalView:
    """Snapshot handed to evaluation hooks (arrays are copies)."""

    k: int
    a_k: float
    A_k: float
    x_last: np.ndarray
    x_avg: np.ndarray
    y_last: np.ndarray
    y_avg: np.ndarray
    elapsed_s: float


@dataclass
class VrResult:
    x_last: np.ndarray
    x_avg: np.ndarray
    y_last: np.ndarray
    y_avg: np.ndarray
    state: VrState
    trajectory: list | None = None

    @property
    def max_zdev(self) -> float:
        return self.state.max_zdev


def vr_run(problem: SaddleProblem, x0, y0, iters: int, seed: int, *,
           eval_every: int | None = None,
           hook: Callable[[EvalView], None] | None = None,
           backend: str | None = None,
           check_every: int = 0,
           record_trajectory: bool = False) -> VrResult:
    """Run the randomized solver for `iters` iterations (init counts as iteration 1).

    The sampled-index stream is a pure function of `seed`, independent of the
    chunking implied by `eval_every`.  `check_every > 0` re-verifies z = B^T y
    from scratch at that period (debug mode).
    """
    if iters < 2:
        raise ValueError("iters must be >= 2 (initialization is iteration 1)")
    state = vr_init(problem, x0, y0)
    rng = SplitMix64(seed)
    be = kernels.get_backend(backend)
    period = iters if eval_every is None else max(1, int(eval_every))
    trajectory = None
    if record_trajectory:
        trajectory = [(state.x.copy(), state.y.copy(),
                       state.sc[kernels.SC_A_PREV], state.A_k)]
    t0 = time.perf_counter()
    k = state.k
    # evaluation points: multiples of `period` (in completed iterations), plus iters
    while k < iters:
        boundary = min(((k // period) + 1) * period, iters)
        chunk = 1 if record_trajectory else boundary - k
        j_seg = rng.indices(problem.n, chunk)
        be.vr_segment(j_seg, *_kernel_args(state, be), check_every, state.zt)
        k = state.k
        if record_trajectory:
            trajectory.append((state.x.copy(), state.y.copy(),
                               state.sc[kernels.SC_A_PREV], state.A_k))
        if hook is not None and (k % period == 0 or k == iters):
            hook(EvalView(
                k=k, a_k=state.sc[kernels.SC_A_PREV], A_k=state.A_k,
                x_last=state.x.copy(), x_avg=state.x_average(),
                y_last=state.y.copy(), y_avg=state.y_average(),
                elapsed_s=time.perf_counter() - t0,
            ))
    return VrResult(
        x_last=state.x.copy(), x_avg=state.x_average(),
        y_last=state.y.copy(), y_avg=state.y_average(),
        state=state, trajectory=trajectory,
    )
