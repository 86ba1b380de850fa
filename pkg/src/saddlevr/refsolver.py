"""Dense from-scratch reference for the randomized solver; correctness oracle only.

Every quantity is recomputed from explicitly accumulated estimate-sequence
coefficients each step: the full y vector is re-derived coordinatewise from the
accumulated linear terms and weights, z is recomputed as B^T y from scratch, and
the dual average is the literal weighted sum over stored iterates.  No state is
shared with the production solver beyond the prox definitions and the RNG stream
construction.  O(nd) per step by design.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import SaddleProblem
from .rng import SplitMix64
from .schedule import VrSchedule


@dataclass
class RefTrajectory:
    x: list          # x_k for k = 1..K
    y: list
    a: list          # a_1..a_{K+1} (one lookahead, as produced by the rule)
    A: list          # A_1..A_K
    x_avg: list      # running weighted primal averages
    y_avg: list      # running dual averages with the certified weights (k >= 2)
    j: list          # sampled indices for k = 2..K


def ref_run(problem: SaddleProblem, x0, y0, K: int, seed: int,
            dual_averages: bool = True) -> RefTrajectory:
    """Replays the randomized solver densely; `dual_averages=False` skips the
    O(K^2 n) literal average assembly when only the iterates are needed."""
    if K < 1:
        raise ValueError("K must be >= 1")
    n, d = problem.n, problem.d
    if n < 2:
        raise ValueError("n >= 2 required")
    x0 = np.asarray(x0, dtype=np.float64)
    y0 = np.asarray(y0, dtype=np.float64)
    problem.check_primal(x0)
    problem.check_dual(y0)
    rng = SplitMix64(seed)
    rows = problem.matrix.to_scipy()

    # initialization stage: quadratic multiplier 1, then the whole sequence *n
    atil = 1.0 / (2.0 * problem.rprime)
    lin_y = atil * (-(rows @ x0) / n)       # linear coefficients on y
    w_y = np.full(n, atil / n)              # per-coordinate weights on g_i*
    mult = 1.0                              # quadratic multiplier on ||y - y0||^2 / 2
    y = problem.dual_prox_vec(y0 - lin_y / mult, w_y / mult)
    z1 = rows.T @ y / n
    lin_x = atil * z1
    w_x = atil
    x = problem.primal.prox(x0 - lin_x / mult, w_x / mult)
    lin_y, w_y, lin_x, w_x, mult = n * lin_y, n * w_y, n * lin_x, n * w_x, float(n)

    sched = VrSchedule(n, problem.sigma, problem.rprime)
    xs, ys = [x.copy()], [y.copy()]
    a_list = [sched.a1, sched.a]            # a_1, a_2
    A_list = [sched.A_prev]                 # A_1
    sx = sched.a1 * x
    x_avgs = [sx / sched.A_prev]
    y_avgs = [None]                         # dual average defined from k = 2
    j_list = []
    x_prev = x0.copy()

    for k in range(2, K + 1):
        a_k, A_k = sched.a, sched.A
        j = int(rng.indices(n, 1)[0])
        j_list.append(j)
        ratio = a_list[-2] / a_k            # a_{k-1} / a_k
        xbar = x + ratio * (x - x_prev)
        brow = np.zeros(d)
        cj, vj = problem.matrix.row(j)
        brow[cj] = vj
        z_prev = rows.T @ y / n             # B^T y_{k-1}, from scratch
        lin_y[j] += a_k * (-float(brow @ xbar))
        w_y[j] += a_k
        y_old_j = y[j]
        y = problem.dual_prox_vec(y0 - lin_y / mult, w_y / mult)
        lin_x = lin_x + a_k * (z_prev + (y[j] - y_old_j) * brow)
        w_x += a_k
        x_prev = x.copy()
        x = problem.primal.prox(x0 - lin_x / mult, w_x / mult)

        sx = sx + a_k * x
        xs.append(x.copy())
        ys.append(y.copy())
        A_list.append(A_k)
        x_avgs.append(sx / A_k)
        sched.next()
        a_list.append(sched.a)              # a_{k+1}
        if dual_averages:
            # interior weights w_i = n*a_i - (n-1)*a_{i+1}, i = 2..k-1, plus
            # n*a_k on y_k; assembled literally from the stored history
            acc = float(n) * a_k * y
            for i in range(2, k):
                w_i = n * a_list[i - 1] - (n - 1) * a_list[i]
                acc = acc + w_i * ys[i - 1]
            y_avgs.append(acc / A_k)
        else:
            y_avgs.append(None)

    return RefTrajectory(x=xs, y=ys, a=a_list, A=A_list,
                         x_avg=x_avgs, y_avg=y_avgs, j=j_list)
