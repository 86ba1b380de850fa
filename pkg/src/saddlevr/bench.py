"""Backend benchmark: numba kernel vs pure-numpy fallback on the same problem.

Also measures the per-iteration cost at two sample counts to demonstrate that
the randomized solver's iteration cost is independent of n.
"""

from __future__ import annotations

import time

import numpy as np

from . import kernels
from .dataio import LabeledDataset, SparseRowMatrix
from .problem import svm_elastic_net_problem
from .rng import SplitMix64
from .vrpda2 import _kernel_args, vr_init


def dense_row_problem(n: int, d: int, seed: int = 0):
    """Hinge problem with dense unit-norm rows (the O(d)-cost worst case)."""
    rng = np.random.default_rng(seed)
    rows = rng.normal(size=(n, d))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    labels = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    ds = LabeledDataset(matrix=SparseRowMatrix.from_dense(rows), labels=labels)
    return svm_elastic_net_problem(ds, lam=1e-4, sigma=1e-4)


def time_iterations(problem, iters: int, *, backend: str, seed: int = 0,
                    warmup: int = 200, chunk: int = 2000) -> float:
    """Seconds per inner iteration, excluding initialization and evaluation.

    Initialization includes JIT compilation and first-touch page-in of the data
    arrays, so both are performed before the clock starts.
    """
    be = kernels.get_backend(backend)
    state = vr_init(problem, np.zeros(problem.d), np.zeros(problem.n))
    rng = SplitMix64(seed)
    args = _kernel_args(state, be)
    m = problem.matrix
    float(m.values.sum() + m.indices.sum() + m.indptr.sum())  # fault pages in
    be.vr_segment(rng.indices(problem.n, warmup), *args, 0, state.zt)  # compile
    done = 0
    t0 = time.perf_counter()
    while done < iters:
        m_it = min(chunk, iters - done)
        j = rng.indices(problem.n, m_it)
        be.vr_segment(j, *args, 0, state.zt)
        done += m_it
    return (time.perf_counter() - t0) / iters


def run_bench(iters: int = 200_000, d: int = 100, seed: int = 0, out=print) -> dict:
    """Compare backends and n-scaling; returns the measured seconds/iteration."""
    results: dict[str, float] = {}
    small = dense_row_problem(1_000, d, seed)
    for backend in kernels.available_backends():
        n_iters = iters if backend == "numba" else min(iters, 20_000)
        per = time_iterations(small, n_iters, backend=backend, seed=seed)
        results[backend] = per
        out(f"backend={backend:<6} n=1000 d={d}: {per * 1e9:10.1f} ns/iter")
    if "numba" in results and "numpy" in results:
        out(f"numba speedup over numpy: {results['numpy'] / results['numba']:.1f}x")
    big = dense_row_problem(100_000, d, seed)
    per_big = time_iterations(big, iters, backend=kernels.default_backend(), seed=seed)
    base = results[kernels.default_backend()]
    results["n_scaling_ratio"] = per_big / base
    out(f"backend={kernels.default_backend():<6} n=100000 d={d}: {per_big * 1e9:10.1f} ns/iter "
        f"(ratio vs n=1000: {per_big / base:.3f})")
    return results
