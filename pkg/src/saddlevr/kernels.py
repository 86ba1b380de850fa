"""Hot inner-loop kernels: numba @njit versions with a pure-numpy fallback.

Backend selection: env var SADDLEVR_BACKEND in {auto, numba, numpy} (default
auto = numba when importable).  Both backends implement identical arithmetic,
step for step; a test pins their agreement and the `bench` CLI subcommand
compares their per-iteration cost.

The segment kernel advances the randomized solver by a chunk of iterations.
Scalar state crosses the boundary in two small arrays:

  sc[0]=a_{k-1}  sc[1]=a_k (pending)  sc[2]=A_{k-1}... see _SC_* constants
  it[0]=k (completed iterations)

Schedule weights are produced by the same min-rule recurrence as
schedule.vr_next_a; equality is enforced by a test rather than a shared
function object (numba cannot call back into Python per step).
"""

from __future__ import annotations

import math
import os
from types import SimpleNamespace

import numpy as np

# indices into the scalar-state array
SC_A_PREV = 0   # a_{k-1} after a completed step k: holds a_k
SC_A_CUR = 1    # pending a_{k+1}
SC_A_LAST = 2   # A_k of the last completed step
SC_A_NEXT = 3   # A_{k+1}
SC_W = 4        # sum of interior dual-average weights w_2..w_k
SC_W_LAST = 5   # w_k of the last completed step
SC_ZDEV = 6     # running max of ||z - B^T y|| / (1 + ||y||) when checking
SC_YNORM2 = 7   # maintained ||y||^2 while checking
SC_LEN = 8


def _vr_segment_py(j_seg, indptr, cols, vals,
                   x, x_prev, y, z, p, q, r, s_x, c1, c2,
                   x0, y0, eta, y_lo, y_hi, y_quad,
                   primal_kind, lam, sigma, x_lo, x_hi,
                   n_rows, rprime, dense_rows, sc, it, check_every, zt):
    n = float(n_rows)
    d = x.shape[0]
    a_prev = sc[SC_A_PREV]
    a_cur = sc[SC_A_CUR]
    A_last = sc[SC_A_LAST]
    A_cur = sc[SC_A_NEXT]
    W = sc[SC_W]
    w_last = sc[SC_W_LAST]
    max_zdev = sc[SC_ZDEV]
    ynorm2 = sc[SC_YNORM2]
    k = it[0]
    for t in range(j_seg.shape[0]):
        k += 1
        j = j_seg[t]
        ratio = a_prev / a_cur
        lo = indptr[j]
        hi = indptr[j + 1]
        vj = vals[lo:hi]
        if dense_rows:
            bx = float(np.dot(vj, x + ratio * (x - x_prev)))
        else:
            cj = cols[lo:hi]
            bx = float(np.dot(vj, x[cj] + ratio * (x[cj] - x_prev[cj])))
        p[j] -= a_cur * bx
        r[j] += a_cur
        tau = r[j] / n
        v = y0[j] - p[j] / n
        yn = (v - tau * eta[j]) / (1.0 + tau * y_quad[j])
        if yn < y_lo[j]:
            yn = y_lo[j]
        elif yn > y_hi[j]:
            yn = y_hi[j]
        dy = yn - y[j]
        if check_every > 0:
            ynorm2 += yn * yn - y[j] * y[j]
        y[j] = yn
        # q_k = q_{k-1} + a_k * (z_{k-1} + dy * b_j); uses z before the z update
        q += a_cur * z
        if dense_rows:
            q += (a_cur * dy) * vj
        else:
            q[cj] += (a_cur * dy) * vj
        np.copyto(x_prev, x)
        tau_x = A_cur / n
        vv = x0 - q / n
        if primal_kind == 0:
            xn = (np.sign(vv) * np.maximum(np.abs(vv) - tau_x * lam, 0.0)
                  / (1.0 + tau_x * sigma))
        else:
            xn = np.minimum(np.maximum(vv / (1.0 + tau_x * sigma), x_lo), x_hi)
        np.copyto(x, xn)
        if dense_rows:
            z += (dy / n) * vj
        else:
            z[cj] += (dy / n) * vj
        s_x += a_cur * x
        # schedule advance and dual-average bookkeeping (one step in arrears)
        geo = (1.0 + 1.0 / (n - 1.0)) * a_cur
        cap = math.sqrt(n * (n + sigma * A_cur)) / (2.0 * rprime)
        a_next = geo if geo <= cap else cap
        wk = n * a_cur - (n - 1.0) * a_next
        c1[j] += dy
        c2[j] += dy * W      # W here is W_{k-1}
        W += wk
        w_last = wk
        a_prev = a_cur
        a_cur = a_next
        A_last = A_cur
        A_cur = A_cur + a_next
        if check_every > 0 and k % check_every == 0:
            zt[:] = 0.0
            for i in range(n_rows):
                s = slice(indptr[i], indptr[i + 1])
                if dense_rows:
                    zt += y[i] * vals[s]
                else:
                    zt[cols[s]] += y[i] * vals[s]
            dev = float(np.linalg.norm(z - zt / n))
            rel = dev / (1.0 + math.sqrt(ynorm2))
            if rel > max_zdev:
                max_zdev = rel
    sc[SC_A_PREV] = a_prev
    sc[SC_A_CUR] = a_cur
    sc[SC_A_LAST] = A_last
    sc[SC_A_NEXT] = A_cur
    sc[SC_W] = W
    sc[SC_W_LAST] = w_last
    sc[SC_ZDEV] = max_zdev
    sc[SC_YNORM2] = ynorm2
    it[0] = k


def _rows_tdot_py(indptr, cols, vals, y, d):
    out = np.zeros(d)
    for i in range(y.shape[0]):
        s = slice(indptr[i], indptr[i + 1])
        out[cols[s]] += y[i] * vals[s]
    return out


_NUMBA_NS = None
_NUMBA_ERR = None


def _build_numba():
    global _NUMBA_NS, _NUMBA_ERR
    if _NUMBA_NS is not None or _NUMBA_ERR is not None:
        return _NUMBA_NS
    try:
        from numba import njit
        from numba.core import cgutils
        from numba.core import types as nbt
        from numba.extending import intrinsic
        from llvmlite import ir as llir
    except ImportError as exc:  # pragma: no cover - numba is a hard dep, but be graceful
        _NUMBA_ERR = exc
        return None

    @intrinsic
    def prefetch_read(typingctx, data, idx):
        """Emit llvm.prefetch for data[idx] (read, high temporal locality).

        A genuine asynchronous prefetch: it costs ~1 cycle and never stalls,
        unlike a touch-load, so the randomly sampled row can stream in behind
        the dense vector work of the preceding iterations.
        """
        if not isinstance(data, nbt.Array):
            return None
        sig = nbt.void(data, nbt.int64)

        def codegen(context, builder, signature, args):
            arr_t = signature.args[0]
            ary = context.make_array(arr_t)(context, builder, args[0])
            ptr = cgutils.get_item_pointer(context, builder, arr_t, ary,
                                           [args[1]], wraparound=False)
            i8p = llir.IntType(8).as_pointer()
            i32 = llir.IntType(32)
            ptr8 = builder.bitcast(ptr, i8p)
            fnty = llir.FunctionType(llir.VoidType(), [i8p, i32, i32, i32])
            fn = builder.module.declare_intrinsic("llvm.prefetch", [i8p], fnty)
            builder.call(fn, [ptr8, i32(0), i32(3), i32(1)])
            return context.get_dummy_value()

        return sig, codegen

    @njit(cache=True, nogil=True)
    def vr_segment(j_seg, indptr, cols, vals,
                   x, x_prev, y, z, p, q, r, s_x, c1, c2,
                   x0, y0, eta, y_lo, y_hi, y_quad,
                   primal_kind, lam, sigma, x_lo, x_hi,
                   n_rows, rprime, dense_rows, sc, it, check_every, zt):
        n = float(n_rows)
        d = x.shape[0]
        a_prev = sc[SC_A_PREV]
        a_cur = sc[SC_A_CUR]
        A_last = sc[SC_A_LAST]
        A_cur = sc[SC_A_NEXT]
        W = sc[SC_W]
        w_last = sc[SC_W_LAST]
        max_zdev = sc[SC_ZDEV]
        ynorm2 = sc[SC_YNORM2]
        k = it[0]
        for t in range(j_seg.shape[0]):
            k += 1
            j = j_seg[t]
            # prefetch the row sampled a few steps ahead so its cache lines
            # stream in behind the dense vector work; keeps the per-iteration
            # cost independent of n
            if t + 4 < j_seg.shape[0]:
                jn = j_seg[t + 4]
                plo = indptr[jn]
                phi = indptr[jn + 1]
                for ii in range(plo, phi, 8):
                    prefetch_read(vals, ii)
                if not dense_rows:
                    for ii in range(plo, phi, 16):
                        prefetch_read(cols, ii)
            ratio = a_prev / a_cur
            lo = indptr[j]
            hi = indptr[j + 1]
            bx = 0.0
            if dense_rows:
                for jj in range(d):
                    bx += vals[lo + jj] * (x[jj] + ratio * (x[jj] - x_prev[jj]))
            else:
                for ii in range(lo, hi):
                    col = cols[ii]
                    bx += vals[ii] * (x[col] + ratio * (x[col] - x_prev[col]))
            p[j] -= a_cur * bx
            r[j] += a_cur
            tau = r[j] / n
            v = y0[j] - p[j] / n
            yn = (v - tau * eta[j]) / (1.0 + tau * y_quad[j])
            if yn < y_lo[j]:
                yn = y_lo[j]
            elif yn > y_hi[j]:
                yn = y_hi[j]
            dy = yn - y[j]
            if check_every > 0:
                ynorm2 += yn * yn - y[j] * y[j]
            y[j] = yn
            if dense_rows:
                for jj in range(d):
                    q[jj] += a_cur * z[jj]
                    q[jj] += (a_cur * dy) * vals[lo + jj]
            else:
                for jj in range(d):
                    q[jj] += a_cur * z[jj]
                for ii in range(lo, hi):
                    q[cols[ii]] += (a_cur * dy) * vals[ii]
            tau_x = A_cur / n
            if primal_kind == 0:
                thr = tau_x * lam
                den = 1.0 + tau_x * sigma
                for jj in range(d):
                    x_prev[jj] = x[jj]
                    vv = x0[jj] - q[jj] / n
                    if vv > thr:
                        x[jj] = (vv - thr) / den
                    elif vv < -thr:
                        x[jj] = (vv + thr) / den
                    else:
                        x[jj] = 0.0
            else:
                den = 1.0 + tau_x * sigma
                for jj in range(d):
                    x_prev[jj] = x[jj]
                    vv = (x0[jj] - q[jj] / n) / den
                    if vv < x_lo[jj]:
                        vv = x_lo[jj]
                    elif vv > x_hi[jj]:
                        vv = x_hi[jj]
                    x[jj] = vv
            if dense_rows:
                for jj in range(d):
                    z[jj] += (dy / n) * vals[lo + jj]
            else:
                for ii in range(lo, hi):
                    z[cols[ii]] += (dy / n) * vals[ii]
            for jj in range(d):
                s_x[jj] += a_cur * x[jj]
            geo = (1.0 + 1.0 / (n - 1.0)) * a_cur
            cap = math.sqrt(n * (n + sigma * A_cur)) / (2.0 * rprime)
            a_next = geo if geo <= cap else cap
            wk = n * a_cur - (n - 1.0) * a_next
            c1[j] += dy
            c2[j] += dy * W
            W += wk
            w_last = wk
            a_prev = a_cur
            a_cur = a_next
            A_last = A_cur
            A_cur = A_cur + a_next
            if check_every > 0 and k % check_every == 0:
                for jj in range(d):
                    zt[jj] = 0.0
                if dense_rows:
                    for i in range(n_rows):
                        base = indptr[i]
                        for jj in range(d):
                            zt[jj] += y[i] * vals[base + jj]
                else:
                    for i in range(n_rows):
                        for ii in range(indptr[i], indptr[i + 1]):
                            zt[cols[ii]] += y[i] * vals[ii]
                dev = 0.0
                for jj in range(d):
                    diff = z[jj] - zt[jj] / n
                    dev += diff * diff
                rel = math.sqrt(dev) / (1.0 + math.sqrt(ynorm2))
                if rel > max_zdev:
                    max_zdev = rel
        sc[SC_A_PREV] = a_prev
        sc[SC_A_CUR] = a_cur
        sc[SC_A_LAST] = A_last
        sc[SC_A_NEXT] = A_cur
        sc[SC_W] = W
        sc[SC_W_LAST] = w_last
        sc[SC_ZDEV] = max_zdev
        sc[SC_YNORM2] = ynorm2
        it[0] = k

    @njit(cache=True, nogil=True)
    def rows_tdot(indptr, cols, vals, y, d):
        out = np.zeros(d)
        for i in range(y.shape[0]):
            for ii in range(indptr[i], indptr[i + 1]):
                out[cols[ii]] += y[i] * vals[ii]
        return out

    _NUMBA_NS = SimpleNamespace(name="numba", vr_segment=vr_segment, rows_tdot=rows_tdot)
    return _NUMBA_NS


_NUMPY_NS = SimpleNamespace(name="numpy", vr_segment=_vr_segment_py, rows_tdot=_rows_tdot_py)


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if _build_numba() is not None else ("numpy",)


def default_backend() -> str:
    choice = os.environ.get("SADDLEVR_BACKEND", "auto").lower()
    if choice in ("", "auto"):
        return "numba" if _build_numba() is not None else "numpy"
    if choice not in ("numba", "numpy"):
        raise ValueError(f"SADDLEVR_BACKEND must be auto|numba|numpy, got {choice!r}")
    return choice


def get_backend(name: str | None = None) -> SimpleNamespace:
    name = name or default_backend()
    if name == "numpy":
        return _NUMPY_NS
    if name == "numba":
        ns = _build_numba()
        if ns is None:
            raise RuntimeError(f"numba backend unavailable: {_NUMBA_ERR}")
        return ns
    raise ValueError(f"unknown backend {name!r}")
