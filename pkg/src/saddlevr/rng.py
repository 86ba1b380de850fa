"""Seedable counter-based RNG for reproducible index sampling.

The randomized solver and its dense reference oracle must consume bit-identical
index streams for any chunking of the iteration loop, across both compute
backends.  numpy's stateful generators make that awkward, so index draws use
splitmix64: output i of a stream seeded with s is ``mix(s + (i+1)*GOLDEN)``,
a pure function of the draw counter.  Uniform indices in [0, n) are obtained by
rejection sampling on the raw 64-bit draws (no modulo bias).
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64


def _mix(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; z is uint64 (scalar or array), wraps mod 2^64
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


class SplitMix64:
    """Stream of 64-bit draws; ``indices`` consumes the same stream for any chunking."""

    def __init__(self, seed: int):
        self.seed = _U64(seed & 0xFFFFFFFFFFFFFFFF)
        self._count = 0  # raw draws consumed so far

    def raw(self, m: int) -> np.ndarray:
        """Next m raw uint64 draws."""
        idx = np.arange(self._count + 1, self._count + m + 1, dtype=np.uint64)
        self._count += m
        with np.errstate(over="ignore"):
            return _mix(self.seed + idx * GOLDEN)

    def next_u64(self) -> int:
        return int(self.raw(1)[0])

    def indices(self, n: int, m: int) -> np.ndarray:
        """m uniform indices in [0, n) via rejection sampling, as int64."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (2**64 // n) * n  # raws >= limit are rejected
        reject = limit < 2**64    # no rejection possible when n divides 2^64
        out = np.empty(m, dtype=np.int64)
        filled = 0
        while filled < m:
            block = max(m - filled + 8, 64)
            start = self._count
            raws = self.raw(block)
            if reject:
                good = np.flatnonzero(raws < np.uint64(limit))
            else:
                good = np.arange(block)
            take = min(m - filled, good.size)
            if take > 0:
                out[filled : filled + take] = (
                    raws[good[:take]] % np.uint64(n)
                ).astype(np.int64)
                filled += take
            if take == good.size:
                continue  # whole block consumed
            # rewind the unconsumed tail of the block
            self._count = start + int(good[take - 1]) + 1
        return out
