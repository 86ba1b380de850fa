"""Scalar and vector proximal operators for both solvers and benchmark problems.

All conjugate-side operators are closed-form clips: every loss handled here has a
conjugate that is linear (plus an optional quadratic) on a box, so prox costs O(1)
per coordinate.  The 1/n factor of the separable dual term is never baked in; the
caller passes the fully scaled weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def soft_threshold(v, s):
    """sign(v) * max(|v| - s, 0); works elementwise on arrays."""
    return np.sign(v) * np.maximum(np.abs(v) - s, 0.0)


def prox_elastic_net(v, tau: float, lam: float, sigma: float):
    """Prox of tau * (lam*||x||_1 + sigma/2*||x||_2^2), elementwise.

    Equals soft_threshold(v, tau*lam) / (1 + tau*sigma).
    """
    if not (np.all(np.isfinite(v)) and np.isfinite(tau)):
        raise ValueError("non-finite input to prox_elastic_net")
    if tau < 0 or lam < 0 or sigma < 0:
        raise ValueError("tau, lam, sigma must be nonnegative")
    return soft_threshold(v, tau * lam) / (1.0 + tau * sigma)


def prox_hinge_conjugate(v: float, tau: float) -> float:
    """Prox of tau * g*(y) with g*(y) = y on [-1, 0] (hinge conjugate, labels folded)."""
    if not (np.isfinite(v) and np.isfinite(tau)) or tau < 0:
        raise ValueError("v finite and tau finite nonnegative required")
    return float(min(max(v - tau, -1.0), 0.0))


def prox_lad_conjugate(v: float, tau: float, c: float) -> float:
    """Prox of tau * g*(y) with g*(y) = c*y on [-1, 1] (absolute-deviation conjugate)."""
    if not (np.isfinite(v) and np.isfinite(tau) and np.isfinite(c)) or tau < 0:
        raise ValueError("v, c finite and tau finite nonnegative required")
    return float(min(max(v - tau * c, -1.0), 1.0))


def prox_box(v: float, lo: float, hi: float) -> float:
    """Projection onto [lo, hi]."""
    if lo > hi:
        raise ValueError(f"empty box: lo={lo} > hi={hi}")
    return float(min(max(v, lo), hi))


@dataclass(frozen=True)
class ScalarProx:
    """One dual coordinate's conjugate g_i*(y) = eta*y + quad/2*y^2 on [lo, hi].

    prox(v, tau) = clip((v - tau*eta) / (1 + tau*quad), lo, hi); tau=0 projects
    onto the domain.  Covers the hinge conjugate (eta=1, [-1,0]), the
    absolute-deviation conjugate (eta=c, [-1,1]) and box-game indicators (eta=0).
    """

    eta: float = 0.0
    quad: float = 0.0
    lo: float = -1.0
    hi: float = 1.0

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty box: lo={self.lo} > hi={self.hi}")
        if self.quad < 0:
            raise ValueError("quad must be nonnegative (convexity)")

    def prox(self, v: float, tau: float) -> float:
        if not (np.isfinite(v) and np.isfinite(tau)) or tau < 0:
            raise ValueError("v finite and tau finite nonnegative required")
        return float(
            min(max((v - tau * self.eta) / (1.0 + tau * self.quad), self.lo), self.hi)
        )

    def value(self, y: float) -> float:
        """g_i*(y); raises outside the domain (extended value would be +inf)."""
        if y < self.lo - 1e-12 or y > self.hi + 1e-12:
            raise ValueError(f"dual value {y} outside [{self.lo}, {self.hi}]")
        return self.eta * y + 0.5 * self.quad * y * y

    def in_domain(self, y: float, tol: float = 1e-12) -> bool:
        return self.lo - tol <= y <= self.hi + tol


class ElasticNetProx:
    """Primal regularizer lam*||x||_1 + sigma/2*||x||_2^2; dom = R^d."""

    kind = "elastic-net"

    def __init__(self, lam: float, sigma: float):
        if lam < 0 or sigma < 0:
            raise ValueError("lam, sigma must be nonnegative")
        self.lam = float(lam)
        self.sigma = float(sigma)

    def prox(self, v: np.ndarray, tau: float) -> np.ndarray:
        return prox_elastic_net(v, tau, self.lam, self.sigma)

    def value(self, x: np.ndarray) -> float:
        return self.lam * float(np.sum(np.abs(x))) + 0.5 * self.sigma * float(x @ x)

    def in_domain(self, x: np.ndarray, tol: float = 1e-12) -> bool:
        return bool(np.all(np.isfinite(x)))


class BoxProx:
    """Primal box indicator plus sigma/2*||x||_2^2 (game problems)."""

    kind = "box"

    def __init__(self, lo: np.ndarray, hi: np.ndarray, sigma: float = 0.0):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if np.any(lo > hi):
            raise ValueError("empty box")
        if sigma < 0:
            raise ValueError("sigma must be nonnegative")
        self.lo = lo
        self.hi = hi
        self.sigma = float(sigma)
        self.lam = 0.0

    def prox(self, v: np.ndarray, tau: float) -> np.ndarray:
        return np.clip(v / (1.0 + tau * self.sigma), self.lo, self.hi)

    def value(self, x: np.ndarray) -> float:
        if not self.in_domain(x):
            raise ValueError("point outside primal box")
        return 0.5 * self.sigma * float(x @ x)

    def in_domain(self, x: np.ndarray, tol: float = 1e-12) -> bool:
        return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))
