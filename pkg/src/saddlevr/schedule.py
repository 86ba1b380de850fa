"""Step-size sequences {a_k, A_k} for both solvers, plus regime analysis.

Values are generated lazily by the exact recurrences and accumulated in double
precision; no closed-form shortcut is used, so the analysis helpers here and the
solvers can be checked against each other.  Natural logs throughout (the base
cancels in the regime-index formulas).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def pda2_next_a(a_cur: float, A_cur: float, sigma: float, gamma: float, R: float) -> float:
    """a_k = sqrt((1 + sigma*A_{k-1}) * (1 + gamma*A_{k-1})) / (sqrt(2)*R)."""
    return math.sqrt((1.0 + sigma * A_cur) * (1.0 + gamma * A_cur)) / (math.sqrt(2.0) * R)


def vr_next_a(a_cur: float, A_cur: float, n: float, sigma: float, rprime: float) -> float:
    """a_{k+1} = min((1 + 1/(n-1)) * a_k, sqrt(n*(n + sigma*A_k)) / (2*R'))."""
    geo = (1.0 + 1.0 / (n - 1.0)) * a_cur
    cap = math.sqrt(n * (n + sigma * A_cur)) / (2.0 * rprime)
    return geo if geo <= cap else cap


class Pda2Schedule:
    """Deterministic-solver weights; a_0 = A_0 = 0."""

    def __init__(self, sigma: float, gamma: float, R: float):
        if R <= 0:
            raise ValueError("R must be positive")
        if sigma < 0 or gamma < 0:
            raise ValueError("sigma and gamma must be nonnegative")
        self.sigma = float(sigma)
        self.gamma = float(gamma)
        self.R = float(R)
        self.k = 0
        self.a = 0.0
        self.A = 0.0

    def next(self) -> float:
        """Advance to iteration k+1 and return a_{k+1}."""
        a = pda2_next_a(self.a, self.A, self.sigma, self.gamma, self.R)
        self.a = a
        self.A += a
        self.k += 1
        return a


class VrSchedule:
    """Randomized-solver weights: a_1 = n/(2R'), a_2 = a_1/(n-1), then the min rule.

    Construction performs the initialization (k advanced to 2, with a = a_2 pending),
    mirroring the solver, whose init step consumes a_1 and computes a_2 up front.
    """

    def __init__(self, n: int, sigma: float, rprime: float):
        if n < 2:
            raise ValueError("n must be at least 2 (the rule divides by n-1)")
        if rprime <= 0:
            raise ValueError("R' must be positive")
        if sigma < 0:
            raise ValueError("sigma must be nonnegative")
        self.n = int(n)
        self.sigma = float(sigma)
        self.rprime = float(rprime)
        self.a1 = n / (2.0 * rprime)
        self.k = 2
        self.a_prev = self.a1                 # a_1
        self.a = self.a1 / (n - 1.0)          # a_2
        self.A_prev = self.a1                 # A_1
        self.A = self.a1 + self.a             # A_2

    def next(self) -> float:
        """Advance by one iteration; returns a_{k+1} and leaves state at k+1."""
        a = vr_next_a(self.a, self.A, float(self.n), self.sigma, self.rprime)
        self.a_prev, self.a = self.a, a
        self.A_prev, self.A = self.A, self.A + a
        self.k += 1
        return a

    def regime(self) -> str:
        """Which branch produced the current a_k ('init' for k <= 2)."""
        if self.k <= 2:
            return "init"
        geo = (1.0 + 1.0 / (self.n - 1.0)) * self.a_prev
        cap = math.sqrt(self.n * (self.n + self.sigma * self.A_prev)) / (2.0 * self.rprime)
        return "geom" if geo <= cap else "cap"


def regime_constants(n: int, sigma: float, rprime: float) -> tuple[float, int, int]:
    """(B_{n,sigma,R'}, k0, K0) for the randomized schedule.

    B = sigma*n*(n-1)/(4R') + sqrt((sigma*n*(n-1)/(4R'))^2 + n^2);
    k0 = ceil(log B / (log n - log(n-1))); K0 = same with B replaced by n.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if rprime <= 0 or sigma < 0:
        raise ValueError("need R' > 0 and sigma >= 0")
    s = sigma * n * (n - 1) / (4.0 * rprime)
    B = s + math.sqrt(s * s + float(n) * n)
    denom = math.log(n) - math.log(n - 1)
    k0 = math.ceil(math.log(B) / denom)
    K0 = math.ceil(math.log(n) / denom)
    return B, k0, K0


def lower_bound_Ak(n: int, sigma: float, rprime: float, k: int,
                   k0: int | None = None, K0: int | None = None) -> float:
    """Max of the three certified regime lower bounds on A_k (0 if none applies)."""
    if k0 is None or K0 is None:
        _, k0, K0 = regime_constants(n, sigma, rprime)
    best = 0.0
    if k <= k0:
        best = max(best, (n - 1) / (2.0 * rprime) * (1.0 + 1.0 / (n - 1)) ** k)
    if k >= k0:
        best = max(best, (n - 1) ** 2 * sigma / ((4.0 * rprime) ** 2 * n)
                   * (k - k0 + n - 1) ** 2)
    if k >= K0:
        best = max(best, n * (k - K0 + n - 1) / (2.0 * rprime))
    return best


def vr_dual_weights(a: list[float], n: int) -> list[float]:
    """Averaging weights for y_2..y_K given a_1..a_{K+1}: interior w_i = n*a_i - (n-1)*a_{i+1},
    final weight n*a_K.  They are nonnegative and sum to A_K."""
    K = len(a) - 1
    if K < 2:
        raise ValueError("need a_1..a_{K+1} with K >= 2")
    w = [n * a[i - 1] - (n - 1) * a[i] for i in range(2, K)]  # i = 2..K-1 (1-based)
    w.append(n * a[K - 1])
    return w


@dataclass(frozen=True)
class ScheduleRow:
    k: int
    a: float
    A: float
    regime: str


def schedule_rows(kind: str, k_max: int, *, n: int = 0, sigma: float = 0.0,
                  gamma: float = 0.0, R: float = 1.0, rprime: float = 1.0):
    """Materialize (k, a_k, A_k, regime) rows for CSV dumping."""
    rows: list[ScheduleRow] = []
    if kind == "pda2":
        sched = Pda2Schedule(sigma, gamma, R)
        for k in range(1, k_max + 1):
            sched.next()
            rows.append(ScheduleRow(k, sched.a, sched.A, "formula"))
    elif kind == "vrpda2":
        sched = VrSchedule(n, sigma, rprime)
        rows.append(ScheduleRow(1, sched.a1, sched.a1, "init"))
        if k_max >= 2:
            rows.append(ScheduleRow(2, sched.a, sched.A, "init"))
        for k in range(3, k_max + 1):
            sched.next()
            rows.append(ScheduleRow(k, sched.a, sched.A, sched.regime()))
    else:
        raise ValueError(f"unknown schedule kind {kind!r}")
    return rows
