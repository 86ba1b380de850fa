"""Saddle-point problem model: matrix + separable conjugates + primal regularizer.

L(x, y) = <Bx, y> - (1/n) * sum_i g_i*(y_i) + l(x) with B = (1/n) * rows.  Every
dual conjugate handled here is eta*y + quad/2*y^2 on a box, so primal/dual values
and the exact sup-gap of box games have coordinatewise closed forms.  Domain
violations raise (no extended values), which catches solver bugs early.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dataio import LabeledDataset, SparseRowMatrix, fold_labels
from .prox import BoxProx, ElasticNetProx, ScalarProx


class DomainError(ValueError):
    """A point lies outside dom(l) or a dual box."""


@dataclass(frozen=True)
class SaddleProblem:
    matrix: SparseRowMatrix          # rows b_i (labels already folded where relevant)
    eta: np.ndarray                  # per-coordinate linear term of g_i*
    y_quad: np.ndarray               # per-coordinate quadratic term of g_i* (= n*gamma)
    y_lo: np.ndarray
    y_hi: np.ndarray
    primal: ElasticNetProx | BoxProx
    gamma: float                     # strong-concavity modulus of g* as a whole
    R: float                         # Lipschitz constant used by pda2 (||B|| bound/tuning)
    rprime: float                    # max row norm bound R' (step knob for vrpda2)
    tuned: bool = False              # user-tuned Lipschitz knob below the data bound

    def __post_init__(self):
        n = self.matrix.n_rows
        for name in ("eta", "y_quad", "y_lo", "y_hi"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} must have length n={n}")
        if self.R <= 0 or self.rprime <= 0:
            raise ValueError("R and R' must be positive")
        if self.R > self.rprime * (1 + 1e-12):
            raise ValueError(f"R={self.R} exceeds R'={self.rprime}")
        if not self.tuned and self.matrix.max_row_norm > self.rprime * (1 + 1e-12):
            raise ValueError("a row norm exceeds R'")

    @property
    def n(self) -> int:
        return self.matrix.n_rows

    @property
    def d(self) -> int:
        return self.matrix.n_cols

    @property
    def sigma(self) -> float:
        return self.primal.sigma

    @cached_property
    def dual_prox(self) -> list[ScalarProx]:
        return [
            ScalarProx(eta=self.eta[i], quad=self.y_quad[i],
                       lo=self.y_lo[i], hi=self.y_hi[i])
            for i in range(self.n)
        ]

    # --- feasibility -----------------------------------------------------
    def check_primal(self, x: np.ndarray):
        if not self.primal.in_domain(x):
            raise DomainError("x outside dom(l)")

    def check_dual(self, y: np.ndarray, tol: float = 1e-12):
        if np.any(y < self.y_lo - tol) or np.any(y > self.y_hi + tol):
            raise DomainError("y outside its dual box")

    def dual_prox_vec(self, v: np.ndarray, tau) -> np.ndarray:
        """Coordinatewise prox of g_i* with weight tau (scalar or per-coordinate)."""
        return np.clip((v - tau * self.eta) / (1.0 + tau * self.y_quad),
                       self.y_lo, self.y_hi)

    def gstar_sum(self, y: np.ndarray) -> float:
        """(1/n) * sum_i g_i*(y_i); y must be feasible."""
        self.check_dual(y)
        return float(np.sum(self.eta * y + 0.5 * self.y_quad * y * y)) / self.n

    # --- values ----------------------------------------------------------
    def rows_dot(self, x: np.ndarray) -> np.ndarray:
        """t_i = b_i^T x (no 1/n)."""
        return self.matrix.to_scipy() @ x

    def rows_tdot(self, y: np.ndarray) -> np.ndarray:
        """sum_i y_i b_i (no 1/n)."""
        return self.matrix.to_scipy().T @ y

    def lagrangian(self, x: np.ndarray, y: np.ndarray) -> float:
        self.check_primal(x)
        self.check_dual(y)
        coupling = float(y @ self.rows_dot(x)) / self.n
        return coupling - self.gstar_sum(y) + self.primal.value(x)

    def gap_uv(self, probe: "GapProbe", x: np.ndarray, y: np.ndarray) -> float:
        """Relaxed gap L(x, v) - L(u, y) for the probe's fixed comparators."""
        return self.lagrangian(x, probe.v) - self.lagrangian(probe.u, y)

    def primal_value(self, x: np.ndarray) -> float:
        """P(x) = max_y L(x, y), via the coordinatewise closed-form maximizer."""
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite x")
        self.check_primal(x)
        t = self.rows_dot(x)
        coef = t - self.eta
        with np.errstate(divide="ignore", invalid="ignore"):
            interior = np.where(self.y_quad > 0, coef / np.where(self.y_quad > 0, self.y_quad, 1.0), 0.0)
        ystar = np.where(self.y_quad > 0,
                         np.clip(interior, self.y_lo, self.y_hi),
                         np.where(coef > 0, self.y_hi, self.y_lo))
        vals = coef * ystar - 0.5 * self.y_quad * ystar * ystar
        return float(np.sum(vals)) / self.n + self.primal.value(x)

    def dual_value(self, y: np.ndarray) -> float:
        """D(y) = min_u L(u, y); finite only for the box-primal (game) problems."""
        if not isinstance(self.primal, BoxProx):
            raise ValueError("dual value is unbounded below for non-box primal domains")
        self.check_dual(y)
        s = self.rows_tdot(y) / self.n
        sig = self.primal.sigma
        if sig > 0:
            ustar = np.clip(-s / sig, self.primal.lo, self.primal.hi)
        else:
            ustar = np.where(s > 0, self.primal.lo, self.primal.hi)
        return float(np.sum(s * ustar + 0.5 * sig * ustar * ustar)) - self.gstar_sum(y)

    def sup_gap(self, x: np.ndarray, y: np.ndarray) -> float:
        """Exact primal-dual gap P(x) - D(y); box-primal problems only."""
        return self.primal_value(x) - self.dual_value(y)

    def domain_diameters_sq(self) -> tuple[float, float]:
        """(D_X^2, D_Y^2) for box domains."""
        if not isinstance(self.primal, BoxProx):
            raise ValueError("primal domain is unbounded")
        dx2 = float(np.sum((self.primal.hi - self.primal.lo) ** 2))
        dy2 = float(np.sum((self.y_hi - self.y_lo) ** 2))
        return dx2, dy2


@dataclass(frozen=True)
class GapProbe:
    """Fixed comparators (u, v) for the relaxed gap."""

    u: np.ndarray
    v: np.ndarray


def sup_gap_box_game(problem: SaddleProblem, x: np.ndarray, y: np.ndarray) -> float:
    return problem.sup_gap(x, y)


def primal_value_svm(dataset: LabeledDataset, x: np.ndarray, lam: float, sigma: float) -> float:
    """(1/n) sum_i max(1 - c_i b_i^T x, 0) + lam*||x||_1 + sigma/2*||x||_2^2.

    Direct hinge-loss formula on the unfolded dataset; independent of the
    problem-model path, so the two can be cross-checked.
    """
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite x")
    margins = dataset.labels * (dataset.matrix.to_scipy() @ x)
    hinge = np.maximum(1.0 - margins, 0.0)
    return (float(np.sum(hinge)) / dataset.matrix.n_rows
            + lam * float(np.sum(np.abs(x))) + 0.5 * sigma * float(x @ x))


def operator_norm(matrix: SparseRowMatrix) -> float:
    """||B|| with B = rows/n; exact (svd) for small matrices, power iteration otherwise."""
    n = matrix.n_rows
    if n * matrix.n_cols <= 250_000:
        return float(np.linalg.norm(matrix.to_dense(), 2)) / n
    from scipy.sparse.linalg import svds

    return float(svds(matrix.to_scipy().astype(np.float64), k=1,
                      return_singular_vectors=False)[0]) / n


def svm_elastic_net_problem(dataset: LabeledDataset, lam: float, sigma: float,
                            lipschitz: float | None = None) -> SaddleProblem:
    """Elastic-net hinge problem; labels are folded into rows, so g_i*(y) = y on [-1, 0].

    `lipschitz` overrides both R and R' (the tuning knob; may sit below the data
    bound, in which case the algorithms can diverge).  Default: R = R' = max row norm.
    """
    rows = fold_labels(dataset)
    n = rows.n_rows
    rp = lipschitz if lipschitz is not None else max(rows.max_row_norm, np.finfo(float).tiny)
    return SaddleProblem(
        matrix=rows,
        eta=np.ones(n), y_quad=np.zeros(n),
        y_lo=-np.ones(n), y_hi=np.zeros(n),
        primal=ElasticNetProx(lam, sigma),
        gamma=0.0, R=rp, rprime=rp, tuned=lipschitz is not None,
    )


def lad_problem(dataset: LabeledDataset, lam: float, sigma: float,
                lipschitz: float | None = None) -> SaddleProblem:
    """Least-absolute-deviation problem: g_i(z) = |z - c_i|, so g_i*(y) = c_i y on [-1, 1]."""
    m = dataset.matrix
    n = m.n_rows
    rp = lipschitz if lipschitz is not None else max(m.max_row_norm, np.finfo(float).tiny)
    return SaddleProblem(
        matrix=m,
        eta=dataset.labels.astype(np.float64), y_quad=np.zeros(n),
        y_lo=-np.ones(n), y_hi=np.ones(n),
        primal=ElasticNetProx(lam, sigma),
        gamma=0.0, R=rp, rprime=rp, tuned=lipschitz is not None,
    )


def box_game_problem(rows, sigma: float = 0.0, gamma: float = 0.0,
                     x_box: float = 1.0, y_box: float = 1.0,
                     R: float | None = None) -> SaddleProblem:
    """Bilinear game on [-x_box, x_box]^d x [-y_box, y_box]^n with optional
    quadratic terms making l sigma-strongly convex and g* gamma-strongly convex.
    The saddle point is the origin."""
    if not isinstance(rows, SparseRowMatrix):
        rows = SparseRowMatrix.from_dense(np.asarray(rows, dtype=np.float64))
    n, d = rows.n_rows, rows.n_cols
    rp = max(rows.max_row_norm, np.finfo(float).tiny)
    Rv = R if R is not None else operator_norm(rows)
    return SaddleProblem(
        matrix=rows,
        eta=np.zeros(n),
        y_quad=np.full(n, n * gamma),  # g* = (1/n) sum g_i* then has modulus gamma
        y_lo=np.full(n, -y_box), y_hi=np.full(n, y_box),
        primal=BoxProx(np.full(d, -x_box), np.full(d, x_box), sigma),
        gamma=float(gamma), R=min(Rv, rp), rprime=rp,
    )
