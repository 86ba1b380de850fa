"""LIBSVM-format datasets: parsing, label folding, row normalization.

The sample matrix is stored row-major in CSR arrays.  Rows b_i are the raw
sample vectors; the solver-side linear operator is B = (1/n) * rows.  Pixel-range
datasets (MNIST) are not rescaled before unit-norm row normalization; raw parsed
values are normalized as-is.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np
import scipy.sparse as sp

log = logging.getLogger(__name__)


class ParseError(ValueError):
    """Malformed LIBSVM input; message names the offending 1-based line."""


@dataclass(frozen=True)
class SparseRowMatrix:
    """Row-major sparse sample matrix (CSR arrays, 0-based sorted column indices)."""

    n_rows: int
    n_cols: int
    indptr: np.ndarray   # int64, len n_rows+1
    indices: np.ndarray  # int32, strictly increasing within each row (n_cols < 2**31)
    values: np.ndarray   # float64, all finite
    row_norms: np.ndarray = field(default=None)  # cached Euclidean norms

    def __post_init__(self):
        if self.row_norms is None:
            object.__setattr__(self, "row_norms", self.compute_row_norms())
        self.validate()
        for arr in (self.indptr, self.indices, self.values, self.row_norms):
            arr.flags.writeable = False  # shared read-only across concurrent runs

    def validate(self):
        if len(self.indptr) != self.n_rows + 1:
            raise ValueError("indptr length mismatch")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("matrix values must be finite")
        for i in range(self.n_rows):
            cols = self.indices[self.indptr[i] : self.indptr[i + 1]]
            if cols.size and (np.any(np.diff(cols) <= 0) or cols[-1] >= self.n_cols
                              or cols[0] < 0):
                raise ValueError(f"row {i}: column indices not strictly increasing in range")
        fresh = self.compute_row_norms()
        scale = np.maximum(fresh, 1.0)
        if np.any(np.abs(fresh - self.row_norms) > 1e-12 * scale):
            raise ValueError("cached row norms disagree with recomputation")

    def compute_row_norms(self) -> np.ndarray:
        sq = self.values * self.values
        out = np.zeros(self.n_rows)
        np.add.at(out, np.repeat(np.arange(self.n_rows), np.diff(self.indptr)), sq)
        return np.sqrt(out)

    @cached_property
    def dense_rows(self) -> bool:
        """True when every row carries all n_cols entries (kernel fast path)."""
        return bool(self.n_cols > 0 and np.all(np.diff(self.indptr) == self.n_cols))

    @property
    def max_row_norm(self) -> float:
        return float(self.row_norms.max()) if self.n_rows else 0.0

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        s = slice(self.indptr[i], self.indptr[i + 1])
        return self.indices[s], self.values[s]

    def to_scipy(self) -> sp.csr_matrix:
        """Zero-copy CSR view of the rows (without the 1/n operator scaling)."""
        return sp.csr_matrix(
            (self.values, self.indices, self.indptr), shape=(self.n_rows, self.n_cols)
        )

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    @staticmethod
    def from_rows(rows: Iterable[tuple[np.ndarray, np.ndarray]], n_cols: int) -> "SparseRowMatrix":
        rows = list(rows)
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        for i, (cols, _) in enumerate(rows):
            indptr[i + 1] = indptr[i] + len(cols)
        indices = np.concatenate([c for c, _ in rows]) if rows else np.empty(0, np.int32)
        values = np.concatenate([v for _, v in rows]) if rows else np.empty(0, np.float64)
        return SparseRowMatrix(
            n_rows=len(rows), n_cols=n_cols,
            indptr=indptr, indices=indices.astype(np.int32),
            values=values.astype(np.float64),
        )

    @staticmethod
    def from_dense(a: np.ndarray) -> "SparseRowMatrix":
        a = np.asarray(a, dtype=np.float64)
        m = sp.csr_matrix(a)
        m.sort_indices()
        return SparseRowMatrix(
            n_rows=a.shape[0], n_cols=a.shape[1],
            indptr=m.indptr.astype(np.int64), indices=m.indices.astype(np.int32),
            values=m.data.astype(np.float64),
        )


@dataclass(frozen=True)
class LabeledDataset:
    matrix: SparseRowMatrix
    labels: np.ndarray  # float64, one per row

    def __post_init__(self):
        if len(self.labels) != self.matrix.n_rows:
            raise ValueError("labels length must equal n_rows")
        self.labels.flags.writeable = False

    def require_binary_labels(self):
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            bad = self.labels[~np.isin(self.labels, (-1.0, 1.0))][0]
            raise ValueError(
                f"labels must be in {{+1, -1}} (found {bad}); "
                "remap first (e.g. remap_mnist_labels)"
            )


def parse_libsvm(stream: TextIO | Iterable[str], n_cols: int | None = None) -> LabeledDataset:
    """Parse LIBSVM text ("label idx:val ...", 1-based indices) into a dataset.

    n_cols defaults to the max feature index seen; passing it can only widen the
    matrix.  Blank lines are skipped; any malformed line raises ParseError naming
    the line number.  Duplicate or non-increasing indices within a line are errors.
    """
    labels: list[float] = []
    row_cols: list[np.ndarray] = []
    row_vals: list[np.ndarray] = []
    max_col = 0
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        toks = line.split()
        try:
            labels.append(float(toks[0].replace("−", "-")))
        except ValueError:
            raise ParseError(f"line {lineno}: bad label token {toks[0]!r}") from None
        cols = np.empty(len(toks) - 1, dtype=np.int64)
        vals = np.empty(len(toks) - 1, dtype=np.float64)
        prev = 0
        for t, tok in enumerate(toks[1:]):
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise ParseError(f"line {lineno}: malformed token {tok!r}")
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(f"line {lineno}: non-numeric token {tok!r}") from None
            if idx < 1:
                raise ParseError(f"line {lineno}: index {idx} < 1")
            if idx == prev:
                raise ParseError(f"line {lineno}: duplicate index {idx}")
            if idx < prev:
                raise ParseError(f"line {lineno}: non-increasing index {idx}")
            if not np.isfinite(val):
                raise ParseError(f"line {lineno}: non-finite value in {tok!r}")
            cols[t] = idx - 1
            vals[t] = val
            prev = idx
        max_col = max(max_col, prev)
        row_cols.append(cols)
        row_vals.append(vals)
    if not labels:
        raise ParseError("line 1: empty file")
    if n_cols is None:
        n_cols = max_col
    elif n_cols < max_col:
        raise ParseError(f"n_cols={n_cols} smaller than max index {max_col}")
    matrix = SparseRowMatrix.from_rows(zip(row_cols, row_vals), n_cols)
    return LabeledDataset(matrix=matrix, labels=np.asarray(labels, dtype=np.float64))


def to_libsvm(dataset: LabeledDataset) -> str:
    """Serialize back to LIBSVM text (1-based indices); round-trips through parse_libsvm."""
    lines = []
    m = dataset.matrix
    for i in range(m.n_rows):
        cols, vals = m.row(i)
        toks = [repr(float(dataset.labels[i]))]
        toks += [f"{c + 1}:{float(v)!r}" for c, v in zip(cols, vals)]
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def remap_mnist_labels(raw_labels) -> np.ndarray:
    """Digits {5,...,9} -> +1, {0,...,4} -> -1."""
    raw = np.asarray(raw_labels)
    if raw.size and (np.any(raw < 0) or np.any(raw > 9) or np.any(raw != np.floor(raw))):
        raise ValueError("raw labels must be integers in 0..9")
    return np.where(raw >= 5, 1.0, -1.0)


def normalize_rows(matrix: SparseRowMatrix) -> SparseRowMatrix:
    """Scale every nonzero row to unit Euclidean norm; zero rows stay (warned).

    Guarantees max row norm <= 1 afterwards, so R' <= 1 for the solver.
    """
    norms = matrix.row_norms
    zero_rows = int(np.sum(norms == 0.0))
    if zero_rows:
        log.warning("normalize_rows: %d zero rows left unnormalized", zero_rows)
    safe = np.where(norms == 0.0, 1.0, norms)
    scale = np.repeat(1.0 / safe, np.diff(matrix.indptr))
    return SparseRowMatrix(
        n_rows=matrix.n_rows, n_cols=matrix.n_cols,
        indptr=matrix.indptr, indices=matrix.indices,
        values=matrix.values * scale,
    )


def fold_labels(dataset: LabeledDataset) -> SparseRowMatrix:
    """Replace row i by c_i * b_i so downstream solvers see labels absorbed."""
    dataset.require_binary_labels()
    m = dataset.matrix
    scale = np.repeat(dataset.labels, np.diff(m.indptr))
    return SparseRowMatrix(
        n_rows=m.n_rows, n_cols=m.n_cols,
        indptr=m.indptr, indices=m.indices, values=m.values * scale,
    )


def make_synthetic_classification(
    n_rows: int, n_cols: int, nnz_per_row: int, seed: int
) -> LabeledDataset:
    """Deterministic census-style synthetic dataset: categorical one-hot rows.

    The feature space is partitioned into nnz_per_row groups (a few of them
    large, giving genuinely rare features); each row activates exactly one
    feature per group with a Zipf-skewed within-group choice.  Labels come from
    a planted linear model over a subset of the groups plus ~8% flip noise,
    yielding an imbalanced, learnable problem whose solutions are sparse under
    l1 regularization.
    """
    rng = np.random.default_rng(seed)
    # heterogeneous group sizes: one or two dominant wide groups, rest small
    raw = rng.zipf(1.6, size=nnz_per_row).astype(np.float64)
    sizes = np.maximum(1, np.round(raw / raw.sum() * n_cols)).astype(np.int64)
    while sizes.sum() != n_cols:
        i = int(rng.integers(nnz_per_row))
        if sizes.sum() > n_cols and sizes[i] > 1:
            sizes[i] -= 1
        elif sizes.sum() < n_cols:
            sizes[i] += 1
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    choices = np.empty((n_rows, nnz_per_row), dtype=np.int64)
    for g in range(nnz_per_row):
        pop = 1.0 / np.arange(1, sizes[g] + 1) ** 1.2
        pop /= pop.sum()
        choices[:, g] = offsets[g] + rng.choice(sizes[g], size=n_rows, p=pop)
    choices.sort(axis=1)
    rows = [(choices[i], np.ones(nnz_per_row)) for i in range(n_rows)]
    matrix = SparseRowMatrix.from_rows(rows, n_cols)
    w = np.zeros(n_cols)
    informative = rng.choice(nnz_per_row, size=max(2, nnz_per_row // 3), replace=False)
    for g in informative:
        w[offsets[g] : offsets[g] + sizes[g]] = rng.normal(size=sizes[g])
    raw_margin = matrix.to_scipy() @ w
    margin = raw_margin - np.quantile(raw_margin, 0.76)  # ~24% positives, like census data
    labels = np.where(margin > 0, 1.0, -1.0)
    flips = rng.random(n_rows) < 0.08
    labels[flips] = -labels[flips]
    return LabeledDataset(matrix=matrix, labels=labels)
