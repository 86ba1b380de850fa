import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from saddlevr.dataio import LabeledDataset, SparseRowMatrix
from saddlevr.problem import box_game_problem, lad_problem, svm_elastic_net_problem

settings.register_profile(
    "ci", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def unit_rows(rng, n, d):
    rows = rng.normal(size=(n, d))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return rows


def make_box_game(rng, n, d, sigma=0.0, gamma=0.0):
    return box_game_problem(rng.normal(size=(n, d)), sigma=sigma, gamma=gamma)


def make_erm_instance(rng, n, d, conjugate="hinge", sigma=0.0, lam=1e-3):
    rows = unit_rows(rng, n, d)
    if conjugate == "hinge":
        labels = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        ds = LabeledDataset(matrix=SparseRowMatrix.from_dense(rows), labels=labels)
        return svm_elastic_net_problem(ds, lam=lam, sigma=sigma)
    targets = rng.normal(size=n)
    ds = LabeledDataset(matrix=SparseRowMatrix.from_dense(rows), labels=targets)
    return lad_problem(ds, lam=lam, sigma=sigma)


def grid_prox_oracle(gstar, lo, hi, v, tau, step=1e-6):
    """Brute-force argmin of tau*g*(y) + (y - v)^2/2 over a grid on [lo, hi]."""
    grid = np.arange(lo, hi + step, step)
    obj = tau * gstar(grid) + 0.5 * (grid - v) ** 2
    return float(grid[np.argmin(obj)])


@pytest.fixture(scope="session")
def small_hinge_problem():
    rng = np.random.default_rng(1234)
    return make_erm_instance(rng, 8, 5, "hinge", sigma=0.1)
