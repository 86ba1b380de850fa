import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from saddlevr.prox import (
    BoxProx,
    ElasticNetProx,
    ScalarProx,
    prox_box,
    prox_elastic_net,
    prox_hinge_conjugate,
    prox_lad_conjugate,
)

from conftest import grid_prox_oracle


class TestElasticNet:
    def test_grid_search_examples(self):
        # oracle: argmin tau*l(x) + (x-v)^2/2 on [-3, 3], step 1e-5
        for v, tau, lam, sig, expected in [
            (1.0, 1.0, 0.5, 1.0, 0.25),
            (-0.3, 2.0, 0.1, 0.5, -0.05),
        ]:
            grid = np.arange(-3.0, 3.0, 1e-5)
            obj = tau * (lam * np.abs(grid) + sig / 2 * grid**2) + 0.5 * (grid - v) ** 2
            oracle = grid[np.argmin(obj)]
            assert abs(oracle - expected) < 2e-5
            assert prox_elastic_net(v, tau, lam, sig) == pytest.approx(expected, abs=1e-12)

    def test_zero_weights_is_identity(self):
        v = np.array([-2.0, 0.0, 3.5])
        assert np.array_equal(prox_elastic_net(v, 1.0, 0.0, 0.0), v)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            prox_elastic_net(np.array([np.nan]), 1.0, 0.1, 0.0)

    def test_vector_prox_matches_scalar(self):
        p = ElasticNetProx(0.3, 0.7)
        v = np.linspace(-2, 2, 11)
        out = p.prox(v, 1.5)
        for vi, oi in zip(v, out):
            assert oi == pytest.approx(prox_elastic_net(vi, 1.5, 0.3, 0.7))


class TestConjugates:
    def test_hinge_examples(self):
        gstar = lambda y: y  # on [-1, 0]
        for v, tau, expected in [(0.5, 0.2, 0.0), (-0.5, 0.2, -0.7), (-2.0, 0.5, -1.0)]:
            oracle = grid_prox_oracle(gstar, -1.0, 0.0, v, tau)
            assert abs(oracle - expected) < 2e-6
            assert prox_hinge_conjugate(v, tau) == pytest.approx(expected, abs=1e-12)

    def test_lad_examples(self):
        for v, tau, c, expected in [(0.0, 1.0, 0.0, 0.0), (2.0, 0.5, 1.0, 1.0),
                                    (-0.2, 1.0, 0.3, -0.5)]:
            oracle = grid_prox_oracle(lambda y: c * y, -1.0, 1.0, v, tau)
            assert abs(oracle - expected) < 2e-6
            assert prox_lad_conjugate(v, tau, c) == pytest.approx(expected, abs=1e-12)

    def test_box_examples(self):
        assert prox_box(2.0, -1.0, 1.0) == 1.0
        assert prox_box(0.3, -1.0, 1.0) == 0.3
        assert prox_box(-5.0, 0.0, 1.0) == 0.0
        with pytest.raises(ValueError):
            prox_box(0.0, 1.0, -1.0)

    def test_scalar_prox_against_grid_oracle(self):
        rng = np.random.default_rng(0)
        cases = [
            ScalarProx(eta=1.0, quad=0.0, lo=-1.0, hi=0.0),    # hinge conjugate
            ScalarProx(eta=-0.4, quad=0.0, lo=-1.0, hi=1.0),   # lad conjugate
            ScalarProx(eta=0.0, quad=2.5, lo=-1.0, hi=1.0),    # quadratic game dual
        ]
        for sp in cases:
            gstar = lambda y: sp.eta * y + 0.5 * sp.quad * y * y
            for _ in range(40):
                v = float(rng.uniform(-3, 3))
                tau = float(rng.uniform(0, 4))
                oracle = grid_prox_oracle(gstar, sp.lo, sp.hi, v, tau)
                assert abs(sp.prox(v, tau) - oracle) <= 1e-5

    def test_prox_at_zero_weight_projects(self):
        sp = ScalarProx(eta=1.0, lo=-1.0, hi=0.0)
        assert sp.prox(0.7, 0.0) == 0.0
        assert sp.prox(-0.3, 0.0) == -0.3
        assert sp.prox(-4.0, 0.0) == -1.0

    def test_firm_fixed_point(self):
        sp = ScalarProx(eta=1.0, lo=-1.0, hi=0.0)
        rng = np.random.default_rng(5)
        for _ in range(100):
            out = sp.prox(float(rng.uniform(-4, 4)), float(rng.uniform(0, 3)))
            assert sp.prox(out, 0.0) == out


@given(v1=st.floats(-10, 10), v2=st.floats(-10, 10), tau=st.floats(0, 10))
def test_nonexpansive_hinge(v1, v2, tau):
    d = abs(prox_hinge_conjugate(v1, tau) - prox_hinge_conjugate(v2, tau))
    assert d <= abs(v1 - v2) + 1e-15


@given(v1=st.floats(-10, 10), v2=st.floats(-10, 10),
       tau=st.floats(0, 10), lam=st.floats(0, 5), sig=st.floats(0, 5))
def test_nonexpansive_elastic_net(v1, v2, tau, lam, sig):
    d = abs(prox_elastic_net(v1, tau, lam, sig) - prox_elastic_net(v2, tau, lam, sig))
    assert d <= abs(v1 - v2) + 1e-15


def test_box_primal_prox_domain():
    p = BoxProx(np.array([-1.0, 0.0]), np.array([1.0, 2.0]), sigma=0.5)
    out = p.prox(np.array([5.0, -5.0]), 2.0)
    assert p.in_domain(out)
    assert np.array_equal(out, [1.0, 0.0])
