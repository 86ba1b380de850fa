import numpy as np
import pytest

from saddlevr.refsolver import ref_run
from saddlevr.rng import SplitMix64
from saddlevr.vrpda2 import vr_init, vr_run

from conftest import make_erm_instance


def test_index_stream_matches_rng_contract():
    rng = np.random.default_rng(0)
    pr = make_erm_instance(rng, 9, 4, "hinge")
    seed = 31
    ref = ref_run(pr, np.zeros(4), np.zeros(9), 50, seed, dual_averages=False)
    expected = SplitMix64(seed).indices(9, 49)
    assert np.array_equal(np.array(ref.j), expected)


def test_k1_equals_vr_init():
    rng = np.random.default_rng(1)
    pr = make_erm_instance(rng, 6, 3, "lad")
    x0, y0 = rng.normal(size=3), np.zeros(6)
    ref = ref_run(pr, x0, y0, 1, 0)
    st = vr_init(pr, x0, y0)
    assert np.allclose(ref.x[0], st.x, atol=1e-15)
    assert np.allclose(ref.y[0], st.y, atol=1e-15)
    assert ref.A[0] == st.A_k


def test_mutual_consistency_random_instance():
    rng = np.random.default_rng(2)
    pr = make_erm_instance(rng, 4, 3, "hinge", sigma=0.0)
    seed = 12
    ref = ref_run(pr, np.zeros(3), np.zeros(4), 200, seed, dual_averages=False)
    res = vr_run(pr, np.zeros(3), np.zeros(4), 200, seed, record_trajectory=True)
    dev = max(max(np.max(np.abs(t[0] - rx)), np.max(np.abs(t[1] - ry)))
              for t, (rx, ry) in zip(res.trajectory, zip(ref.x, ref.y)))
    assert dev <= 1e-9


def test_deterministic_given_seed():
    rng = np.random.default_rng(3)
    pr = make_erm_instance(rng, 5, 3, "hinge")
    a = ref_run(pr, np.zeros(3), np.zeros(5), 40, 9)
    b = ref_run(pr, np.zeros(3), np.zeros(5), 40, 9)
    assert all(np.array_equal(x1, x2) for x1, x2 in zip(a.x, b.x))
    assert np.array_equal(a.y_avg[-1], b.y_avg[-1])


def test_rejects_bad_k():
    rng = np.random.default_rng(4)
    pr = make_erm_instance(rng, 5, 3, "hinge")
    with pytest.raises(ValueError):
        ref_run(pr, np.zeros(3), np.zeros(5), 0, 1)
