import numpy as np
import pytest

from ptsync.dynamics import NodeDynamics, saturation, verify_quad
from ptsync.errors import InvalidParametersError


class TestSaturation:
    def test_linear_inside_unit_interval(self):
        u = np.linspace(-1.0, 1.0, 21)
        np.testing.assert_allclose(saturation(u), u, atol=1e-15)

    def test_clips_outside(self):
        np.testing.assert_array_equal(saturation(np.array([-7.0, 3.5])), [-1.0, 1.0])

    def test_odd(self):
        u = np.linspace(-5.0, 5.0, 101)
        np.testing.assert_allclose(saturation(-u), -saturation(u), atol=1e-15)

    def test_one_lipschitz_pointwise(self):
        rng = np.random.default_rng(3)
        u, v = rng.uniform(-10.0, 10.0, (2, 2000))
        assert np.all(np.abs(saturation(u) - saturation(v)) <= np.abs(u - v) + 1e-15)


class TestNodeDynamics:
    def test_chua3_shape_and_constants(self):
        dyn = NodeDynamics.chua3()
        assert dyn.n_dims == 3
        np.testing.assert_array_equal(dyn.D, -np.eye(3))
        assert dyn.hf == 5.4704

    def test_f_single_and_stacked_agree(self):
        dyn = NodeDynamics.chua3()
        rng = np.random.default_rng(9)
        xs = rng.uniform(-3.0, 3.0, (5, 3))
        stacked = dyn.f(xs)
        for i, x in enumerate(xs):
            np.testing.assert_allclose(stacked[i], dyn.f(x), atol=1e-14)

    def test_f_matches_componentwise_definition(self):
        dyn = NodeDynamics.chua3()
        x = np.array([0.3, -2.0, 1.5])
        expected = dyn.D @ x + dyn.A @ saturation(x)
        np.testing.assert_allclose(dyn.f(x), expected, atol=1e-14)

    def test_analytic_hf_chua3(self):
        np.testing.assert_allclose(NodeDynamics.chua3().analytic_hf(), 5.4704, atol=1e-3)

    def test_analytic_hf_pure_linear(self):
        dyn = NodeDynamics.pwl_affine(D=-2.0 * np.eye(2), A=np.zeros((2, 2)), hf=1.0)
        np.testing.assert_allclose(dyn.analytic_hf(), -2.0, atol=1e-12)

    def test_invalid_hf_rejected(self):
        with pytest.raises(InvalidParametersError):
            NodeDynamics.pwl_affine(D=-np.eye(2), A=np.zeros((2, 2)), hf=-1.0)


class TestVerifyQuad:
    def test_chua3_never_exceeds_declared_bound(self):
        check = verify_quad(NodeDynamics.chua3(), trials=100_000, radius=50.0, rng_seed=42)
        assert check.passed
        assert check.max_ratio <= 5.4704 + 1e-6

    def test_pure_decay_ratio_is_minus_one(self):
        dyn = NodeDynamics.pwl_affine(D=-np.eye(3), A=np.zeros((3, 3)), hf=1.0)
        check = verify_quad(dyn, trials=5_000, radius=10.0, rng_seed=0)
        np.testing.assert_allclose(check.max_ratio, -1.0, atol=1e-12)

    def test_understated_bound_fails(self):
        dyn = NodeDynamics.pwl_affine(
            D=-np.eye(3), A=NodeDynamics.chua3().A.copy(), hf=0.5
        )
        check = verify_quad(dyn, trials=20_000, radius=5.0, rng_seed=1)
        assert not check.passed

    def test_deterministic_for_fixed_seed(self):
        dyn = NodeDynamics.chua3()
        a = verify_quad(dyn, trials=10_000, radius=20.0, rng_seed=7)
        b = verify_quad(dyn, trials=10_000, radius=20.0, rng_seed=7)
        assert a.max_ratio == b.max_ratio

    def test_requires_at_least_one_trial(self):
        with pytest.raises(InvalidParametersError):
            verify_quad(NodeDynamics.chua3(), trials=0, radius=1.0, rng_seed=0)
