import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from ptsync.errors import (
    BlowupError,
    InvalidParametersError,
    TimeOutOfRangeError,
    UnsupportedRegulatorError,
)
from ptsync.regulator import Regulator
from ptsync.scalar import (
    PhiValue,
    ScalarModel,
    classify_phi,
    closed_form,
    simulate_scalar,
)


def _ivp_oracle(m: ScalarModel, s: float) -> float:
    """Independent stiff integration of the scalar model up to s."""

    def rhs(t, y):
        v = y[0]
        vp = max(v, 0.0)
        c = m.regulator.value(t)
        if m.kind == "lemma2":
            return [-m.delta * v / c]
        if m.kind == "power":
            return [-m.delta * vp**m.p / c]
        return [m.delta1 * vp**m.p - m.delta2 * v / c]

    sol = solve_ivp(rhs, (0.0, s), [m.v0], method="Radau", rtol=1e-10, atol=1e-12)
    assert sol.success
    return float(sol.y[0, -1])


class TestClosedForm:
    def test_lemma2_is_exponential_of_the_integral(self):
        reg = Regulator("power", T=1.0, ell=1.0)
        m = ScalarModel(kind="lemma2", regulator=reg, v0=15.0, delta=2.0)
        for s in (0.3, 0.9, 0.999):
            # ell = 1 integral in closed form: V = V0 ((T-s)/T)^delta
            expected = 15.0 * ((1.0 - s) / 1.0) ** 2.0
            np.testing.assert_allclose(closed_form(m, s), expected, rtol=1e-8)

    def test_power_p2_reciprocal_rule(self):
        reg = Regulator("power", T=1.0, ell=1.0)
        m = ScalarModel(kind="power", regulator=reg, v0=4.0, delta=1.5, p=2.0)
        for s in (0.25, 0.75):
            integral = math.log(1.0 / (1.0 - s))
            expected = 1.0 / (1.0 / 4.0 + 1.5 * integral)
            np.testing.assert_allclose(closed_form(m, s), expected, rtol=1e-8)

    def test_power_p_half_reaches_zero_in_finite_time(self):
        reg = Regulator("power", T=2.0, ell=1.0)
        m = ScalarModel(kind="power", regulator=reg, v0=0.01, delta=3.0, p=0.5)
        assert closed_form(m, 0.01) > 0.0
        assert closed_form(m, 1.9) == 0.0

    @pytest.mark.parametrize("p", [0.5, 2.0])
    def test_lemma3_matches_independent_integration(self, p):
        reg = Regulator("power", T=1.0, ell=1.0)
        m = ScalarModel(
            kind="lemma3", regulator=reg, v0=2.0, delta1=0.4, delta2=3.0, p=p
        )
        for s in (0.2, 0.6, 0.9):
            np.testing.assert_allclose(closed_form(m, s), _ivp_oracle(m, s), rtol=1e-6)

    def test_lemma3_p1_matches_independent_integration(self):
        reg = Regulator("power", T=1.0, ell=1.0)
        m = ScalarModel(kind="lemma3", regulator=reg, v0=2.0, delta1=0.5, delta2=2.0, p=1.0)
        for s in (0.3, 0.8):
            np.testing.assert_allclose(closed_form(m, s), _ivp_oracle(m, s), rtol=1e-6)

    def test_lemma3_unstable_growth_blows_up(self):
        reg = Regulator("power", T=1.0, ell=1.0)
        m = ScalarModel(kind="lemma3", regulator=reg, v0=10.0, delta1=50.0, delta2=0.5, p=2.0)
        with pytest.raises(BlowupError):
            closed_form(m, 0.9)

    def test_zero_initial_value_stays_zero(self):
        reg = Regulator("power", T=1.0, ell=2.0)
        for kind in ("lemma2", "power", "lemma3"):
            m = ScalarModel(kind=kind, regulator=reg, v0=0.0, delta1=1.0, delta2=2.0)
            assert closed_form(m, 0.5) == 0.0

    def test_time_range(self):
        m = ScalarModel(kind="lemma2", regulator=Regulator("power", T=1.0), v0=1.0)
        with pytest.raises(TimeOutOfRangeError):
            closed_form(m, 1.0)


class TestSimulation:
    @pytest.mark.parametrize(
        "m",
        [
            ScalarModel(kind="lemma2", regulator=Regulator("power", T=1.0, ell=1.0), v0=15.0, delta=0.5),
            ScalarModel(kind="lemma2", regulator=Regulator("power", T=1.0, ell=3.0), v0=15.0, delta=2.0),
            ScalarModel(kind="lemma2", regulator=Regulator("exp_a", T=1.0, a=2.0), v0=15.0, delta=1.0),
            ScalarModel(kind="lemma2", regulator=Regulator("exp_b", T=1.0, a=2.0), v0=15.0, delta=1.0),
            ScalarModel(kind="power", regulator=Regulator("power", T=1.0, ell=1.0), v0=4.0, delta=1.0, p=2.0),
            ScalarModel(kind="lemma3", regulator=Regulator("power", T=1.0, ell=1.0), v0=2.0, delta1=0.4, delta2=3.0, p=2.0),
        ],
    )
    def test_numeric_matches_closed_form(self, m):
        traj = simulate_scalar(m, stop_gap=1e-3, samples=80)
        exact = np.array([closed_form(m, t) for t in traj.times])
        rel = np.abs(traj.values - exact) / np.maximum(np.abs(exact), 1e-300)
        assert np.max(rel) < 1e-5

    def test_sample_grid_shape(self):
        m = ScalarModel(kind="lemma2", regulator=Regulator("power", T=2.0), v0=1.0)
        traj = simulate_scalar(m, stop_gap=1e-4, samples=50)
        assert traj.times[0] == 0.0
        assert traj.times[-1] == 2.0 - 1e-4
        assert np.all(np.diff(traj.times) > 0)
        assert traj.values.shape == (50,)

    def test_power_p_half_numeric_reaches_zero(self):
        m = ScalarModel(
            kind="power", regulator=Regulator("power", T=2.0, ell=1.0), v0=0.01, delta=3.0, p=0.5
        )
        traj = simulate_scalar(m, stop_gap=1e-3, samples=60)
        assert traj.values[-1] == 0.0

    def test_blowup_reports_partial_prefix(self):
        m = ScalarModel(
            kind="lemma3",
            regulator=Regulator("power", T=1.0, ell=1.0),
            v0=10.0,
            delta1=50.0,
            delta2=0.5,
            p=2.0,
        )
        with pytest.raises(BlowupError) as exc_info:
            simulate_scalar(m, stop_gap=1e-3, samples=60)
        partial = exc_info.value.partial
        assert partial is not None
        assert partial.values.shape == partial.times.shape

    def test_invalid_stop_gap(self):
        m = ScalarModel(kind="lemma2", regulator=Regulator("power", T=1.0), v0=1.0)
        with pytest.raises(InvalidParametersError):
            simulate_scalar(m, stop_gap=2.0, samples=10)


class TestConstruction:
    def test_lemma3_p1_needs_margin(self):
        reg = Regulator("power", T=3.0, ell=2.0)  # C(0) = 9
        with pytest.raises(InvalidParametersError):
            ScalarModel(kind="lemma3", regulator=reg, v0=1.0, delta1=1.0, delta2=5.0, p=1.0)
        # Same coefficients succeed once delta2 clears delta1 * C(0).
        ScalarModel(kind="lemma3", regulator=reg, v0=1.0, delta1=1.0, delta2=10.0, p=1.0)

    def test_negative_parameters_rejected(self):
        reg = Regulator("power", T=1.0)
        with pytest.raises(InvalidParametersError):
            ScalarModel(kind="lemma2", regulator=reg, v0=-1.0)
        with pytest.raises(InvalidParametersError):
            ScalarModel(kind="lemma2", regulator=reg, v0=1.0, delta=0.0)
        with pytest.raises(InvalidParametersError):
            ScalarModel(kind="nope", regulator=reg, v0=1.0)


class TestClassification:
    def test_figure_grid_rules(self):
        # ell = 1: the decay coefficient decides the terminal slope class.
        for delta, expected in ((0.5, PhiValue.INFINITE), (1.0, PhiValue.NONZERO_CONSTANT), (2.0, PhiValue.ZERO)):
            m = ScalarModel(
                kind="lemma2", regulator=Regulator("power", T=1.0, ell=1.0), v0=15.0, delta=delta
            )
            assert classify_phi(m).value is expected
        # ell > 1: zero regardless of delta.
        for ell in (2.0, 3.0):
            for delta in (0.5, 1.0, 2.0):
                m = ScalarModel(
                    kind="lemma2", regulator=Regulator("power", T=1.0, ell=ell), v0=15.0, delta=delta
                )
                assert classify_phi(m).value is PhiValue.ZERO

    def test_critical_constant_value(self):
        m = ScalarModel(kind="lemma2", regulator=Regulator("power", T=1.0, ell=1.0), v0=15.0, delta=1.0)
        phi = classify_phi(m)
        assert phi.value is PhiValue.NONZERO_CONSTANT
        np.testing.assert_allclose(phi.constant, 15.0)

    def test_critical_constant_matches_simulation(self):
        # V(s)/C(s) near T should approach V0/T^delta.
        m = ScalarModel(kind="lemma2", regulator=Regulator("power", T=1.0, ell=1.0), v0=15.0, delta=1.0)
        s = 1.0 - 1e-6
        ratio = closed_form(m, s) / m.regulator.value(s)
        np.testing.assert_allclose(ratio, 15.0, rtol=1e-6)

    def test_lemma3_classifies_zero(self):
        m = ScalarModel(
            kind="lemma3",
            regulator=Regulator("power", T=1.0, ell=1.0),
            v0=2.0,
            delta1=0.2,
            delta2=3.0,
            p=0.5,
        )
        assert classify_phi(m).value is PhiValue.ZERO

    def test_exponential_regulators_unsupported(self):
        for kind in ("exp_a", "exp_b"):
            m = ScalarModel(kind="lemma2", regulator=Regulator(kind, T=1.0, a=1.0), v0=1.0)
            with pytest.raises(UnsupportedRegulatorError):
                classify_phi(m)

    def test_power_model_not_classifiable(self):
        m = ScalarModel(kind="power", regulator=Regulator("power", T=1.0), v0=1.0, p=2.0)
        with pytest.raises(InvalidParametersError):
            classify_phi(m)

    def test_lemma2_sublinear_regulator_not_classifiable(self):
        m = ScalarModel(kind="lemma2", regulator=Regulator("power", T=1.0, ell=0.5), v0=1.0)
        with pytest.raises(InvalidParametersError):
            classify_phi(m)
