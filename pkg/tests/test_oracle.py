"""ODE oracle tests: right-hand side, conservation, period measurement."""

import math

import numpy as np
import pytest

from triadlab import oracle
from triadlab.errors import InsufficientSpanError, StiffnessError
from triadlab.oracle import (
    AmplitudeState,
    AmplitudeTrajectory,
    hamiltonian_functionals,
    integrate,
    integrate_fixed,
    manley_rowe_invariants,
    measure_period,
    rhs,
)
from triadlab.triad import (
    FormulaVariant,
    InitialAmplitudes,
    build_closed_form,
    build_parameters,
)

GAMMA = (-2.0, 1.0, 1.0)


@pytest.fixture
def init():
    return InitialAmplitudes((0.0, 1.0, 0.6))


@pytest.fixture
def predicted_period(init):
    params = build_parameters(alpha=(0, 0, 0), delta1=1.0, gamma=GAMMA)
    return build_closed_form(params, init, FormulaVariant.ORACLE_CONSISTENT).period


class TestRhs:
    def test_direct_substitution(self):
        d = rhs((0.0, 1.0, 1.0), GAMMA)
        np.testing.assert_array_equal(d, [-2.0, 0.0, 0.0])

    def test_fixed_point(self):
        d = rhs((0.0, 0.0, 0.0), GAMMA)
        np.testing.assert_array_equal(d, [0.0, 0.0, 0.0])

    def test_complex_arithmetic_by_hand(self):
        d = rhs((1.0, 1j, 1.0), GAMMA)
        np.testing.assert_array_equal(d, [-2j, 1.0, -1j])

    def test_accepts_state_object(self):
        state = AmplitudeState((0.0, 1.0, 1.0), 0.0)
        np.testing.assert_array_equal(rhs(state, GAMMA), [-2.0, 0.0, 0.0])

    def test_vectorized_over_grids(self):
        f = np.array([[0.0, 0.0], [1.0, 2.0], [1.0, 0.5]], dtype=complex)
        d = rhs(f, GAMMA)
        np.testing.assert_array_equal(d[0], [-2.0, -2.0])


class TestHamiltonianFunctionals:
    def test_zero_when_first_wave_rests(self):
        assert hamiltonian_functionals((0.0, 3.0, 2.0 - 1j)) == (0.0, 0.0)

    def test_unit_triple(self):
        assert hamiltonian_functionals((1.0, 1.0, 1.0)) == (1.0, 0.0)

    def test_imaginary_component(self):
        assert hamiltonian_functionals((1.0, 1j, 1.0)) == (0.0, 1.0)


class TestIntegrate:
    def test_invariant_subspace(self):
        traj = integrate(InitialAmplitudes((0.0, 1.0, 0.0)), GAMMA, 5.0, tol=1e-10)
        np.testing.assert_allclose(traj.amplitudes[:, 0], 0.0, atol=1e-12)
        np.testing.assert_allclose(traj.amplitudes[:, 1], 1.0, atol=1e-12)
        np.testing.assert_allclose(traj.amplitudes[:, 2], 0.0, atol=1e-12)

    def test_period_return(self, init, predicted_period):
        traj = integrate(init, GAMMA, predicted_period, tol=1e-10, samples=64)
        mag = traj.magnitudes_sq
        np.testing.assert_allclose(mag[-1, 1], 1.0, rtol=1e-8)
        np.testing.assert_allclose(mag[-1, 2], 0.36, rtol=1e-8)

    def test_hamiltonian_conserved_from_zero(self, init, predicted_period):
        traj = integrate(init, GAMMA, 5.0 * predicted_period, tol=1e-10)
        assert np.max(np.abs(traj.hamiltonian_im)) <= 1e-10

    def test_hamiltonian_conserved_complex_seed(self, predicted_period):
        seed = (0.3 + 0.1j, 0.9 * np.exp(0.4j), 0.5j)
        traj = integrate(seed, GAMMA, 5.0 * predicted_period, tol=1e-11)
        scale = float(np.max(np.abs(traj.amplitudes))) ** 3
        assert traj.hamiltonian_im_drift <= 1e-9 * scale

    def test_manley_rowe_drift_tight_tol(self, init):
        traj = integrate(init, GAMMA, 10.0, tol=1e-12)
        report = manley_rowe_invariants(traj)
        assert report.max_drift <= 1e-9 * report.scale

    def test_time_reversal(self, init):
        tol = 1e-11
        forward = integrate(init, GAMMA, 4.0, tol=tol, samples=5)
        back = integrate(
            tuple(forward.amplitudes[-1]),
            tuple(-g for g in GAMMA),
            4.0,
            tol=tol,
            samples=5,
        )
        np.testing.assert_allclose(
            back.amplitudes[-1],
            np.asarray(init.psi0, dtype=complex),
            atol=100 * tol,
        )

    def test_tolerance_range_enforced(self, init):
        with pytest.raises(ValueError):
            integrate(init, GAMMA, 1.0, tol=1e-5)
        with pytest.raises(ValueError):
            integrate(init, GAMMA, 1.0, tol=1e-14)

    def test_t_end_positive(self, init):
        with pytest.raises(ValueError):
            integrate(init, GAMMA, -1.0)

    def test_explicit_sample_times(self, init):
        times = np.array([0.0, 0.3, 1.1, 2.0])
        traj = integrate(init, GAMMA, 2.0, samples=times)
        np.testing.assert_array_equal(traj.times, times)

    def test_sample_times_strictly_increasing_required(self):
        with pytest.raises(ValueError):
            AmplitudeTrajectory(
                times=np.array([0.0, 0.0, 1.0]),
                amplitudes=np.zeros((3, 3), dtype=complex),
                gamma=GAMMA,
                tol=1e-10,
                hamiltonian_re=np.zeros(3),
                hamiltonian_im=np.zeros(3),
                manley_rowe=np.zeros((3, 3)),
            )

    def test_driver_is_real_part(self, init):
        # d/dt of the triple product is real along trajectories: the
        # finite-difference derivative of H_im vanishes while H_re moves,
        # and dH/dt matches g1|f2 f3|^2 + g2|f1 f3|^2 + g3|f1 f2|^2.
        traj = integrate(init, GAMMA, 1.0, tol=1e-12, samples=2001)
        dt = traj.times[1] - traj.times[0]
        dim = np.diff(traj.hamiltonian_im) / dt
        dre = np.diff(traj.hamiltonian_re) / dt
        f = traj.amplitudes
        predicted = (
            GAMMA[0] * np.abs(f[:, 1] * f[:, 2]) ** 2
            + GAMMA[1] * np.abs(f[:, 0] * f[:, 2]) ** 2
            + GAMMA[2] * np.abs(f[:, 0] * f[:, 1]) ** 2
        )
        mid = 0.5 * (predicted[:-1] + predicted[1:])
        assert np.max(np.abs(dim)) <= 1e-8
        np.testing.assert_allclose(dre, mid, atol=5e-4 * np.max(np.abs(mid)))

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_stiffness_error_on_absurd_coupling(self):
        with pytest.raises((StiffnessError, OverflowError)):
            integrate((1e150, 1e150, 1e150), (-2e150, 1e150, 1e150), 1.0, tol=1e-10)


class TestFixedStepReference:
    def test_convergence_order_at_least_fourth(self, init):
        # Halving the step in the non-adaptive mode shrinks the error by
        # >= 2^4 on a smooth case.
        reference = integrate(init, GAMMA, 2.0, tol=1e-13, samples=3)
        truth = reference.amplitudes[-1]
        errors = []
        for n_steps in (40, 80, 160):
            traj = integrate_fixed(init, GAMMA, 2.0, n_steps)
            errors.append(float(np.max(np.abs(traj.amplitudes[-1] - truth))))
        assert errors[0] / errors[1] >= 2**4 * 0.9
        assert errors[1] / errors[2] >= 2**4 * 0.9

    def test_single_step_is_classical_rk4(self):
        # One fixed step equals the textbook RK4 update computed by hand.
        h = 0.1
        f0 = np.array([0.0, 1.0, 0.6], dtype=complex)

        def f(y):
            return np.array(
                [
                    GAMMA[0] * y[1] * y[2],
                    GAMMA[1] * y[0] * np.conj(y[2]),
                    GAMMA[2] * y[0] * np.conj(y[1]),
                ]
            )

        k1 = f(f0)
        k2 = f(f0 + 0.5 * h * k1)
        k3 = f(f0 + 0.5 * h * k2)
        k4 = f(f0 + h * k3)
        expected = f0 + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        traj = integrate_fixed(InitialAmplitudes(tuple(f0)), GAMMA, h, 1)
        np.testing.assert_allclose(traj.amplitudes[-1], expected, atol=1e-16)


class TestManleyRowe:
    def test_constant_zero_trajectory(self):
        traj = integrate((0.0, 0.0, 0.0), GAMMA, 1.0, samples=16)
        report = manley_rowe_invariants(traj)
        assert report.drifts == (0.0, 0.0, 0.0)

    def test_single_sample(self, init):
        traj = integrate(init, GAMMA, 1.0, samples=np.array([0.0]))
        report = manley_rowe_invariants(traj)
        assert report.drifts == (0.0, 0.0, 0.0)

    def test_integrated_drift_small(self, init):
        traj = integrate(init, GAMMA, 12.0, tol=1e-12)
        report = manley_rowe_invariants(traj)
        assert report.max_drift <= 1e-9 * report.scale


class TestMeasurePeriod:
    def test_synthetic_sin_squared(self):
        # |f1|^2 = sin^2(pi t / T0) has period T0; build a fake trajectory.
        t0 = 1.37
        times = np.linspace(0.0, 4.0 * t0, 4001)
        f1 = np.abs(np.sin(np.pi * times / t0))
        amps = np.zeros((len(times), 3), dtype=complex)
        amps[:, 0] = f1
        amps[:, 1] = 1.0
        traj = oracle._build_trajectory(times, amps, GAMMA, tol=1e-10)
        estimate = measure_period(traj)
        assert estimate.period == pytest.approx(t0, rel=1e-8)

    def test_insufficient_span(self, init, predicted_period):
        traj = integrate(init, GAMMA, 0.5 * predicted_period, tol=1e-10)
        with pytest.raises(InsufficientSpanError):
            measure_period(traj)

    def test_matches_oracle_consistent_prediction(self, init, predicted_period):
        traj = integrate(init, GAMMA, 3.25 * predicted_period, tol=1e-10, samples=4096)
        estimate = measure_period(traj)
        assert estimate.period == pytest.approx(predicted_period, rel=1e-6)

    def test_ratio_against_as_printed(self, init, predicted_period):
        params = build_parameters(alpha=(0, 0, 0), delta1=1.0, gamma=GAMMA)
        ap = build_closed_form(params, init, FormulaVariant.AS_PRINTED)
        traj = integrate(init, GAMMA, 3.25 * predicted_period, tol=1e-10, samples=4096)
        estimate = measure_period(traj)
        # The measured/AsPrinted ratio is reported, whatever it is; for
        # this system it lands on sqrt(2).
        ratio = estimate.period / ap.period
        assert ratio == pytest.approx(math.sqrt(2.0), rel=1e-6)
