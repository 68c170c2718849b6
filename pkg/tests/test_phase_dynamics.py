import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discrete_sho.errors import StabilityWindowError
from discrete_sho.phase_dynamics import (
    OscillatorParams,
    PhasePoint,
    StepParams,
    TransferMatrix,
    hamiltonian,
    matrix_power_closed,
    matrix_power_iter,
    modified_hamiltonian,
    rotation_angle,
    shadow_factor,
    step,
    to_reduced,
    from_reduced,
    trajectory,
    transfer_matrix,
)
from oracles import literal_power, naive_power

UNIT = OscillatorParams()
thetas = st.floats(min_value=1e-6, max_value=4 - 1e-6, allow_nan=False)


def sp(theta, params=UNIT):
    return StepParams.from_theta(theta, params)


class TestParams:
    def test_inconsistent_rejected(self):
        with pytest.raises(ValueError):
            OscillatorParams(k=2.0, omega=1.0)

    @pytest.mark.parametrize("field", ["k", "omega", "h"])
    def test_nonpositive_rejected(self, field):
        kwargs = dict(k=1.0, omega=1.0, h=1.0)
        kwargs[field] = 0.0
        with pytest.raises(ValueError):
            OscillatorParams(**kwargs)

    def test_constructors(self):
        assert OscillatorParams.from_k(4.0).omega == 2.0
        assert OscillatorParams.from_omega(3.0, h=2.0) == OscillatorParams(9.0, 3.0, 2.0)
        assert UNIT.hbar == pytest.approx(1 / (2 * math.pi))

    @given(thetas, st.sampled_from([0.5, 1.0, 4.0, 9.0]))
    def test_theta_tau_consistency(self, theta, k):
        params = OscillatorParams.from_k(k)
        s = sp(theta, params)
        assert params.k * s.tau**2 == pytest.approx(s.theta, rel=1e-14)

    @pytest.mark.parametrize("theta", [0.0, 4.0, -1.0, 5.0])
    def test_window(self, theta):
        with pytest.raises(StabilityWindowError):
            StepParams.from_theta(theta, UNIT)


class TestTransferMatrix:
    def test_theta3(self):
        m = transfer_matrix(sp(3.0), UNIT)
        np.testing.assert_allclose(m.as_array(), [[1, math.sqrt(3)], [-math.sqrt(3), -2]], atol=1e-15)

    def test_theta1(self):
        assert transfer_matrix(sp(1.0), UNIT).entries() == (1.0, 1.0, -1.0, 0.0)

    def test_small_step_is_near_identity(self):
        m = transfer_matrix(sp(1e-20), UNIT)
        np.testing.assert_allclose(m.as_array(), np.eye(2), atol=1e-9)

    def test_rejects_outside_window(self):
        with pytest.raises(StabilityWindowError):
            StepParams(tau=2.0, theta=4.0)

    def test_inconsistent_step_rejected(self):
        with pytest.raises(ValueError):
            transfer_matrix(StepParams(tau=1.0, theta=2.0), UNIT)

    @given(thetas, st.sampled_from([0.25, 1.0, 4.0]))
    def test_determinant_one(self, theta, k):
        params = OscillatorParams.from_k(k)
        assert transfer_matrix(sp(theta, params), params).det() == pytest.approx(1.0, rel=1e-12)

    @given(thetas)
    def test_trace_identity(self, theta):
        m = transfer_matrix(sp(theta), UNIT)
        assert m.trace() == pytest.approx(2 - theta, abs=1e-14)
        assert m.trace() == pytest.approx(2 * math.cos(rotation_angle(theta)), abs=1e-14)


class TestStep:
    def test_identity(self):
        x = PhasePoint(0.3, -1.7)
        assert step(x, TransferMatrix.identity()) == x

    def test_triangle(self):
        m = transfer_matrix(sp(3.0), UNIT)
        x1 = step(PhasePoint(1.0, 0.0), m)
        assert (x1.q, x1.p) == pytest.approx((1.0, -math.sqrt(3)), abs=1e-15)
        x3 = step(step(x1, m), m)
        assert (x3.q, x3.p) == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_square_closes(self):
        m = transfer_matrix(sp(2.0), UNIT)
        x = PhasePoint(1.0, 0.0)
        for _ in range(4):
            x = step(x, m)
        expected = naive_power(2.0, 4) @ [1.0, 0.0]
        assert (x.q, x.p) == pytest.approx(tuple(expected), abs=1e-12)
        assert (x.q, x.p) == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_trajectory_matches_step(self):
        m = transfer_matrix(sp(0.7), UNIT)
        path = trajectory(PhasePoint(0.2, 0.9), m, 5)
        x = PhasePoint(0.2, 0.9)
        for j in range(6):
            assert tuple(path[j]) == (x.q, x.p)
            x = step(x, m)

    def test_reduced_roundtrip(self):
        s = sp(2.0)
        x = PhasePoint(0.4, -0.3)
        back = from_reduced(to_reduced(x, 1.3, s, UNIT), 1.3, s, UNIT)
        assert (back.q, back.p) == pytest.approx((x.q, x.p), rel=1e-15)


class TestMatrixPower:
    def test_power_one(self):
        s = sp(0.8)
        a = transfer_matrix(s, UNIT)
        assert matrix_power_iter(s, UNIT, 1) == a
        np.testing.assert_allclose(matrix_power_closed(s, UNIT, 1).as_array(), a.as_array(), atol=1e-15)

    @pytest.mark.parametrize("theta,n", [(3.0, 3), (2.0, 4), (1.0, 6)])
    def test_table_thetas_close(self, theta, n):
        for power in (matrix_power_iter, matrix_power_closed):
            np.testing.assert_allclose(power(sp(theta), UNIT, n).as_array(), np.eye(2), atol=1e-12)

    def test_closed_vs_iter_theta_half(self):
        s = sp(0.5)
        np.testing.assert_allclose(
            matrix_power_closed(s, UNIT, 7).as_array(), matrix_power_iter(s, UNIT, 7).as_array(), atol=1e-12
        )

    @pytest.mark.parametrize("theta", [0.05, 0.5, 1.7, 2.5, 3.9])
    @pytest.mark.parametrize("n", [2, 5, 17, 40])
    def test_iter_matches_naive_and_literal(self, theta, n):
        iterated = matrix_power_iter(sp(theta), UNIT, n).as_array()
        np.testing.assert_allclose(iterated, naive_power(theta, n), atol=1e-10)
        literal = literal_power(theta, n)
        assert np.abs(literal.imag).max() < 1e-10
        np.testing.assert_allclose(iterated, literal.real, atol=1e-10)

    def test_closed_rejects_window_edges(self):
        with pytest.raises(StabilityWindowError):
            matrix_power_closed(StepParams(tau=2.0, theta=4.0), UNIT, 3)

    def test_grid_equivalence(self):
        worst = 0.0
        for i in range(1, 40):
            s = sp(i / 10)
            for n in range(1, 65):
                worst = max(worst, matrix_power_closed(s, UNIT, n).max_abs_diff(matrix_power_iter(s, UNIT, n)))
        assert worst < 1e-10

    @settings(max_examples=50)
    @given(thetas, st.integers(min_value=1, max_value=10_000))
    def test_det_of_power(self, theta, n):
        assert abs(matrix_power_iter(sp(theta), UNIT, n).det() - 1) < 1e-10 * n


class TestRotationAngle:
    def test_values(self):
        assert rotation_angle(2.0) == pytest.approx(math.pi / 2, abs=1e-15)
        assert rotation_angle(3.0) == pytest.approx(2 * math.pi / 3, abs=1e-15)
        assert 0 < rotation_angle(1e-12) < 1e-5

    @pytest.mark.parametrize("theta", [0.3, 2.0, 3.0, 3.99])
    def test_eigenvalues(self, theta):
        eig = np.linalg.eigvals(transfer_matrix(sp(theta), UNIT).as_array())
        phi = rotation_angle(theta)
        assert sorted(np.angle(eig)) == pytest.approx([-phi, phi], abs=1e-7)
        assert np.abs(eig) == pytest.approx([1, 1], abs=1e-12)

    def test_cube_of_triangle_map(self):
        assert rotation_angle(3.0) * 3 == pytest.approx(2 * math.pi)
        np.testing.assert_allclose(naive_power(3.0, 3), np.eye(2), atol=1e-12)

    @pytest.mark.parametrize("theta", [0.0, 4.0, 4.5])
    def test_domain(self, theta):
        with pytest.raises(StabilityWindowError):
            rotation_angle(theta)


class TestHamiltonians:
    def test_plain(self):
        assert hamiltonian(PhasePoint(0, 0), UNIT) == 0
        assert hamiltonian(PhasePoint(1, 0), UNIT) == 0.5
        assert hamiltonian(PhasePoint(1, 1), OscillatorParams.from_k(2.0)) == pytest.approx(1.5)

    def test_continuum_limit(self):
        x = PhasePoint(0.7, -0.4)
        assert shadow_factor(1e-12) == pytest.approx(0.5, rel=1e-10)
        assert modified_hamiltonian(x, sp(1e-14), UNIT) == pytest.approx(hamiltonian(x, UNIT), rel=1e-6)

    def test_triangle_vertices(self):
        s = sp(3.0)
        a = modified_hamiltonian(PhasePoint(1.0, 0.0), s, UNIT)
        b = modified_hamiltonian(PhasePoint(1.0, -math.sqrt(3)), s, UNIT)
        assert a == pytest.approx(b, rel=1e-14)

    def test_long_run_conservation(self):
        s = sp(1.0)
        path = trajectory(PhasePoint(1.0, 0.0), transfer_matrix(s, UNIT), 10_000)
        values = np.array([modified_hamiltonian(PhasePoint(q, p), s, UNIT) for q, p in path])
        assert np.abs(values / values[0] - 1).max() < 1e-10

    @given(thetas, st.floats(-10, 10), st.floats(-10, 10), st.sampled_from([0.5, 1.0, 4.0]))
    def test_invariant_under_step(self, theta, q, p, k):
        if abs(q) + abs(p) < 1e-3:
            return
        params = OscillatorParams.from_k(k)
        s = sp(theta, params)
        x = PhasePoint(q, p)
        before = modified_hamiltonian(x, s, params)
        after = modified_hamiltonian(step(x, transfer_matrix(s, params)), s, params)
        # positive definite form: compare against its scale, not a near-cancelling value
        scale = shadow_factor(theta) * (p * p + k * q * q)
        assert abs(after - before) <= 1e-12 * scale * 4 / (4 - theta)

    @pytest.mark.parametrize("theta", [1.0, 2.0, 3.0, 3.9])
    def test_plain_not_conserved(self, theta):
        s = sp(theta)
        phi = rotation_angle(theta)
        period = math.ceil(2 * math.pi / phi)
        path = trajectory(PhasePoint(1.0, 0.0), transfer_matrix(s, UNIT), period)
        energies = [hamiltonian(PhasePoint(q, p), UNIT) for q, p in path]
        assert (max(energies) - min(energies)) / energies[0] > 1e-6

    @pytest.mark.parametrize("theta", [0.01, 1.0, 3.99])
    def test_bounded_over_million_steps(self, theta):
        s = sp(theta)
        path = trajectory(PhasePoint(1.0, 0.0), transfer_matrix(s, UNIT), 1_000_000)
        # extents of the modified-Hamiltonian ellipse through (1, 0)
        level = 1.0
        form = np.array([[1.0, 0.5 * s.tau], [0.5 * s.tau, 1.0]])
        extent = np.sqrt(level * np.diag(np.linalg.inv(form)))
        reach = np.abs(path).max(axis=0)
        assert (reach <= extent * (1 + 1e-9)).all()
        assert (reach < 10 * extent).all()
