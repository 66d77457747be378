"""Tests for BT matrices and the Bogoliubov diagonalization."""

import logging

import numpy as np
import pytest

from squeezelab import example_data
from squeezelab.bogoliubov import (
    BTMatrix,
    apply_phase,
    check_symplectic,
    compose_bt,
    diagonalize,
    ground_displacement,
    invert_bt,
    reconstruction_residual,
    stability_gap,
)
from squeezelab.model import BilinearHamiltonian
from squeezelab.settings.custom_types import (
    DimensionMismatch,
    HermiticityError,
    NotPositiveDefinite,
    ShapeError,
)
from squeezelab.states import StateDescriptor, covariance


class TestBTMatrix:
    """The BT container and its algebra."""

    def test_identity(self, tol):
        """The identity satisfies all four block identities exactly."""
        bt = BTMatrix.identity(3)
        assert check_symplectic(bt).max == 0
        assert np.array_equal(bt.matrix, np.eye(6))

    def test_shape_check(self):
        """u and v have to be square and of equal size."""
        with pytest.raises(ShapeError):
            BTMatrix(np.eye(2), np.zeros((3, 3)))

    def test_from_matrix_round_trip(self, make_bt):
        """The 2N×2N matrix splits back into its blocks."""
        bt = make_bt(2)
        back = BTMatrix.from_matrix(bt.matrix)
        assert np.array_equal(back.u, bt.u)
        assert np.array_equal(back.v, bt.v)

    def test_random_bt_is_symplectic(self, make_bt, tol):
        """Products of rotations and squeezes keep the identities."""
        for n in (1, 2, 3):
            assert check_symplectic(make_bt(n)).ok(tol)

    def test_inverse(self, make_bt, tol):
        """M·M⁻¹ is the identity."""
        bt = make_bt(3)
        prod = compose_bt(bt, invert_bt(bt))
        assert np.allclose(prod.matrix, np.eye(6), atol=tol)
        assert np.allclose(invert_bt(bt).matrix, np.linalg.inv(bt.matrix), atol=tol)

    def test_compose_is_matrix_product(self, make_bt, tol):
        """compose_bt multiplies the 2N×2N matrices in order."""
        m1, m2 = make_bt(2), make_bt(2)
        assert np.allclose(compose_bt(m1, m2).matrix, m1.matrix @ m2.matrix, atol=tol)

    def test_compose_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch, match="2-mode BT with a 3-mode"):
            compose_bt(BTMatrix.identity(2), BTMatrix.identity(3))

    def test_apply_phase(self, make_bt, tol):
        """Row phases keep a valid BT and multiply the rows of u and v."""
        bt = make_bt(2)
        phased = apply_phase(bt, [0.3, -1.2])
        assert check_symplectic(phased).ok(tol)
        assert np.allclose(phased.u[1], np.exp(-1.2j) * bt.u[1])
        assert np.allclose(phased.v[0], np.exp(0.3j) * bt.v[0])

    def test_apply_phase_length(self):
        with pytest.raises(DimensionMismatch):
            apply_phase(BTMatrix.identity(2), [0.1])

    def test_arrays_are_read_only(self):
        bt = BTMatrix.identity(2)
        with pytest.raises(ValueError):
            bt.u[0, 0] = 2.0


class TestDiagonalize:
    """Bogoliubov diagonalization."""

    def test_non_interacting(self, tol):
        """Without pairing u is a permutation sorting Ω descending and v = 0."""
        h = BilinearHamiltonian.from_matrices(np.diag([2.0, 3.0]), np.zeros((2, 2)))
        result = diagonalize(h)
        assert np.allclose(result.omega, [3.0, 2.0], atol=tol)
        assert np.allclose(result.bt.u, [[0, 1], [1, 0]], atol=tol)
        assert np.allclose(result.bt.v, 0, atol=tol)
        assert stability_gap(h, result) == pytest.approx(0.0, abs=tol)

    def test_one_mode(self, tol):
        """ξ = 2, η = 1 gives Ω = √3, u = cosh r, v = sinh r with tanh 2r = ½."""
        h = BilinearHamiltonian.from_matrices([[2.0]], [[1.0]])
        result = diagonalize(h)
        r = np.arctanh(0.5) / 2
        assert result.omega[0] == pytest.approx(np.sqrt(3), abs=tol)
        assert result.bt.u[0, 0] == pytest.approx(np.cosh(r), abs=tol)
        assert result.bt.v[0, 0] == pytest.approx(np.sinh(r), abs=tol)

    def test_worked_example(self, worked_example, worked_result, tol):
        """Frequencies (30, 12) and the published |u|, |v|."""
        assert np.allclose(worked_result.omega, example_data.OMEGA, atol=tol)
        assert np.allclose(np.abs(worked_result.bt.u), example_data.ABS_U, atol=tol)
        assert np.allclose(np.abs(worked_result.bt.v), example_data.ABS_V, atol=tol)
        assert worked_result.ground_energy == pytest.approx(example_data.GROUND_ENERGY, abs=tol)
        assert stability_gap(worked_example, worked_result) == pytest.approx(48.0, abs=1e-9)

    def test_worked_example_rows_match_reference_up_to_phase(self, worked_result, tol):
        """Each row differs from the published one by a single phase."""
        u, v = worked_result.bt.u, worked_result.bt.v
        for i in range(2):
            phase = u[i, 0] / example_data.REFERENCE_U[i, 0]
            assert abs(phase) == pytest.approx(1.0, abs=tol)
            assert np.allclose(u[i], phase * example_data.REFERENCE_U[i], atol=tol)
            assert np.allclose(v[i], phase * example_data.REFERENCE_V[i], atol=tol)

    def test_phase_convention(self, make_hamiltonian):
        """The largest |u| entry of every row is real positive."""
        h, _, _ = make_hamiltonian(3)
        u = diagonalize(h).bt.u
        pivots = u[np.arange(3), np.argmax(np.abs(u), axis=1)]
        assert np.allclose(pivots.imag, 0, atol=1e-12)
        assert np.all(pivots.real > 0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_hamiltonians(self, make_hamiltonian, n):
        """Known spectra are recovered and the result is a valid BT."""
        for _ in range(70):
            h, omega, _ = make_hamiltonian(n)
            result = diagonalize(h)
            assert np.allclose(result.omega, omega, atol=1e-9)
            assert check_symplectic(result.bt).ok(1e-10)
            assert reconstruction_residual(h, result) <= 1e-9
            assert stability_gap(h, result) >= -1e-10

    def test_row_phase_invariants(self, make_hamiltonian, rng, tol):
        """Row phases of M leave Hm and the squeezed-vacuum moments unchanged."""
        h, _, _ = make_hamiltonian(3)
        result = diagonalize(h)
        cov = covariance(StateDescriptor.svs(result.bt)).cov
        occupation = np.diag(result.bt.v.conj().T @ result.bt.v)
        omega = np.diag(np.concatenate([result.omega, result.omega]))
        hm = result.bt.matrix.conj().T @ omega @ result.bt.matrix
        assert np.allclose(hm, h.block_matrix, atol=1e-8)
        for _ in range(100):
            phased = apply_phase(result.bt, rng.uniform(0, 2 * np.pi, size=3))
            assert np.allclose(phased.matrix.conj().T @ omega @ phased.matrix, hm, atol=tol)
            assert np.allclose(covariance(StateDescriptor.svs(phased)).cov, cov, atol=tol)
            assert np.allclose(np.diag(phased.v.conj().T @ phased.v), occupation, atol=tol)

    def test_degenerate_spectrum(self, caplog, tol):
        """Equal frequencies are re-orthonormalized and reported."""
        h = BilinearHamiltonian.from_matrices(np.eye(2), np.zeros((2, 2)))
        with caplog.at_level(logging.WARNING, logger="squeezelab.bogoliubov"):
            result = diagonalize(h)
        assert "degenerate frequency" in caplog.text
        assert np.allclose(result.bt.u, np.eye(2), atol=tol)
        assert check_symplectic(result.bt).ok(tol)

    def test_degenerate_with_pairing(self, make_bt, tol):
        """A degenerate squeezed spectrum still gives a valid, exact BT."""
        bt = make_bt(3)
        omega = np.array([2.0, 2.0, 1.0])
        m = bt.matrix
        hm = m.conj().T @ np.diag(np.concatenate([omega, omega])) @ m
        xi, eta = hm[:3, :3], hm[:3, 3:]
        h = BilinearHamiltonian.from_matrices((xi + xi.conj().T) / 2, (eta + eta.T) / 2)
        result = diagonalize(h)
        assert np.allclose(result.omega, omega, atol=1e-9)
        assert check_symplectic(result.bt).ok(1e-9)
        assert reconstruction_residual(h, result) <= 1e-9

    def test_invalid_hamiltonian(self):
        """diagonalize refuses invalid input."""
        with pytest.raises(NotPositiveDefinite):
            diagonalize(BilinearHamiltonian.from_matrices([[1.0]], [[1.5]]))
        with pytest.raises(HermiticityError):
            diagonalize(BilinearHamiltonian.from_matrices([[1, 1j], [1j, 1]], np.zeros((2, 2))))


class TestDrivenHamiltonian:
    """Linear terms and the ground-state displacement."""

    def test_undriven_has_no_shift(self, worked_result):
        assert worked_result.energy_shift == 0
        assert np.array_equal(worked_result.alpha, [0, 0])

    def test_non_interacting_drive(self, tol):
        """Completing the square: β = -κ*/(2ω), shift -|κ|²/(2ω)."""
        omega, kappa = 2.0, 0.6 + 0.8j
        h = BilinearHamiltonian.from_matrices([[omega]], [[0.0]], [kappa])
        result = diagonalize(h)
        assert ground_displacement(result)[0] == pytest.approx(-np.conj(kappa) / (2 * omega), abs=tol)
        assert result.energy_shift == pytest.approx(-abs(kappa) ** 2 / (2 * omega), abs=tol)
        assert result.ground_energy == pytest.approx(omega - abs(kappa) ** 2 / (2 * omega), abs=tol)

    def test_displacement_solves_the_linear_equation(self, make_hamiltonian, tol):
        """Hm·[α; α*] = ½[κ*; κ] for the returned α."""
        h, _, _ = make_hamiltonian(2, kappa=[0.3 - 0.1j, 0.2j])
        result = diagonalize(h)
        lhs = h.block_matrix @ np.concatenate([result.alpha, result.alpha.conj()])
        assert np.allclose(lhs, np.concatenate([h.kappa.conj(), h.kappa]) / 2, atol=tol)
