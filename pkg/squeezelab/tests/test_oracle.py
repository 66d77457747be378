"""Closed forms against the truncated Fock-space oracle."""

import logging

import numpy as np
import pytest

from squeezelab import example_data
from squeezelab.bogoliubov import diagonalize, ground_displacement
from squeezelab.model import BilinearHamiltonian
from squeezelab.oracle import (
    StateVector,
    TruncatedFockSpace,
    apply_generator_exp,
    build_closed_form_state,
    build_hamiltonian,
    displacement_generator,
    excited_state,
    ground_state,
    numeric_moments,
    overlap,
    quadratic_generator,
)
from squeezelab.settings.custom_types import (
    NotAntiHermitian,
    ShapeError,
    SpaceTooLarge,
    TailMassTooLarge,
)
from squeezelab.squeezeop import compose_so, exponent_form
from squeezelab.states import (
    StateDescriptor,
    covariance,
    mean_photon,
    photon_variance,
)


class TestTruncatedFockSpace:
    """Basis ordering and ladder operators."""

    def test_dimensions_and_ordering(self):
        """Mode 0 is the most significant index."""
        space = TruncatedFockSpace(2, 3)
        assert space.dim == 9
        assert space.index([1, 0]) == 3
        assert space.index([0, 1]) == 1
        assert space.multi_index(5) == (1, 2)

    def test_ladder_operators(self):
        space = TruncatedFockSpace(2, 4)
        a0 = space.annihilation(0)
        v = np.zeros(space.dim, dtype=complex)
        v[space.index([2, 1])] = 1
        out = a0 @ v
        assert out[space.index([1, 1])] == pytest.approx(np.sqrt(2))
        assert np.count_nonzero(out) == 1
        assert np.allclose(space.number(1).diagonal(), np.tile(np.arange(4), 4))

    def test_commutator_below_top_level(self):
        space = TruncatedFockSpace(1, 5)
        a, ad = space.annihilation(0), space.creation(0)
        comm = (a @ ad - ad @ a).toarray()
        assert np.allclose(np.diag(comm)[:-1], 1)

    def test_vacuum(self):
        vac = TruncatedFockSpace(3, 2).vacuum()
        assert vac.norm == 1
        assert vac.amplitudes[0] == 1

    def test_guards(self):
        with pytest.raises(SpaceTooLarge):
            TruncatedFockSpace(2, 200)
        with pytest.raises(ShapeError):
            TruncatedFockSpace(0, 4)
        with pytest.raises(ShapeError):
            TruncatedFockSpace(1, 4).annihilation(1)

    def test_overlap_normalizes(self):
        v = StateVector(np.array([3.0, 0.0]))
        w = StateVector(np.array([1.0, 1.0j]))
        assert overlap(v, w) == pytest.approx(1 / np.sqrt(2))


class TestHamiltonian:
    """Assembly and spectrum of the truncated Hamiltonian."""

    def test_non_interacting_levels(self):
        """ξ = ω gives diag(ω, 3ω, 5ω, 7ω)."""
        omega = 1.5
        h = BilinearHamiltonian.from_matrices([[omega]], [[0.0]])
        hmat = build_hamiltonian(h, TruncatedFockSpace(1, 4)).toarray()
        assert np.allclose(hmat, np.diag([1, 3, 5, 7]) * omega)

    def test_mode_mismatch(self, worked_example):
        with pytest.raises(ShapeError):
            build_hamiltonian(worked_example, TruncatedFockSpace(1, 4))

    def test_hermitian(self, make_hamiltonian):
        h, _, _ = make_hamiltonian(2, kappa=[0.2, 0.1j])
        hmat = build_hamiltonian(h, TruncatedFockSpace(2, 5)).toarray()
        assert np.allclose(hmat, hmat.conj().T)

    def test_one_mode_weak_squeeze(self):
        """ξ = 2, η = 0.3: energy Ω = √(ξ² - η²) and the squeezed vacuum."""
        h = BilinearHamiltonian.from_matrices([[2.0]], [[0.3]])
        result = diagonalize(h)
        space = TruncatedFockSpace(1, 16)
        ground, energy = ground_state(build_hamiltonian(h, space))
        assert energy == pytest.approx(np.sqrt(4 - 0.09), abs=1e-10)
        closed = build_closed_form_state(StateDescriptor.svs(result.bt), space)
        assert overlap(ground, closed) == pytest.approx(1, abs=1e-10)

    def test_excited_state_not_found(self):
        h = BilinearHamiltonian.from_matrices([[1.0]], [[0.0]])
        with pytest.raises(ValueError, match="no eigenvalue"):
            excited_state(build_hamiltonian(h, TruncatedFockSpace(1, 4)), 2.0)

    def test_degenerate_eigenspace(self):
        """Two uncoupled equal modes have a doubly degenerate first level."""
        h = BilinearHamiltonian.from_matrices(np.eye(2), np.zeros((2, 2)))
        level = excited_state(build_hamiltonian(h, TruncatedFockSpace(2, 3)), 4.0)
        assert level.degeneracy == 2
        v = np.zeros(9, dtype=complex)
        v[1] = 1
        assert level.overlap(StateVector(v)) == pytest.approx(1)


class TestWeakSqueezing:
    """Random two-mode Hamiltonians with small squeezes, well inside the cutoff."""

    CUTOFF = 14

    @pytest.fixture
    def system(self, make_hamiltonian):
        h, _, _ = make_hamiltonian(2, r_max=0.15, angle=0.3)
        space = TruncatedFockSpace(2, self.CUTOFF)
        return h, diagonalize(h), space, build_hamiltonian(h, space)

    def test_ground_state(self, system):
        _, result, space, hmat = system
        ground, energy = ground_state(hmat)
        assert energy == pytest.approx(result.ground_energy, abs=1e-8)
        closed = build_closed_form_state(StateDescriptor.svs(result.bt), space)
        assert overlap(ground, closed) >= 1 - 1e-8

    def test_moments(self, system):
        """Numeric ⟨N⟩, Var N and covariance agree with the closed forms."""
        _, result, space, hmat = system
        ground, _ = ground_state(hmat)
        moments = numeric_moments(ground, space)
        s = StateDescriptor.svs(result.bt)
        assert np.allclose(moments.mean_n, mean_photon(s), atol=1e-8)
        assert np.allclose(moments.var_n, photon_variance(s), atol=1e-8)
        assert np.allclose(moments.cov.cov, covariance(s).cov, atol=1e-8)

    @pytest.mark.parametrize("n", [(1, 0), (0, 1), (1, 1), (2, 0)])
    def test_excited_states(self, system, n):
        """U|n⟩ lives at E₀ + Σ 2nᵢΩᵢ."""
        _, result, space, hmat = system
        energy = result.ground_energy + 2 * float(np.dot(n, result.omega))
        level = excited_state(hmat, energy)
        closed = build_closed_form_state(StateDescriptor.sfs(result.bt, n), space)
        assert level.overlap(closed) >= 1 - 1e-7

    def test_excited_moments(self, system):
        _, result, space, _ = system
        s = StateDescriptor.sfs(result.bt, [1, 1])
        moments = numeric_moments(build_closed_form_state(s, space), space)
        assert np.allclose(moments.mean_n, mean_photon(s), atol=1e-7)
        assert np.allclose(moments.var_n, photon_variance(s), atol=1e-7)
        assert np.allclose(moments.cov.cov, covariance(s).cov, atol=1e-7)


class TestDriven:
    """The driven ground state is a squeezed coherent state."""

    def test_driven_ground_state(self, make_hamiltonian):
        h, _, _ = make_hamiltonian(2, r_max=0.15, angle=0.3, kappa=[0.2 - 0.1j, 0.15j])
        result = diagonalize(h)
        space = TruncatedFockSpace(2, 14)
        ground, energy = ground_state(build_hamiltonian(h, space))
        assert energy == pytest.approx(result.ground_energy, abs=1e-8)
        s = StateDescriptor.scs(result.bt, ground_displacement(result))
        assert overlap(ground, build_closed_form_state(s, space)) >= 1 - 1e-8
        moments = numeric_moments(ground, space)
        assert np.allclose(moments.mean_n, mean_photon(s), atol=1e-8)
        assert np.allclose(moments.cov.cov, covariance(s).cov, atol=1e-8)


class TestGenerators:
    """exp(Φ†GΦ) and D(γ) applied by matrix exponential."""

    @pytest.mark.parametrize("n_modes", [1, 2])
    def test_composition(self, make_bt, n_modes):
        """exp(Φ†G₁Φ)exp(Φ†G₂Φ)|0⟩ is the squeezed vacuum of compose_so(M₁, M₂)."""
        space = TruncatedFockSpace(n_modes, 12)
        for _ in range(20):
            m1 = make_bt(n_modes, r_max=0.08, angle=0.5)
            m2 = make_bt(n_modes, r_max=0.08, angle=0.5)
            g1 = quadratic_generator(space, exponent_form(m1).generator)
            g2 = quadratic_generator(space, exponent_form(m2).generator)
            numeric = apply_generator_exp(g1, apply_generator_exp(g2, space.vacuum()))
            closed = build_closed_form_state(StateDescriptor.svs(compose_so(m1, m2)), space)
            assert overlap(numeric, closed) >= 1 - 1e-7

    def test_displacement_gives_coherent_state(self):
        space = TruncatedFockSpace(2, 20)
        alpha = [0.4 - 0.2j, 0.3j]
        numeric = apply_generator_exp(displacement_generator(space, alpha), space.vacuum())
        closed = build_closed_form_state(StateDescriptor.coherent(alpha), space)
        assert np.allclose(numeric.amplitudes, closed.amplitudes, atol=1e-9)

    def test_squeezed_coherent_is_displaced_vacuum(self, make_bt):
        """U D(α)|0⟩ = D(γ)U|0⟩ with γ = u†α - vᵀα*."""
        space = TruncatedFockSpace(2, 20)
        bt = make_bt(2, r_max=0.3)
        s = StateDescriptor.scs(bt, [0.2, -0.1 + 0.15j])
        svs = build_closed_form_state(StateDescriptor.svs(bt), space)
        gamma = np.conj(bt.u).T @ s.alpha - bt.v.T @ np.conj(s.alpha)
        numeric = apply_generator_exp(displacement_generator(space, gamma), svs)
        assert overlap(numeric, build_closed_form_state(s, space)) >= 1 - 1e-8
        assert np.allclose(numeric_moments(numeric, space).mean_n, mean_photon(s), atol=1e-6)

    def test_generator_shape(self):
        with pytest.raises(ShapeError):
            quadratic_generator(TruncatedFockSpace(1, 3), np.zeros((3, 3)))

    def test_not_anti_hermitian(self):
        space = TruncatedFockSpace(1, 4)
        with pytest.raises(NotAntiHermitian):
            apply_generator_exp(space.number(0), space.vacuum())
        with pytest.raises(NotAntiHermitian):
            apply_generator_exp(np.eye(4), space.vacuum())


class TestTruncation:
    """Tail mass above the cutoff."""

    def test_tail_mass_too_large(self, worked_result):
        space = TruncatedFockSpace(2, 4)
        with pytest.raises(TailMassTooLarge) as info:
            build_closed_form_state(StateDescriptor.svs(worked_result.bt), space)
        assert info.value.suggested_cutoff > 4
        assert info.value.tail_mass > 1e-8

    def test_lenient_mode_warns(self, worked_result, caplog):
        space = TruncatedFockSpace(2, 4)
        with caplog.at_level(logging.WARNING, logger="squeezelab.oracle"):
            v = build_closed_form_state(StateDescriptor.svs(worked_result.bt), space, strict=False)
        assert "tail mass" in caplog.text
        assert v.tail_mass == pytest.approx(1 - v.norm**2)

    def test_worked_example_needs_more_than_thirty(self, worked_result):
        with pytest.raises(TailMassTooLarge):
            build_closed_form_state(StateDescriptor.svs(worked_result.bt), TruncatedFockSpace(2, 30))

    def test_worked_example_at_sixty(self, worked_example, worked_result):
        """At cutoff 60 the two-mode example meets 1e-6 on energy, ⟨N⟩ and covariance."""
        space = TruncatedFockSpace(2, 60)
        s = StateDescriptor.svs(worked_result.bt)
        closed = build_closed_form_state(s, space, tail_mass_limit=1e-6)
        ground, energy = ground_state(build_hamiltonian(worked_example, space))
        moments = numeric_moments(ground, space)
        assert energy == pytest.approx(example_data.GROUND_ENERGY, abs=1e-6)
        assert overlap(ground, closed) >= 1 - 1e-6
        assert np.allclose(moments.mean_n, example_data.MEAN_PHOTON, atol=1e-6)
        assert np.allclose(moments.cov.cov, covariance(s).cov, atol=1e-6)
        # Var N weighs the tail by n², so it converges an order slower.
        assert np.allclose(moments.var_n, photon_variance(s), atol=1e-5)

    def test_one_mode_beyond_degree_sixty(self):
        """Amplitude tables are not capped at 61 levels per mode."""
        result = diagonalize(BilinearHamiltonian.from_matrices([[2.0]], [[1.9]]))
        space = TruncatedFockSpace(1, 100)
        v = build_closed_form_state(StateDescriptor.svs(result.bt), space)
        assert v.tail_mass <= 1e-8
        assert abs(v.amplitudes[80]) > 0

    def test_suggested_cutoff_builds(self):
        """The cutoff named by TailMassTooLarge is one the oracle accepts."""
        s = StateDescriptor.svs(diagonalize(BilinearHamiltonian.from_matrices([[2.0]], [[1.98]])).bt)
        with pytest.raises(TailMassTooLarge) as info:
            build_closed_form_state(s, TruncatedFockSpace(1, 30))
        suggested = info.value.suggested_cutoff
        assert suggested > 61
        assert build_closed_form_state(s, TruncatedFockSpace(1, suggested)).tail_mass <= 1e-8
