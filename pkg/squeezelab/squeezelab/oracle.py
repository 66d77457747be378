"""
Truncated Fock-space oracle.

An independent, brute-force check of the closed forms: operators are built
as explicit matrices on the space spanned by |m⟩ with every mᵢ < cutoff, the
Hamiltonian is diagonalized densely, and moments are contracted directly.

Basis vectors are ordered with mode 0 most significant, matching a C-order
ravel of the amplitude arrays of :func:`squeezelab.states.fock_amplitudes`.
Operators are truncated as they stand: a† sends the top level of a mode to
zero, so [aᵢ, aᵢ†] = 1 holds only below that level.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy import sparse
from scipy.linalg import eigh
from scipy.sparse.linalg import expm_multiply

from squeezelab.common.helpers import CArray, RArray, as_complex_vector, max_abs
from squeezelab.model import BilinearHamiltonian
from squeezelab.settings.custom_types import (
    NotAntiHermitian,
    ShapeError,
    SpaceTooLarge,
    TailMassTooLarge,
)
from squeezelab.settings.global_variables import ANTI_HERMITIAN_ATOL, MAX_DENSE_DIM
from squeezelab.states import (
    QuadratureCovariance,
    StateDescriptor,
    fock_amplitudes,
    original_frame_displacement,
)

logger = logging.getLogger(__name__)

Operator = sparse.csr_matrix


@dataclass(frozen=True)
class TruncatedFockSpace:
    """
    Product of N copies of span{|0⟩, ..., |cutoff - 1⟩}.

    Raises:
        SpaceTooLarge: If cutoff**n_modes exceeds the dense-solver guard.
    """

    n_modes: int
    cutoff: int

    def __post_init__(self) -> None:
        if self.n_modes < 1 or self.cutoff < 1:
            raise ShapeError(f"need n_modes >= 1 and cutoff >= 1, got {self.n_modes}, {self.cutoff}")
        if self.dim > MAX_DENSE_DIM:
            raise SpaceTooLarge(self.dim, MAX_DENSE_DIM)

    @property
    def dim(self) -> int:
        return int(self.cutoff**self.n_modes)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cutoff,) * self.n_modes

    def index(self, m: object) -> int:
        """Flat index of the multi-index m."""
        return int(np.ravel_multi_index(tuple(np.asarray(m).reshape(-1)), self.shape))

    def multi_index(self, k: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(k, self.shape))

    def _embed(self, single: sparse.spmatrix, mode: int) -> Operator:
        if not 0 <= mode < self.n_modes:
            raise ShapeError(f"mode {mode} out of range for {self.n_modes} modes")
        eye = sparse.identity(self.cutoff, dtype=np.complex128, format="csr")
        factors = [single if k == mode else eye for k in range(self.n_modes)]
        return sparse.csr_matrix(reduce(lambda x, y: sparse.kron(x, y, format="csr"), factors))

    def annihilation(self, mode: int) -> Operator:
        lowering = sparse.diags(
            np.sqrt(np.arange(1, self.cutoff, dtype=np.float64)), offsets=1, dtype=np.complex128
        )
        return self._embed(lowering, mode)

    def creation(self, mode: int) -> Operator:
        return sparse.csr_matrix(self.annihilation(mode).conj().T)

    def number(self, mode: int) -> Operator:
        occupation = sparse.diags(np.arange(self.cutoff, dtype=np.float64), dtype=np.complex128)
        return self._embed(occupation, mode)

    def vacuum(self) -> StateVector:
        amps = np.zeros(self.dim, dtype=np.complex128)
        amps[0] = 1.0
        return StateVector(amps)


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Amplitudes in a truncated Fock space.

    ``tail_mass`` is 1 - Σ|amp|² for vectors built from closed forms, the
    weight lost above the cutoff; it is 0 for vectors made in the space.
    """

    amplitudes: CArray
    tail_mass: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        return StateVector(self.amplitudes / self.norm, self.tail_mass)


def overlap(v: StateVector, w: StateVector) -> float:
    """|⟨v|w⟩| of the normalized vectors."""
    return float(abs(np.vdot(v.amplitudes, w.amplitudes)) / (v.norm * w.norm))


# -------------------- Hamiltonian and spectrum --------------------


def build_hamiltonian(h: BilinearHamiltonian, space: TruncatedFockSpace) -> Operator:
    """
    The Hamiltonian as a sparse matrix on ``space``.

    Assembled normal-ordered: a†ξa + aξ*a† = 2a†ξa + Tr ξ, so one mode
    with ξ = ω gives diag(ω, 3ω, 5ω, ...).
    """
    if h.n_modes != space.n_modes:
        raise ShapeError(f"Hamiltonian has {h.n_modes} modes, space has {space.n_modes}")
    n = h.n_modes
    a = [space.annihilation(i) for i in range(n)]
    ad = [space.creation(i) for i in range(n)]
    hmat = sparse.identity(space.dim, dtype=np.complex128, format="csr") * float(np.trace(h.xi).real)
    for i in range(n):
        for j in range(n):
            if h.xi[i, j] != 0:
                hmat = hmat + 2 * h.xi[i, j] * (ad[i] @ a[j])
            if h.eta[i, j] != 0:
                pair = h.eta[i, j] * (ad[i] @ ad[j])
                hmat = hmat + pair + pair.conj().T
        if h.kappa[i] != 0:
            hmat = hmat + h.kappa[i] * a[i] + np.conj(h.kappa[i]) * ad[i]
    logger.debug("assembled Hamiltonian of dimension %d, nnz %d", space.dim, hmat.nnz)
    return sparse.csr_matrix(hmat)


def _dense(hmat: Operator | CArray) -> CArray:
    return np.asarray(hmat.toarray() if sparse.issparse(hmat) else hmat, dtype=np.complex128)


def ground_state(hmat: Operator | CArray) -> tuple[StateVector, float]:
    """Lowest eigenvector (normalized) and eigenvalue of a Hermitian matrix."""
    vals, vecs = eigh(_dense(hmat), subset_by_index=[0, 0])
    return StateVector(vecs[:, 0]), float(vals[0])


@dataclass(frozen=True, eq=False)
class Eigenspace:
    """Orthonormal basis of all eigenvectors at one (possibly degenerate) level."""

    energy: float
    basis: CArray

    @property
    def degeneracy(self) -> int:
        return int(self.basis.shape[1])

    def overlap(self, v: StateVector) -> float:
        """Length of the projection of the normalized ``v`` onto the eigenspace."""
        return float(np.linalg.norm(self.basis.conj().T @ v.amplitudes) / v.norm)


def excited_state(hmat: Operator | CArray, energy: float, atol: float = 1e-6) -> Eigenspace:
    """
    The eigenspace of ``hmat`` at ``energy``.

    Every eigenvalue within ``atol`` of ``energy`` contributes, so a
    degenerate level is returned whole.

    Raises:
        ValueError: If no eigenvalue lies within ``atol``.
    """
    vals, vecs = eigh(_dense(hmat))
    mask = np.abs(vals - energy) <= atol
    if not np.any(mask):
        nearest = float(vals[np.argmin(np.abs(vals - energy))])
        raise ValueError(f"no eigenvalue within {atol:g} of {energy:.12g}; nearest {nearest:.12g}")
    return Eigenspace(energy=float(np.mean(vals[mask])), basis=vecs[:, mask])


# -------------------- Closed-form states --------------------


def suggest_cutoff(s: StateDescriptor, tail_mass_limit: float, cutoff: int) -> int:
    """
    Cutoff at which ``s`` should lose less than ``tail_mass_limit``.

    Squeezed-vacuum weight at level m decays like tanh^m r for the strongest
    squeeze r; occupation and displacement add their own margin.
    """
    cosh_max = float(np.linalg.svd(s.bt.u, compute_uv=False)[0])
    margin = 2 + 2 * max(s.n) + math.ceil(4 * float(np.max(np.abs(original_frame_displacement(s)))) ** 2)
    if cosh_max <= 1.0 + 1e-12:
        return max(cutoff + 1, margin + 8)
    tanh2 = 1.0 - 1.0 / cosh_max**2
    return max(cutoff + 1, math.ceil(2 * math.log(tail_mass_limit) / math.log(tanh2)) + margin)


def build_closed_form_state(
    s: StateDescriptor,
    space: TruncatedFockSpace,
    tail_mass_limit: float = 1e-8,
    strict: bool = True,
) -> StateVector:
    """
    The closed-form amplitudes of ``s`` on ``space``.

    Raises:
        TailMassTooLarge: If ``strict`` and more than ``tail_mass_limit`` of
            the norm lies above the cutoff.
    """
    if s.n_modes != space.n_modes:
        raise ShapeError(f"state has {s.n_modes} modes, space has {space.n_modes}")
    amps = fock_amplitudes(s, space.cutoff).reshape(-1)
    tail = 1.0 - float(np.vdot(amps, amps).real)
    if tail > tail_mass_limit:
        if strict:
            raise TailMassTooLarge(tail, space.cutoff, suggest_cutoff(s, tail_mass_limit, space.cutoff))
        logger.warning("tail mass %.3e above cutoff %d", tail, space.cutoff)
    logger.debug("closed-form %s state: tail mass %.3e", s.kind.value, tail)
    return StateVector(amps, tail_mass=tail)


# -------------------- Moments --------------------


@dataclass(frozen=True, eq=False)
class NumericMoments:
    mean_n: RArray
    var_n: RArray
    cov: QuadratureCovariance


def numeric_moments(v: StateVector, space: TruncatedFockSpace) -> NumericMoments:
    """⟨Nᵢ⟩, Var Nᵢ and the unsymmetrized quadrature moments by direct contraction."""
    psi = v.amplitudes / v.norm
    n = space.n_modes
    mean_n = np.zeros(n)
    var_n = np.zeros(n)
    xs, ys = [], []
    for i in range(n):
        a, ad = space.annihilation(i), space.creation(i)
        num_psi = space.number(i) @ psi
        mean_n[i] = np.vdot(psi, num_psi).real
        var_n[i] = np.vdot(num_psi, num_psi).real - mean_n[i] ** 2
        xs.append((a @ psi + ad @ psi) / 2)
        ys.append((a @ psi - ad @ psi) / 2j)
    quads = xs + ys
    means = np.array([np.vdot(psi, q) for q in quads])
    cov = np.array(
        [[np.vdot(qa, qb) - means[i] * means[j] for j, qb in enumerate(quads)] for i, qa in enumerate(quads)]
    )
    return NumericMoments(mean_n=mean_n, var_n=var_n, cov=QuadratureCovariance(cov))


# -------------------- Generators --------------------


def quadratic_generator(space: TruncatedFockSpace, g: object) -> Operator:
    """The operator Φ†gΦ with Φ = [a₁ ... a_N, a₁† ... a_N†]."""
    g_mat = np.asarray(g, dtype=np.complex128)
    n = space.n_modes
    if g_mat.shape != (2 * n, 2 * n):
        raise ShapeError(f"g must be {2 * n}×{2 * n}, got {g_mat.shape}")
    phi = [space.annihilation(i) for i in range(n)] + [space.creation(i) for i in range(n)]
    phi_dag = [sparse.csr_matrix(op.conj().T) for op in phi]
    out = sparse.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    for i in range(2 * n):
        for j in range(2 * n):
            if g_mat[i, j] != 0:
                out = out + g_mat[i, j] * (phi_dag[i] @ phi[j])
    return sparse.csr_matrix(out)


def displacement_generator(space: TruncatedFockSpace, gamma: object) -> Operator:
    """Σ γᵢaᵢ† - γᵢ*aᵢ, whose exponential is the displacement D(γ)."""
    vec = as_complex_vector(gamma, space.n_modes, "gamma")  # type: ignore[arg-type]
    out = sparse.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    for i, g in enumerate(vec):
        out = out + g * space.creation(i) - np.conj(g) * space.annihilation(i)
    return sparse.csr_matrix(out)


def apply_generator_exp(gen: Operator | CArray, v: StateVector) -> StateVector:
    """
    exp(gen)·v for an anti-Hermitian ``gen``.

    Raises:
        NotAntiHermitian: If max|gen + gen†| exceeds 1e-10 relative to max|gen|.
    """
    if sparse.issparse(gen):
        residual = float(abs(gen + gen.conj().T).max()) if gen.nnz else 0.0
        scale = max(1.0, float(abs(gen).max()) if gen.nnz else 0.0)
    else:
        dense = np.asarray(gen)
        residual = max_abs(dense + dense.conj().T)
        scale = max(1.0, max_abs(dense))
    if residual > ANTI_HERMITIAN_ATOL * scale:
        raise NotAntiHermitian(residual)
    out = expm_multiply(gen, v.amplitudes.astype(np.complex128))
    return StateVector(np.asarray(out, dtype=np.complex128))
