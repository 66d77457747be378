"""
Bogoliubov diagonalization of bilinear bosonic Hamiltonians.

New operators c = u a + v a† are collected in the BT matrix

    [c; c†] = M [a; a†],    M = [[u, v], [v*, u*]],

which preserves the commutators exactly when M K M† = K with K = diag(I, -I).
:func:`diagonalize` finds the M that brings the block matrix of a
:class:`~squeezelab.model.BilinearHamiltonian` to diag(Ω, Ω), so that

    H = Σᵢ Ωᵢ (2 dᵢ†dᵢ + 1) + energy_shift

with dᵢ the new operators shifted by the displacement that removes the
linear term.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from squeezelab.common.helpers import (
    CArray,
    RArray,
    dagger,
    degenerate_groups,
    k_metric,
    matrix_to_pairs,
    max_abs,
)
from squeezelab.model import BilinearHamiltonian, ensure_valid
from squeezelab.settings.custom_types import (
    DimensionMismatch,
    JSONType,
    NotPositiveDefinite,
    ShapeError,
)
from squeezelab.settings.global_variables import BT_ATOL, DEGENERACY_RTOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BTMatrix:
    """
    The u and v blocks of a Bogoliubov transformation.

    Construction only checks shapes; use :func:`check_symplectic` to test
    the commutator-preserving identities.
    """

    u: CArray
    v: CArray

    def __post_init__(self) -> None:
        u = np.array(self.u, dtype=np.complex128, copy=True)
        v = np.array(self.v, dtype=np.complex128, copy=True)
        if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] == 0:
            raise ShapeError(f"u must be a non-empty square matrix, got shape {u.shape}")
        if v.shape != u.shape:
            raise ShapeError(f"v must have shape {u.shape}, got {v.shape}")
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n_modes(self) -> int:
        return int(self.u.shape[0])

    @property
    def matrix(self) -> CArray:
        """The full 2N×2N matrix M."""
        return np.block([[self.u, self.v], [self.v.conj(), self.u.conj()]])

    @classmethod
    def from_matrix(cls, m: object) -> BTMatrix:
        """Take u and v from the upper blocks of a 2N×2N matrix."""
        arr = np.asarray(m, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
            raise ShapeError(f"M must be square with even size, got shape {arr.shape}")
        n = arr.shape[0] // 2
        return cls(arr[:n, :n], arr[:n, n:])

    @classmethod
    def identity(cls, n_modes: int) -> BTMatrix:
        return cls(np.eye(n_modes), np.zeros((n_modes, n_modes)))

    @classmethod
    def embed(cls, w: object) -> BTMatrix:
        """The passive transformation [[W, 0], [0, W*]] of a unitary W."""
        arr = np.asarray(w, dtype=np.complex128)
        return cls(arr, np.zeros_like(arr))

    @classmethod
    def diagonal_squeezer(cls, r: object) -> BTMatrix:
        """Independent one-mode squeezes, u = diag(cosh r), v = diag(sinh r)."""
        r_arr = np.atleast_1d(np.asarray(r, dtype=np.float64))
        return cls(np.diag(np.cosh(r_arr)), np.diag(np.sinh(r_arr)))

    def to_dict(self) -> dict[str, JSONType]:
        return {"u": matrix_to_pairs(self.u), "v": matrix_to_pairs(self.v)}


@dataclass(frozen=True)
class SymplecticResiduals:
    """Max-norm residuals of the four block identities of a BT matrix."""

    r_uud1: float  # uu† - vv† - I
    r_uud2: float  # uvᵀ - vuᵀ
    r_udu1: float  # u†u - vᵀv* - I
    r_udu2: float  # u†v - vᵀu*

    @property
    def max(self) -> float:
        return max(self.r_uud1, self.r_uud2, self.r_udu1, self.r_udu2)

    def ok(self, atol: float = BT_ATOL) -> bool:
        return self.max <= atol

    def to_dict(self) -> dict[str, JSONType]:
        return {
            "r_uud1": self.r_uud1,
            "r_uud2": self.r_uud2,
            "r_udu1": self.r_udu1,
            "r_udu2": self.r_udu2,
        }


@dataclass(frozen=True, eq=False)
class DiagonalizationResult:
    """
    Output of :func:`diagonalize`.

    Attributes
    ----------
    bt :
        The BT matrix with M†·diag(Ω, Ω)·M equal to the block matrix.
    omega :
        The N positive frequencies, sorted descending.
    alpha :
        Displacement removing the linear term: the ground state has ⟨a⟩ = -α.
    energy_shift :
        Constant produced by the displacement, -¼[κᵀ, κ†]·Hm⁻¹·[κ*; κ].
    """

    bt: BTMatrix
    omega: RArray
    alpha: CArray
    energy_shift: float

    @property
    def ground_energy(self) -> float:
        """ΣΩ + energy_shift."""
        return float(np.sum(self.omega)) + self.energy_shift


def check_symplectic(bt: BTMatrix) -> SymplecticResiduals:
    """Evaluate the four block identities that make M commutator-preserving."""
    u, v = bt.u, bt.v
    eye = np.eye(bt.n_modes)
    return SymplecticResiduals(
        r_uud1=max_abs(u @ dagger(u) - v @ dagger(v) - eye),
        r_uud2=max_abs(u @ v.T - v @ u.T),
        r_udu1=max_abs(dagger(u) @ u - v.T @ v.conj() - eye),
        r_udu2=max_abs(dagger(u) @ v - v.T @ u.conj()),
    )


def invert_bt(bt: BTMatrix) -> BTMatrix:
    """M⁻¹ = K M† K, whose blocks are (u†, -vᵀ)."""
    return BTMatrix(dagger(bt.u), -bt.v.T)


def compose_bt(m1: BTMatrix, m2: BTMatrix) -> BTMatrix:
    """
    The BT matrix of the product m1·m2.

    Raises:
        DimensionMismatch: If the operands act on different numbers of modes.
    """
    if m1.n_modes != m2.n_modes:
        raise DimensionMismatch(
            f"cannot compose a {m1.n_modes}-mode BT with a {m2.n_modes}-mode BT"
        )
    u = m1.u @ m2.u + m1.v @ m2.v.conj()
    v = m1.u @ m2.v + m1.v @ m2.u.conj()
    return BTMatrix(u, v)


def apply_phase(bt: BTMatrix, phi: object) -> BTMatrix:
    """Multiply row i of u and v by e^{iφᵢ}; the result is still a valid BT."""
    phases = np.exp(1j * np.asarray(phi, dtype=np.float64).reshape(-1))
    if phases.size != bt.n_modes:
        raise DimensionMismatch(f"phi has {phases.size} entries for {bt.n_modes} modes")
    return BTMatrix(phases[:, None] * bt.u, phases[:, None] * bt.v)


# -------------------- Diagonalization --------------------


def _k_orthonormalize(vectors: CArray, k: RArray) -> CArray:
    """Gram-Schmidt in the indefinite product x†Ky, in column order."""
    out = np.array(vectors, dtype=np.complex128, copy=True)
    for j in range(out.shape[1]):
        w = out[:, j]
        for i in range(j):
            w = w - (out[:, i].conj() @ k @ w) * out[:, i]
        norm2 = float(np.real(w.conj() @ k @ w))
        if norm2 <= 0:
            raise NotPositiveDefinite(norm2)
        out[:, j] = w / np.sqrt(norm2)
    return out


def _fix_row_phases(u: CArray, v: CArray) -> tuple[CArray, CArray]:
    """Make the largest-magnitude entry of every row of u real positive."""
    cols = np.argmax(np.abs(u), axis=1)
    pivots = u[np.arange(u.shape[0]), cols]
    phases = pivots.conj() / np.abs(pivots)
    return phases[:, None] * u, phases[:, None] * v


def diagonalize(h: BilinearHamiltonian) -> DiagonalizationResult:
    """
    Diagonalize a bilinear Hamiltonian by a Bogoliubov transformation.

    The rows of u and v are the +Ω eigenvectors of Hm·K (Hm the block
    matrix), conjugated and normalized so that w†Kw = 1. The -Ω branch is
    never solved for: the structure of M supplies it. Eigenvectors sharing an
    Ω are re-orthonormalized in the K product. Every row is phased so its
    largest-magnitude u entry is real positive, and rows are sorted by Ω
    descending, with ties broken by comparing the |u| rows.

    Parameters
    ----------
    h : BilinearHamiltonian
        Must pass :func:`~squeezelab.model.validate`.

    Returns
    -------
    DiagonalizationResult

    Raises
    ------
    HermiticityError, SymmetryError, NotPositiveDefinite
        If ``h`` is not a valid Hamiltonian.
    """
    ensure_valid(h)
    n = h.n_modes
    hm = h.block_matrix
    k = k_metric(n)

    evals, evecs = np.linalg.eig(hm @ k)
    order = np.argsort(-evals.real)[:n]
    omega = evals.real[order]
    vecs = evecs[:, order]
    logger.debug("eigenvalues of Hm·K: %s", np.sort(evals.real))

    for group in degenerate_groups(omega, DEGENERACY_RTOL):
        if len(group) > 1:
            logger.warning(
                "degenerate frequency %.12g with multiplicity %d; eigenvectors re-orthonormalized",
                omega[group[0]],
                len(group),
            )
        vecs[:, group] = _k_orthonormalize(vecs[:, group], k)

    u, v = _fix_row_phases(vecs[:n].conj().T, vecs[n:].conj().T)

    groups = degenerate_groups(omega, DEGENERACY_RTOL)
    rank: list[int] = []
    for group in groups:
        rank.extend(sorted(group, key=lambda i: tuple(-np.abs(u[i]))))
    omega, u, v = omega[rank], u[rank], v[rank]

    kappa = h.kappa
    if np.any(kappa != 0):
        shifted = np.linalg.solve(hm, np.concatenate([kappa.conj(), kappa])) / 2
        alpha = shifted[:n]
        energy_shift = -float(np.real(kappa @ alpha))
    else:
        alpha = np.zeros(n, dtype=np.complex128)
        energy_shift = 0.0

    result = DiagonalizationResult(BTMatrix(u, v), omega, alpha, energy_shift)
    logger.debug(
        "diagonalized %d modes: omega=%s reconstruction residual %.3e",
        n,
        omega,
        reconstruction_residual(h, result),
    )
    return result


def reconstruction_residual(h: BilinearHamiltonian, result: DiagonalizationResult) -> float:
    """max|M†·diag(Ω, Ω)·M - Hm| relative to max(1, max|Hm|)."""
    m = result.bt.matrix
    d = np.diag(np.concatenate([result.omega, result.omega]))
    hm = h.block_matrix
    return max_abs(dagger(m) @ d @ m - hm) / max(1.0, max_abs(hm))


def ground_displacement(result: DiagonalizationResult) -> CArray:
    """
    Coherent amplitude β of the driven ground state U|β⟩.

    Shifting a by α makes the new operators d = c + uα + vα*, and d
    annihilates the ground state, so c has eigenvalue β = -(uα + vα*).
    """
    bt = result.bt
    return -(bt.u @ result.alpha + bt.v @ result.alpha.conj())


def stability_gap(h: BilinearHamiltonian, result: DiagonalizationResult) -> float:
    """Tr ξ - ΣΩ, non-negative and zero only without pairing (v = 0)."""
    return float(np.real(np.trace(h.xi))) - float(np.sum(result.omega))

