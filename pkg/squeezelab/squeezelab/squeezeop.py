"""
Squeeze operators of a BT matrix.

The unitary U with U a U† = u a + v a† has two useful forms:

- the exponent form U = exp(Φ†GΦ), Φ = [a; a†], with G = -½ K ln M;
- the normal-ordered (disentangled) form
  U = C₀ exp(-a†ᵀρa†) exp(a†ᵀ(2σ)a) exp(aᵀτa), where e^{2σ} = u,
  ρ = ½u⁻¹v, τ = ½v*u⁻¹ and C₀ = |det u|^(-1/2).

The disentangled form always exists. The exponent form needs the principal
logarithm of M.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from squeezelab.bogoliubov import BTMatrix, compose_bt
from squeezelab.common.helpers import (
    CArray,
    dagger,
    k_metric,
    matrix_to_pairs,
    max_abs,
    symmetrize,
)
from squeezelab.settings.custom_types import (
    BranchCutError,
    JSONType,
    NotOneMode,
    NotTwoMode,
)
from squeezelab.settings.global_variables import BRANCH_CUT_ATOL, BT_ATOL, RECONSTRUCTION_RTOL

logger = logging.getLogger(__name__)

# Condition number of the eigenvector matrix above which ln M is taken from
# scipy's Schur-based logm instead.
_EIG_COND_LIMIT = 1e8


# -------------------- Disentangled form --------------------


@dataclass(frozen=True, eq=False)
class DisentangledSO:
    """
    Normal-ordered squeeze operator.

    ``u_block`` is stored instead of σ; :attr:`sigma` takes ½ ln u on demand.
    """

    rho: CArray
    u_block: CArray
    tau: CArray
    norm_magnitude: float

    @property
    def n_modes(self) -> int:
        return int(self.u_block.shape[0])

    @property
    def sigma(self) -> CArray:
        """½ principal logarithm of u."""
        return np.asarray(sla.logm(self.u_block), dtype=np.complex128) / 2

    @property
    def spectral_radius(self) -> float:
        """Largest |eigenvalue| of 2ρ; below 1 for every valid BT."""
        return float(np.max(np.abs(np.linalg.eigvals(2 * self.rho))))

    def reconstruct(self) -> CArray:
        """The 2N×2N reconstruction [[u, 2uρ], [2τu, 4τuρ + u⁻ᵀ]]."""
        u = self.u_block
        top = np.hstack([u, 2 * u @ self.rho])
        bottom = np.hstack([2 * self.tau @ u, 4 * self.tau @ u @ self.rho + np.linalg.inv(u).T])
        return np.vstack([top, bottom])

    def to_dict(self) -> dict[str, JSONType]:
        return {
            "rho": matrix_to_pairs(self.rho),
            "tau": matrix_to_pairs(self.tau),
            "norm_magnitude": self.norm_magnitude,
        }


def disentangle(bt: BTMatrix) -> DisentangledSO:
    """
    Normal-ordered coefficients of the squeeze operator of ``bt``.

    ρ and τ are symmetrized after the solve. The overall phase of C₀ is
    chosen real positive.

    >>> so = disentangle(BTMatrix.identity(2))
    >>> float(so.norm_magnitude), float(abs(so.rho).max())
    (1.0, 0.0)
    """
    u, v = bt.u, bt.v
    rho = symmetrize(np.linalg.solve(u, v) / 2)
    tau = symmetrize(np.linalg.solve(u.T, v.conj().T).T / 2)
    norm = float(abs(np.linalg.det(u)) ** -0.5)
    logger.debug("disentangled: |det u| = %.12g", abs(np.linalg.det(u)))
    return DisentangledSO(rho=rho, u_block=np.array(u), tau=tau, norm_magnitude=norm)


# -------------------- Exponent form --------------------


@dataclass(frozen=True, eq=False)
class ExponentForm:
    """U = exp(Φ†·generator·Φ) with generator = -½ K ln M."""

    log_m: CArray
    generator: CArray

    def block_residual(self) -> dict[str, float]:
        """
        Residuals of the block constraints on ln M = [[A, B], [C, D]].

        C = B*, D = A*, Aᵀ = -D and Bᵀ = B.
        """
        n = self.log_m.shape[0] // 2
        a, b = self.log_m[:n, :n], self.log_m[:n, n:]
        c, d = self.log_m[n:, :n], self.log_m[n:, n:]
        return {
            "lower_left": max_abs(c - b.conj()),
            "lower_right": max_abs(d - a.conj()),
            "anti_hermitian": max_abs(a.T + d),
            "symmetric": max_abs(b.T - b),
        }

    def round_trip_residual(self, bt: BTMatrix) -> float:
        """max|exp(ln M) - M|."""
        return max_abs(sla.expm(self.log_m) - bt.matrix)


def _branch_distance(z: complex) -> float:
    """Distance from z to the closed negative real axis."""
    return abs(z.imag) if z.real <= 0 else abs(z)


def exponent_form(bt: BTMatrix) -> ExponentForm:
    """
    Principal logarithm of M and the generator -½ K ln M.

    ln M comes from the eigendecomposition of M. When the eigenvectors are
    ill-conditioned, or the round trip misses M, scipy's ``logm`` is used.

    Raises:
        BranchCutError: If an eigenvalue of M lies within 1e-8 of (-∞, 0].
    """
    m = bt.matrix
    evals, evecs = np.linalg.eig(m)
    for z in evals:
        if _branch_distance(complex(z)) < BRANCH_CUT_ATOL:
            raise BranchCutError(complex(z))

    tol = RECONSTRUCTION_RTOL * max(1.0, max_abs(m))
    log_m: CArray | None = None
    if np.linalg.cond(evecs) < _EIG_COND_LIMIT:
        candidate = evecs @ np.diag(np.log(evals)) @ np.linalg.inv(evecs)
        if max_abs(sla.expm(candidate) - m) <= tol:
            log_m = candidate
    if log_m is None:
        logger.warning("eigenvector route for ln M failed; falling back to logm")
        log_m = np.asarray(sla.logm(m), dtype=np.complex128)

    generator = -0.5 * k_metric(bt.n_modes) @ log_m
    return ExponentForm(log_m=log_m, generator=generator)


def generator_invariance_residual(bt: BTMatrix, form: ExponentForm) -> float:
    """max|M†(K ln M)M - K ln M|: the generator looks the same in the new operators."""
    m = bt.matrix
    kl = k_metric(bt.n_modes) @ form.log_m
    return max_abs(dagger(m) @ kl @ m - kl)


# -------------------- Composition and reductions --------------------


def compose_so(m1: BTMatrix, m2: BTMatrix) -> BTMatrix:
    """
    BT matrix of the product U₁U₂ of the squeeze operators of ``m1``, ``m2``.

    The BT matrices multiply in the opposite order, M₂M₁.

    Raises:
        DimensionMismatch: If the operands act on different numbers of modes.
    """
    return compose_bt(m2, m1)


def one_mode_reduce(bt: BTMatrix) -> complex:
    """
    Squeeze parameter ζ of a one-mode BT, U = exp(½ζ*a² - ½ζa†²).

    The row phase is first chosen so that u is real positive.

    Raises:
        NotOneMode: If ``bt`` acts on more than one mode.
    """
    if bt.n_modes != 1:
        raise NotOneMode(f"one-mode reduction needs N = 1, got N = {bt.n_modes}")
    u, v = complex(bt.u[0, 0]), complex(bt.v[0, 0])
    phase = u.conjugate() / abs(u)
    u_real, v = abs(u), phase * v
    if abs(v) == 0:
        return 0j
    return complex(v * np.log(u_real + abs(v)) / abs(v))


@dataclass(frozen=True)
class TwoModeTest:
    is_standard: bool
    r: float
    varphi: float

    def to_dict(self) -> dict[str, JSONType]:
        return {"is_standard": self.is_standard, "r": self.r, "varphi": self.varphi}


def is_standard_two_mode(bt: BTMatrix, atol: float = BT_ATOL) -> TwoModeTest:
    """
    Test for u = diag(cosh r, cosh r), v = [[0, e^{iφ} sinh r], [e^{iφ} sinh r, 0]].

    Row phases are removed first, so that the diagonal of u is real
    positive; the test therefore holds for the form up to apply_phase. r and
    φ are read off u[0, 0] and v[0, 1] whatever the outcome; φ is 0 when r
    vanishes.

    Raises:
        NotTwoMode: If ``bt`` does not act on two modes.
    """
    if bt.n_modes != 2:
        raise NotTwoMode(f"two-mode test needs N = 2, got N = {bt.n_modes}")
    diag = np.diag(bt.u)
    phases = np.where(np.abs(diag) > atol, diag.conj() / np.maximum(np.abs(diag), atol), 1.0)
    u, v = phases[:, None] * bt.u, phases[:, None] * bt.v
    c = float(u[0, 0].real)
    r = float(np.arccosh(max(c, 1.0)))
    off = complex(v[0, 1])
    varphi = float(np.angle(off)) if abs(off) > atol else 0.0

    expected_u = np.diag([np.cosh(r), np.cosh(r)])
    s = np.exp(1j * varphi) * np.sinh(r)
    expected_v = np.array([[0, s], [s, 0]])
    is_standard = max_abs(u - expected_u) <= atol and max_abs(v - expected_v) <= atol
    return TwoModeTest(is_standard=bool(is_standard), r=r, varphi=varphi)
