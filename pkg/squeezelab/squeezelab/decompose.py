"""
Bloch-Messiah factorization of BT matrices.

Every BT matrix splits as M = M_S·M_D·M_T, a passive rotation S, independent
one-mode squeezes r and a second passive rotation T:

    u = S·diag(cosh r)·T,    v = S·diag(sinh r)·T*.

In the frame of the mixed operators b = T a, squeezed vacuum and squeezed
coherent states are minimum-uncertainty states.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag, sqrtm

from squeezelab.bogoliubov import BTMatrix, compose_bt
from squeezelab.common.helpers import (
    CArray,
    RArray,
    dagger,
    degenerate_groups,
    matrix_to_pairs,
    max_abs,
    symmetrize,
)
from squeezelab.settings.custom_types import JSONType, ShapeError, SpecialCase, SymmetryError
from squeezelab.settings.global_variables import (
    COSH_CLAMP_ATOL,
    RECONSTRUCTION_RTOL,
    SQUEEZE_DEGENERACY_RTOL,
)
from squeezelab.states import QuadratureCovariance, StateDescriptor, covariance

logger = logging.getLogger(__name__)

# Tolerance for recognising T = I, a diagonal T, or T·S = I.
_CLASSIFY_ATOL = 1e-9

# Singular values below this (relative) span a null space.
_ZERO_SINGULAR = 1e-12


def takagi(a: object, rtol: float = SQUEEZE_DEGENERACY_RTOL) -> tuple[RArray, CArray]:
    """
    Autonne-Takagi factorization A = U·diag(s)·Uᵀ of a complex symmetric matrix.

    Singular values that agree to ``rtol`` are treated as one degenerate
    block. Within a block with non-zero value the left and right singular
    vectors differ by a symmetric unitary Z, and U takes its square root.

    Args:
        a: Square complex symmetric matrix.
        rtol: Relative tolerance for grouping singular values.

    Returns:
        The singular values in descending order and the unitary U.

    Raises:
        ShapeError: If ``a`` is not square.
        SymmetryError: If ``a`` is not symmetric.
    """
    mat = np.asarray(a, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ShapeError(f"Takagi factorization needs a square matrix, got {mat.shape}")
    scale = max(1.0, max_abs(mat))
    residual = max_abs(mat - mat.T)
    if residual > 1e-10 * scale:
        raise SymmetryError(residual, 1e-10 * scale, name="Takagi input")

    if np.all(mat.imag == 0):
        vals, vecs = np.linalg.eigh(mat.real)
        phase = np.where(vals < 0, 1j, 1.0)
        order = np.argsort(np.abs(vals))[::-1]
        return np.abs(vals)[order], (vecs * phase[np.newaxis, :])[:, order]

    left, values, right_h = np.linalg.svd(mat)
    right = dagger(right_h)
    blocks = []
    for group in degenerate_groups(values, rtol):
        if values[group[0]] <= _ZERO_SINGULAR * scale:
            blocks.append(np.eye(len(group), dtype=np.complex128))
            continue
        z = left[:, group].T @ right[:, group]
        blocks.append(np.asarray(sqrtm(z), dtype=np.complex128))
    return values, left @ np.conj(block_diag(*blocks))


@dataclass(frozen=True, eq=False)
class BlochMessiahFactors:
    """
    The factors S, r, T of a BT matrix.

    ``degenerate`` is set when two or more squeeze values coincide; the
    rotations are then not unique and only their product with the squeezes
    is guaranteed.
    """

    s_rot: CArray
    r_vals: RArray
    t_rot: CArray
    degenerate: bool = False

    @property
    def n_modes(self) -> int:
        return int(self.r_vals.size)

    def as_bt_factors(self) -> tuple[BTMatrix, BTMatrix, BTMatrix]:
        """(M_S, M_D, M_T) as BT matrices."""
        return (
            BTMatrix.embed(self.s_rot),
            BTMatrix.diagonal_squeezer(self.r_vals),
            BTMatrix.embed(self.t_rot),
        )

    def reconstruct(self) -> BTMatrix:
        """M_S·M_D·M_T."""
        m_s, m_d, m_t = self.as_bt_factors()
        return compose_bt(m_s, compose_bt(m_d, m_t))

    def to_dict(self) -> dict[str, JSONType]:
        return {
            "s_rot": matrix_to_pairs(self.s_rot),
            "r_vals": [float(r) for r in self.r_vals],
            "t_rot": matrix_to_pairs(self.t_rot),
            "degenerate": self.degenerate,
        }


def _fix_row_signs(s_rot: CArray, t_rot: CArray, r_vals: RArray) -> tuple[CArray, CArray]:
    """
    Give the largest entry of each row of T a positive real part.

    Rows with r = 0 have a full phase freedom and get a real positive entry.
    The matching columns of S are compensated.
    """
    s_out, t_out = s_rot.copy(), t_rot.copy()
    for k in range(t_out.shape[0]):
        pivot = t_out[k, int(np.argmax(np.abs(t_out[k])))]
        if r_vals[k] == 0:
            phase = pivot.conj() / abs(pivot)
        else:
            phase = -1.0 if pivot.real < 0 else 1.0
        t_out[k] *= phase
        s_out[:, k] *= np.conj(phase)
    return s_out, t_out


def bloch_messiah(bt: BTMatrix) -> BlochMessiahFactors:
    """
    Factor ``bt`` into rotation, squeeze and rotation.

    uu† = S₁·diag(cosh² r)·S₁† gives the first rotation and the squeezes.
    Then T₁ = diag(1/cosh r)S₁†u and T₂ = diag(1/sinh r)S₁†v, and the
    symmetric unitary W = T₂T₁ᵀ, block diagonal over equal squeezes, is
    split as W = YYᵀ. The factors are S = S₁Y and T = Y†T₁.
    """
    u, v = bt.u, bt.v
    n = bt.n_modes
    cosh2, s1 = np.linalg.eigh(u @ dagger(u))
    cosh2, s1 = cosh2[::-1], s1[:, ::-1]
    cosh_r = np.sqrt(np.maximum(cosh2, 1.0))
    cosh_r = np.where(cosh_r < 1.0 + COSH_CLAMP_ATOL, 1.0, cosh_r)
    sinh_r = np.sqrt(cosh_r**2 - 1.0)
    r_vals = np.arccosh(cosh_r)

    t1 = (s1.conj().T @ u) / cosh_r[:, None]
    y = np.eye(n, dtype=np.complex128)
    groups = degenerate_groups(r_vals, SQUEEZE_DEGENERACY_RTOL)
    degenerate = any(len(g) > 1 for g in groups)
    for group in groups:
        if r_vals[group[0]] == 0:
            continue
        idx = np.asarray(group)
        t2 = (s1[:, idx].conj().T @ v) / sinh_r[idx, None]
        w = symmetrize(t2 @ t1[idx].T)
        _, y_block = takagi(w)
        y[np.ix_(idx, idx)] = y_block
    if degenerate:
        logger.warning("degenerate squeeze values %s; rotations are not unique", r_vals)

    s_rot, t_rot = _fix_row_signs(s1 @ y, dagger(y) @ t1, r_vals)
    factors = BlochMessiahFactors(s_rot=s_rot, r_vals=r_vals, t_rot=t_rot, degenerate=degenerate)
    rebuilt = factors.reconstruct()
    residual = max(max_abs(rebuilt.u - u), max_abs(rebuilt.v - v))
    if residual > RECONSTRUCTION_RTOL * max(1.0, max_abs(u)):
        logger.warning("Bloch-Messiah reconstruction residual %.3e", residual)
    logger.debug("Bloch-Messiah: r = %s, residual %.3e", r_vals, residual)
    return factors


def rotate_modes(bt: BTMatrix, w: object) -> BTMatrix:
    """The BT of ``bt`` written in the rotated operators b = W a."""
    w_mat = np.asarray(w, dtype=np.complex128)
    return compose_bt(bt, BTMatrix.embed(dagger(w_mat)))


@dataclass(frozen=True, eq=False)
class MixedFrame:
    """T and the squeezed-vacuum covariance seen from the operators b = T a."""

    t_rot: CArray
    cov_in_frame: QuadratureCovariance


def mixed_boson_frame(bt: BTMatrix, factors: BlochMessiahFactors | None = None) -> MixedFrame:
    """
    Covariance of the squeezed vacuum of ``bt`` in the mixed-boson frame.

    In that frame ⟨ΔXᵢ²⟩ = ¼e^{-2rᵢ} and ⟨ΔYᵢ²⟩ = ¼e^{2rᵢ}, so every mode
    sits at the Heisenberg bound.
    """
    factors = factors or bloch_messiah(bt)
    rotated = rotate_modes(bt, factors.t_rot)
    cov = covariance(StateDescriptor.svs(rotated))
    return MixedFrame(t_rot=factors.t_rot, cov_in_frame=cov)


def classify_special_case(factors: BlochMessiahFactors) -> SpecialCase:
    """
    Name the special case the factors fall into, checked in this order.

    MilburnMUS when T = I, OneModeLike when T is diagonal, HermitianM when
    T·S = I (M = M†), Generic otherwise.
    """
    t, s = factors.t_rot, factors.s_rot
    eye = np.eye(factors.n_modes)
    if max_abs(t - eye) <= _CLASSIFY_ATOL:
        return "MilburnMUS"
    if max_abs(t - np.diag(np.diag(t))) <= _CLASSIFY_ATOL:
        return "OneModeLike"
    if max_abs(t @ s - eye) <= _CLASSIFY_ATOL:
        return "HermitianM"
    return "Generic"
