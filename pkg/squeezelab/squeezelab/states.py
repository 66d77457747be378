"""
Squeezed states and their baselines.

Every state here is U D(α)|n⟩ for a squeeze operator U (the identity for the
baselines), a displacement α and a Fock occupation n:

============== ============ ===== =====
kind           U            α     n
============== ============ ===== =====
fock           1            0     n
coherent       1            α     0
coherent-fock  1            α     n
svs            U            0     0
scs            U            α     0
sfs            U            0     n
scfs           U            α     n
============== ============ ===== =====

Quadratures are X = (a + a†)/2 and Y = (a - a†)/2i, so the vacuum has
⟨ΔX²⟩ = ⟨ΔY²⟩ = ¼.

In the Fock basis the squeezed amplitudes are normalized Hermite
coefficients of one generating function in 2N variables z = [p; q],

    ⟨m|ψ⟩ = P · (∂ₚⁿ ∂_qᵐ exp(zᵀQz + zᵀL))(0) / √(n! m!)

with Q = [[τ, ½u⁻ᵀ], [½u⁻¹, -ρ]], L = [2τα - α*; u⁻¹α] and
P = |det u|^(-1/2) exp(-½|α|² + αᵀτα). The coherent and coordinate bases
contract the q variables against the basis state in closed form, so all
three bases describe the same vector with the same global phase.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import special

from squeezelab.bogoliubov import BTMatrix
from squeezelab.common.helpers import (
    CArray,
    RArray,
    as_complex_vector,
    dagger,
    matrix_to_pairs,
    max_abs,
    symmetrize,
    vector_to_pairs,
)
from squeezelab.hermite import HermiteSeries, hermite_table, normalized_coefficient
from squeezelab.settings.custom_types import (
    DegreeTooLarge,
    JSONType,
    SingularQuadratureFrame,
    StateParameterError,
)
from squeezelab.settings.global_variables import (
    BT_ATOL,
    MAX_HERMITE_DEGREE,
    SINGULAR_FRAME_ATOL,
)
from squeezelab.squeezeop import disentangle

logger = logging.getLogger(__name__)


class StateKind(Enum):
    FOCK = "fock"
    COHERENT = "coherent"
    COHERENT_FOCK = "coherent-fock"
    SVS = "svs"
    SCS = "scs"
    SFS = "sfs"
    SCFS = "scfs"

    @property
    def squeezed(self) -> bool:
        return self in (StateKind.SVS, StateKind.SCS, StateKind.SFS, StateKind.SCFS)

    @property
    def displaced(self) -> bool:
        return self in (StateKind.COHERENT, StateKind.COHERENT_FOCK, StateKind.SCS, StateKind.SCFS)

    @property
    def excited(self) -> bool:
        return self in (StateKind.FOCK, StateKind.COHERENT_FOCK, StateKind.SFS, StateKind.SCFS)


# -------------------- Descriptor --------------------


@dataclass(frozen=True, eq=False)
class StateDescriptor:
    """
    A state U D(α)|n⟩ together with its kind.

    Use the named constructors; direct construction checks that the kind and
    the parameters agree and raises :class:`StateParameterError` otherwise.
    """

    kind: StateKind
    bt: BTMatrix
    alpha: CArray = field(default_factory=lambda: np.zeros(0, dtype=np.complex128))
    n: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n_modes = self.bt.n_modes
        try:
            alpha = as_complex_vector(self.alpha if self.alpha.size else None, n_modes, "alpha")
        except ValueError as exc:
            raise StateParameterError(str(exc)) from exc
        occupation = tuple(int(k) for k in self.n) if self.n else (0,) * n_modes
        if len(occupation) != n_modes:
            raise StateParameterError(f"n must have {n_modes} entries, got {len(occupation)}")
        if any(k < 0 for k in occupation):
            raise StateParameterError(f"occupation numbers must be non-negative, got {occupation}")

        if not self.kind.squeezed:
            identity = BTMatrix.identity(n_modes)
            if max(max_abs(self.bt.u - identity.u), max_abs(self.bt.v)) > BT_ATOL:
                raise StateParameterError(f"{self.kind.value} state cannot carry a squeeze")
        if not self.kind.displaced and np.any(alpha != 0):
            raise StateParameterError(f"{self.kind.value} state must have alpha = 0")
        if not self.kind.excited and any(occupation):
            raise StateParameterError(f"{self.kind.value} state must have n = 0")

        alpha = np.array(alpha)
        alpha.flags.writeable = False
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "n", occupation)

    @property
    def n_modes(self) -> int:
        return self.bt.n_modes

    @classmethod
    def build(
        cls,
        kind: StateKind | str,
        n_modes: int,
        bt: BTMatrix | None = None,
        alpha: object | None = None,
        n: object | None = None,
    ) -> StateDescriptor:
        """Generic constructor; missing parameters default to identity, 0 and vacuum."""
        state_kind = StateKind(kind)
        bt = bt if bt is not None else BTMatrix.identity(n_modes)
        if bt.n_modes != n_modes:
            raise StateParameterError(f"BT acts on {bt.n_modes} modes, expected {n_modes}")
        try:
            alpha_vec = as_complex_vector(alpha, n_modes, "alpha")  # type: ignore[arg-type]
        except ValueError as exc:
            raise StateParameterError(str(exc)) from exc
        occupation = tuple(int(k) for k in np.asarray(n).reshape(-1)) if n is not None else ()
        return cls(state_kind, bt, alpha_vec, occupation)

    @classmethod
    def fock(cls, n: object) -> StateDescriptor:
        occupation = np.atleast_1d(np.asarray(n))
        return cls.build(StateKind.FOCK, occupation.size, n=occupation)

    @classmethod
    def coherent(cls, alpha: object) -> StateDescriptor:
        vec = np.atleast_1d(np.asarray(alpha))
        return cls.build(StateKind.COHERENT, vec.size, alpha=vec)

    @classmethod
    def coherent_fock(cls, alpha: object, n: object) -> StateDescriptor:
        vec = np.atleast_1d(np.asarray(alpha))
        return cls.build(StateKind.COHERENT_FOCK, vec.size, alpha=vec, n=n)

    @classmethod
    def svs(cls, bt: BTMatrix) -> StateDescriptor:
        return cls.build(StateKind.SVS, bt.n_modes, bt=bt)

    @classmethod
    def scs(cls, bt: BTMatrix, alpha: object) -> StateDescriptor:
        return cls.build(StateKind.SCS, bt.n_modes, bt=bt, alpha=alpha)

    @classmethod
    def sfs(cls, bt: BTMatrix, n: object) -> StateDescriptor:
        return cls.build(StateKind.SFS, bt.n_modes, bt=bt, n=n)

    @classmethod
    def scfs(cls, bt: BTMatrix, alpha: object, n: object) -> StateDescriptor:
        return cls.build(StateKind.SCFS, bt.n_modes, bt=bt, alpha=alpha, n=n)

    def to_dict(self) -> dict[str, JSONType]:
        return {
            "kind": self.kind.value,
            "alpha": vector_to_pairs(self.alpha),
            "n": list(self.n),
        }


# -------------------- Covariance and photon statistics --------------------


@dataclass(frozen=True, eq=False)
class QuadratureCovariance:
    """
    Unsymmetrized second central moments ⟨ΔAᵢΔBⱼ⟩ of the quadratures.

    ``cov`` is the 2N×2N matrix [[XX, XY], [YX, YY]].
    """

    cov: CArray

    @property
    def n_modes(self) -> int:
        return int(self.cov.shape[0] // 2)

    @property
    def xx(self) -> CArray:
        n = self.n_modes
        return self.cov[:n, :n]

    @property
    def xy(self) -> CArray:
        n = self.n_modes
        return self.cov[:n, n:]

    @property
    def yx(self) -> CArray:
        n = self.n_modes
        return self.cov[n:, :n]

    @property
    def yy(self) -> CArray:
        n = self.n_modes
        return self.cov[n:, n:]

    def uncertainty_products(self) -> RArray:
        """Per-mode ⟨ΔXᵢ²⟩⟨ΔYᵢ²⟩, at least 1/16."""
        return np.real(np.diag(self.xx)) * np.real(np.diag(self.yy))

    def to_dict(self) -> dict[str, JSONType]:
        return {"cov": matrix_to_pairs(self.cov)}


def _blocks(s: StateDescriptor) -> tuple[CArray, CArray]:
    return s.bt.u, s.bt.v


def covariance(s: StateDescriptor) -> QuadratureCovariance:
    """
    Quadrature covariance of ``s``; the displacement never enters.

    For a squeezed state with occupation n, writing D₁ = diag(n + 1),
    D₀ = diag(n), w = u - v and z = u + v::

        XX = ¼(w†D₁w + wᵀD₀w*)      XY = ¼i(w†D₁z - wᵀD₀z*)
        YX = ¼i(zᵀD₀w* - z†D₁w)     YY = ¼(z†D₁z + zᵀD₀z*)

    Baselines use ¼[[D₂ₙ₊₁, iI], [-iI, D₂ₙ₊₁]].
    """
    n_vec = np.asarray(s.n, dtype=np.float64)
    if not s.kind.squeezed:
        d = np.diag(2 * n_vec + 1).astype(np.complex128)
        eye = np.eye(s.n_modes)
        return QuadratureCovariance(np.block([[d, 1j * eye], [-1j * eye, d]]) / 4)

    u, v = _blocks(s)
    d1 = np.diag(n_vec + 1)
    d0 = np.diag(n_vec)
    w, z = u - v, u + v
    xx = dagger(w) @ d1 @ w + w.T @ d0 @ w.conj()
    xy = 1j * dagger(w) @ d1 @ z - 1j * w.T @ d0 @ z.conj()
    yx = 1j * z.T @ d0 @ w.conj() - 1j * dagger(z) @ d1 @ w
    yy = dagger(z) @ d1 @ z + z.T @ d0 @ z.conj()
    return QuadratureCovariance(np.block([[xx, xy], [yx, yy]]) / 4)


def original_frame_displacement(s: StateDescriptor) -> CArray:
    """⟨a⟩ of ``s``: u†α - vᵀα* (α itself for the baselines)."""
    u, v = _blocks(s)
    return dagger(u) @ s.alpha - v.T @ s.alpha.conj()


def mean_photon(s: StateDescriptor) -> RArray:
    """⟨a†ᵢaᵢ⟩ = (u†Dₙu + v†D_{n+1}v)ᵢᵢ + |⟨aᵢ⟩|²."""
    n_vec = np.asarray(s.n, dtype=np.float64)
    gamma = original_frame_displacement(s)
    if not s.kind.squeezed:
        return n_vec + np.abs(gamma) ** 2
    u, v = _blocks(s)
    inner = dagger(u) @ np.diag(n_vec) @ u + dagger(v) @ np.diag(n_vec + 1) @ v
    return np.real(np.diag(inner)) + np.abs(gamma) ** 2


def photon_variance(s: StateDescriptor) -> RArray:
    """
    ⟨N²ᵢ⟩ - ⟨Nᵢ⟩² in closed form.

    With A = |u|², B = |v|² (entrywise), C = ⟨a⟩* and D_k = diag(k)::

        |(u†D₂ₙ₊₁v)ᵢᵢ|²
        + (u†Dₙu + v†Dₙ₊₁v)ᵢᵢ (u†Dₙ₊₁u + v†Dₙv)ᵢᵢ
        - Σₖ nₖ(nₖ + 1) [(A + B)² + 2AB]ₖᵢ
        + |Cᵢ|² (u†D₂ₙ₊₁u + v†D₂ₙ₊₁v)ᵢᵢ
        - 2 Re(Cᵢ² (u†D₂ₙ₊₁v)ᵢᵢ)

    The baselines reduce to 0 (Fock), |α|² (coherent) and (2n + 1)|α|²
    (coherent Fock).
    """
    n_vec = np.asarray(s.n, dtype=np.float64)
    gamma = original_frame_displacement(s)
    if not s.kind.squeezed:
        return (2 * n_vec + 1) * np.abs(gamma) ** 2 if s.kind.displaced else np.zeros(s.n_modes)

    u, v = _blocks(s)
    d_n, d_n1, d_odd = np.diag(n_vec), np.diag(n_vec + 1), np.diag(2 * n_vec + 1)
    cross = np.diag(dagger(u) @ d_odd @ v)
    lower = np.real(np.diag(dagger(u) @ d_n @ u + dagger(v) @ d_n1 @ v))
    upper = np.real(np.diag(dagger(u) @ d_n1 @ u + dagger(v) @ d_n @ v))
    a_abs, b_abs = np.abs(u) ** 2, np.abs(v) ** 2
    fock_term = (n_vec * (n_vec + 1)) @ ((a_abs + b_abs) ** 2 + 2 * a_abs * b_abs)
    c = gamma.conj()
    spread = np.real(np.diag(dagger(u) @ d_odd @ u + dagger(v) @ d_odd @ v))
    return (
        np.abs(cross) ** 2
        + lower * upper
        - fock_term
        + np.abs(c) ** 2 * spread
        - 2 * np.real(c**2 * cross)
    )


# -------------------- Wavefunctions --------------------


def _check_degree(index: tuple[int, ...]) -> None:
    degree = sum(index)
    if degree > MAX_HERMITE_DEGREE:
        raise DegreeTooLarge(degree, MAX_HERMITE_DEGREE)


@dataclass(frozen=True, eq=False)
class ReducedCoefficients:
    """
    Data of the creation-operator form of a squeezed state,

        P · ∂ₚⁿ/√n! exp(pᵀτp + pᵀ(2τα - α*)) exp(-a†ᵀρa† + a†ᵀu⁻¹(p + α))|0⟩.

    ``series`` is None for the vacuum-based kinds, where n = 0 and the
    derivative is trivial.
    """

    prefactor: complex
    quadratic: CArray
    linear: CArray
    series: HermiteSeries | None
    coupling: CArray

    def to_dict(self) -> dict[str, JSONType]:
        out: dict[str, JSONType] = {
            "prefactor": [self.prefactor.real, self.prefactor.imag],
            "quadratic": matrix_to_pairs(self.quadratic),
            "linear": vector_to_pairs(self.linear),
        }
        if self.series is not None:
            out["series_tau"] = matrix_to_pairs(self.series.tau_form)
            out["series_linear"] = vector_to_pairs(self.series.linear)
        return out


def reduced_state_coefficients(s: StateDescriptor) -> ReducedCoefficients:
    """
    Reduce ``s`` to creation operators acting on the vacuum.

    SVS gives (|det u|^(-1/2), ρ, 0); SCS multiplies the prefactor by
    exp(-½|α|² + αᵀτα) and adds the linear term u⁻¹α. For SFS and SCFS the
    Hermite series in p carries τ and 2τα - α*, and p couples to a† through
    ``coupling`` = u⁻ᵀ.
    """
    so = disentangle(s.bt)
    u_inv = np.linalg.inv(s.bt.u)
    alpha = s.alpha
    prefactor = so.norm_magnitude * np.exp(-0.5 * np.vdot(alpha, alpha).real + alpha @ so.tau @ alpha)
    series = None
    if any(s.n):
        series = HermiteSeries(so.tau, 2 * so.tau @ alpha - alpha.conj())
    return ReducedCoefficients(
        prefactor=complex(prefactor),
        quadratic=so.rho,
        linear=u_inv @ alpha,
        series=series,
        coupling=u_inv.T,
    )


def _generating_form(s: StateDescriptor) -> tuple[complex, CArray, CArray]:
    """(P, Q, L) of the 2N-variable Fock-basis generating function."""
    red = reduced_state_coefficients(s)
    so = disentangle(s.bt)
    alpha = s.alpha
    half_c = red.coupling / 2
    q_form = np.block([[so.tau, half_c], [half_c.T, -so.rho]])
    linear = np.concatenate([2 * so.tau @ alpha - alpha.conj(), red.linear])
    return red.prefactor, q_form, linear


def _fock_1d(m: int, n: int, alpha: complex) -> complex:
    """⟨m|D(α)|n⟩ through generalized Laguerre polynomials."""
    x = abs(alpha) ** 2
    lo, hi = min(m, n), max(m, n)
    ratio = math.exp(0.5 * (special.gammaln(lo + 1) - special.gammaln(hi + 1)))
    lag = special.eval_genlaguerre(lo, hi - lo, x)
    base = alpha if m >= n else -alpha.conjugate()
    return complex(ratio * base ** (hi - lo) * math.exp(-x / 2) * lag)


def wavefn_fock(s: StateDescriptor, m: object) -> complex:
    """
    Amplitude ⟨m|s⟩.

    >>> wavefn_fock(StateDescriptor.fock([1, 0]), [1, 0])
    (1+0j)

    Raises:
        DegreeTooLarge: If |n| + |m| exceeds 60.
    """
    idx = tuple(int(k) for k in np.asarray(m).reshape(-1))
    if len(idx) != s.n_modes or any(k < 0 for k in idx):
        raise StateParameterError(f"m must be {s.n_modes} non-negative integers, got {idx}")
    _check_degree(s.n + idx)
    if not s.kind.squeezed:
        amp = 1 + 0j
        for mi, ni, ai in zip(idx, s.n, s.alpha, strict=True):
            amp *= _fock_1d(mi, ni, complex(ai))
        return amp
    pref, q_form, linear = _generating_form(s)
    return pref * normalized_coefficient(q_form, linear, s.n + idx)


def fock_amplitudes(s: StateDescriptor, cutoff: int) -> CArray:
    """
    All amplitudes ⟨m|s⟩ with every mᵢ < cutoff, as an N-dimensional array.

    One Hermite table serves the whole box.

    Raises:
        SpaceTooLarge: If the amplitude table grows past its size guard.
    """
    pref, q_form, linear = _generating_form(s)
    shape = [k + 1 for k in s.n] + [cutoff] * s.n_modes
    table = hermite_table(q_form, linear, shape)
    return pref * table[s.n]


def wavefn_coherent(s: StateDescriptor, beta: object) -> complex:
    """
    Overlap ⟨β|s⟩ with the coherent state |β⟩.

    For the squeezed kinds

        ⟨β|s⟩ = P exp(-½|β|² - β†ρβ* + β†u⁻¹α) hₙ(τ, 2τα - α* + u⁻ᵀβ*)

    with hₙ the normalized Hermite coefficient.
    """
    b = as_complex_vector(beta, s.n_modes, "beta")  # type: ignore[arg-type]
    if not s.kind.squeezed:
        a = s.alpha
        overlap = np.exp(np.vdot(b, a) - 0.5 * np.vdot(a, a).real - 0.5 * np.vdot(b, b).real)
        shift = np.prod([(bi.conjugate() - ai.conjugate()) ** ni for bi, ai, ni in zip(b, a, s.n)])
        norm = math.sqrt(math.prod(math.factorial(k) for k in s.n))
        return complex(overlap * shift / norm)

    red = reduced_state_coefficients(s)
    exponent = -0.5 * np.vdot(b, b).real - b.conj() @ red.quadratic @ b.conj() + b.conj() @ red.linear
    value = red.prefactor * np.exp(exponent)
    if red.series is not None:
        w = red.series.linear + red.coupling @ b.conj()
        value *= normalized_coefficient(red.series.tau_form, w, s.n)
    return complex(value)


def _hermite_function(n: int, x: float) -> float:
    """⟨X|n⟩ for real X."""
    norm = (2 / math.pi) ** 0.25 / math.sqrt(2.0**n * math.factorial(n))
    return float(norm * special.eval_hermite(n, math.sqrt(2) * x) * math.exp(-x * x))


def wavefn_coordinate(s: StateDescriptor, x: object) -> complex:
    """
    Wavefunction ⟨X|s⟩ in the X-quadrature representation.

    With A = (u - v)⁻¹(u + v) and W = ((u - v)⁻ᵀu⁻¹ symmetrized), the
    squeezed kinds evaluate

        P K₀ exp(-XᵀAX + 2Xᵀ(u - v)⁻¹α - ½αᵀWα)
            · hₙ(τ - ½W, 2τα - α* + 2(u - v)⁻ᵀX - Wα)

    where K₀ = (2π)^(-N/4) Π √λ over the eigenvalues λ of I + A, each root
    principal.

    Raises:
        SingularQuadratureFrame: If |det(u - v)| < 1e-12.
    """
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    if xv.size != s.n_modes:
        raise StateParameterError(f"x must have {s.n_modes} entries, got {xv.size}")
    if not s.kind.squeezed:
        value = 1 + 0j
        for xi, ai, ni in zip(xv, s.alpha, s.n, strict=True):
            ar, ai_im = float(ai.real), float(ai.imag)
            value *= np.exp(2j * ai_im * xi - 1j * ar * ai_im) * _hermite_function(ni, xi - ar)
        return complex(value)

    u, v = _blocks(s)
    w = u - v
    det = abs(np.linalg.det(w))
    if det < SINGULAR_FRAME_ATOL:
        raise SingularQuadratureFrame(det)
    w_inv = np.linalg.inv(w)
    a_mat = symmetrize(w_inv @ (u + v))
    wm = symmetrize(w_inv.T @ np.linalg.inv(u))
    k0 = (2 * math.pi) ** (-s.n_modes / 4) * np.prod(
        np.sqrt(np.linalg.eigvals(np.eye(s.n_modes) + a_mat))
    )

    red = reduced_state_coefficients(s)
    alpha = s.alpha
    exponent = -xv @ a_mat @ xv + 2 * xv @ w_inv @ alpha - 0.5 * alpha @ wm @ alpha
    value = red.prefactor * k0 * np.exp(exponent)
    if red.series is not None:
        t = red.series.tau_form - wm / 2
        lin = red.series.linear + 2 * w_inv.T @ xv - wm @ alpha
        value *= normalized_coefficient(t, lin, s.n)
    return complex(value)
