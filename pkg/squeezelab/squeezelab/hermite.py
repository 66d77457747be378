"""
Multivariate Hermite coefficients.

Every squeezed-state amplitude reduces to derivatives at p = 0 of

    G(p) = exp(pᵀTp + pᵀw)

for a complex symmetric T and complex vector w. The derivatives are built on
the degree lattice from ∂ᵢG = (wᵢ + 2Σⱼ Tᵢⱼpⱼ) G. Tables store them
normalized by 1/√(Π mᵢ!), which keeps entries of order one for the
amplitude formulas and avoids factorial overflow.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from squeezelab.common.helpers import CArray
from squeezelab.settings.custom_types import DegreeTooLarge, ShapeError, SpaceTooLarge
from squeezelab.settings.global_variables import MAX_HERMITE_DEGREE, MAX_HERMITE_TABLE

logger = logging.getLogger(__name__)


def _check_inputs(tau_form: object, w: object) -> tuple[CArray, CArray]:
    t = np.asarray(tau_form, dtype=np.complex128)
    vec = np.asarray(w, dtype=np.complex128).reshape(-1)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] != vec.size:
        raise ShapeError(f"tau_form {t.shape} and w ({vec.size},) do not match")
    return t, vec


def hermite_table(tau_form: object, w: object, shape: Sequence[int]) -> CArray:
    """
    Normalized derivatives hₘ = (Π 1/√mᵢ!) ∂ᵐG(0) for every m in a box.

    Args:
        tau_form: Symmetric N×N matrix T.
        w: Length-N linear coefficient.
        shape: Box size per mode; entry m is filled for 0 ≤ mᵢ < shape[i].

    Returns:
        Complex array of the given shape.

    Raises:
        SpaceTooLarge: If the table holds more than MAX_HERMITE_TABLE entries.
    """
    t, vec = _check_inputs(tau_form, w)
    shape = tuple(int(s) for s in shape)
    if len(shape) != vec.size or any(s < 1 for s in shape):
        raise ShapeError(f"table shape {shape} does not fit {vec.size} modes")
    size = math.prod(shape)
    if size > MAX_HERMITE_TABLE:
        raise SpaceTooLarge(size, MAX_HERMITE_TABLE, what="hermite table size")
    top = max(shape) - 1

    table = np.zeros(shape, dtype=np.complex128)
    table[(0,) * len(shape)] = 1.0
    sqrt_int = np.sqrt(np.arange(top + 2, dtype=np.float64))
    for m in np.ndindex(*shape):
        if not any(m):
            continue
        # build m from m - e_i with i the first non-zero mode
        i = next(k for k, mk in enumerate(m) if mk)
        prev = list(m)
        prev[i] -= 1
        acc = vec[i] * table[tuple(prev)]
        for j, mj in enumerate(prev):
            if mj and t[i, j] != 0:
                lower = list(prev)
                lower[j] -= 1
                acc += 2 * t[i, j] * sqrt_int[mj] * table[tuple(lower)]
        table[m] = acc / sqrt_int[m[i]]
    logger.debug("hermite table of shape %s", shape)
    return table


def normalized_coefficient(tau_form: object, w: object, n: Sequence[int]) -> complex:
    """hₙ for a single multi-index, limited to total degree 60."""
    idx = tuple(int(k) for k in n)
    if any(k < 0 for k in idx):
        raise ValueError(f"multi-index entries must be non-negative, got {idx}")
    degree = sum(idx)
    if degree > MAX_HERMITE_DEGREE:
        raise DegreeTooLarge(degree, MAX_HERMITE_DEGREE)
    table = hermite_table(tau_form, w, [k + 1 for k in idx])
    return complex(table[idx])


def hermite_coefficient(tau_form: object, w: object, n: Sequence[int]) -> complex:
    """
    The derivative ∂ⁿ exp(pᵀTp + pᵀw) at p = 0.

    Equal to (Π nᵢ!) times the coefficient of Π pᵢ^nᵢ in the series.

    >>> hermite_coefficient([[0, 0.5], [0.5, 0]], [0, 0], (1, 1))
    (1+0j)

    Raises:
        DegreeTooLarge: If Σ nᵢ exceeds 60.
    """
    h = normalized_coefficient(tau_form, w, n)
    return h * math.sqrt(math.prod(math.factorial(int(k)) for k in n))


@dataclass(frozen=True, eq=False)
class HermiteSeries:
    """The generating function exp(pᵀ·tau_form·p + pᵀ·linear)."""

    tau_form: CArray
    linear: CArray

    def __post_init__(self) -> None:
        t, vec = _check_inputs(self.tau_form, self.linear)
        object.__setattr__(self, "tau_form", t)
        object.__setattr__(self, "linear", vec)

    @property
    def n_modes(self) -> int:
        return int(self.linear.size)

    def coefficient(self, n: Sequence[int]) -> complex:
        return hermite_coefficient(self.tau_form, self.linear, n)

    def normalized(self, n: Sequence[int]) -> complex:
        return normalized_coefficient(self.tau_form, self.linear, n)

    def table(self, cutoff: int) -> CArray:
        return hermite_table(self.tau_form, self.linear, [cutoff] * self.n_modes)
