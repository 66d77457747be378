"""
The two-mode worked example and its reference values.

    H = 45(a₁a₁† + a₁†a₁ + a₂a₂† + a₂†a₂) + 36(a₁² + a₁†² + a₂² + a₂†²)
        + 14i(a₁†a₂ - a₁a₂†) - 32i(a₁a₂ - a₁†a₂†)

Eigenvector phases are conventions, so every golden value that depends on
them is either compared in absolute value or after the computed rows are
rephased onto :data:`REFERENCE_U`.
"""

import math

import numpy as np

from squeezelab.common.helpers import CArray, RArray
from squeezelab.model import BilinearHamiltonian, SpecMeta, serialize_spec

_S5 = math.sqrt(5)
_S10 = math.sqrt(10)

XI = np.array([[45, 7j], [-7j, 45]], dtype=np.complex128)
ETA = np.array([[36, 16j], [16j, 36]], dtype=np.complex128)

#: The u and v blocks as published, one fixed choice of row phases.
REFERENCE_U: CArray = np.array(
    [[7 / (3 * _S10), 3j / _S10], [5j / (3 * math.sqrt(2)), 1 / math.sqrt(2)]]
)
REFERENCE_V: CArray = np.array(
    [[2 / (3 * _S10), 2j / _S10], [2j * math.sqrt(2) / 3, 0]]
)

OMEGA: RArray = np.array([30.0, 12.0])
GROUND_ENERGY = 42.0

RHO: CArray = np.array([[7, 3j], [3j, 5]]) / 22
#: τ of the reference blocks; τ picks up the row phases, so it is only
#: compared once the computed rows are aligned with REFERENCE_U.
TAU: CArray = -np.array([[2, 1j * _S5], [1j * _S5, 3]]) / 11
NORM_MAGNITUDE = math.sqrt(3 * _S5 / 11)

MEAN_PHOTON: RArray = np.array([14 / 15, 2 / 5])

COSH_R: RArray = np.sqrt([5 / 3 + 2 / (3 * _S5), 5 / 3 - 2 / (3 * _S5)])
SINH_R: RArray = np.sqrt([2 / 3 + 2 / (3 * _S5), 2 / 3 - 2 / (3 * _S5)])
R_VALS: RArray = np.log(COSH_R + SINH_R)

ABS_U: RArray = np.abs(REFERENCE_U)
ABS_V: RArray = np.abs(REFERENCE_V)
ABS_S: RArray = np.array([[_S5 - 1, _S5 + 1], [_S5 + 1, _S5 - 1]]) / (2 * math.sqrt(3))
ABS_T: RArray = np.sqrt([[0.5 + 1 / _S5, 0.5 - 1 / _S5], [0.5 - 1 / _S5, 0.5 + 1 / _S5]])

#: ⟨(2, 0)|0⟩ of the squeezed vacuum, from the a₁†² term of exp(-a†ᵀρa†).
SVS_AMPLITUDE_20 = NORM_MAGNITUDE * (-math.sqrt(2) * 7 / 22)

#: ln M is purely imaginary in the pattern D⁻¹(ln M)D real for this phase.
LOG_M_PATTERN: CArray = np.diag([1, 1j, 1, -1j])


def hamiltonian() -> BilinearHamiltonian:
    return BilinearHamiltonian.from_matrices(XI, ETA)


def spec_text() -> str:
    """The example as a JSON spec document."""
    meta = SpecMeta(name="two-mode example", description="ξ = [[45, 7i], [-7i, 45]], η = [[36, 16i], [16i, 36]]")
    return serialize_spec(hamiltonian(), meta)
