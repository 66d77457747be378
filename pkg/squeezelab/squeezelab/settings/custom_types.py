from typing import Literal, TypedDict, Union

from typing_extensions import NotRequired

#------------ JSON Type Definitions ------------

# Everything a report carries must be serialisable to JSON. Complex numbers
# travel as [re, im] pairs.

JSONScalar = Union[str, int, float, bool, None]
JSONType = Union[JSONScalar, list["JSONType"], dict[str, "JSONType"]]

# -------------------- Report sections --------------------

class CheckDict(TypedDict):
    name: str
    passed: bool
    value: JSONType
    tolerance: float
    expected: NotRequired[JSONType]


class ReportDict(TypedDict):
    schema_version: int
    command: str
    input: NotRequired[dict[str, JSONType]]
    sections: dict[str, JSONType]
    checks: list[CheckDict]
    passed: bool


# -------------------- State kinds --------------------

StateKindName = Literal[
    "fock",           # |n>
    "coherent",       # |alpha>
    "coherent-fock",  # D(alpha)|n>
    "svs",            # U|0>
    "scs",            # U|alpha>
    "sfs",            # U|n>
    "scfs",           # U D(alpha)|n>
]

SpecialCase = Literal["MilburnMUS", "OneModeLike", "HermitianM", "Generic"]

# -------------------- Exceptions --------------------


class SqueezeLabError(RuntimeError):
    """Base class for all squeezelab errors."""


class SpecInputError(SqueezeLabError):
    """Base class for errors caused by the caller's input."""


class SpecSyntaxError(SpecInputError):
    """Raised when a spec file cannot be decoded or does not match the schema."""


class ShapeError(SpecInputError):
    """Raised when matrix shapes are non-square or disagree with n_modes."""


class HermiticityError(SpecInputError):
    """Raised when xi is not Hermitian to tolerance."""

    def __init__(self, residual: float, tolerance: float):
        super().__init__(f"xi is not Hermitian: residual {residual:.3e} > {tolerance:.3e}")
        self.residual = residual


class SymmetryError(SpecInputError):
    """Raised when eta (or another matrix that must be) is not symmetric to tolerance."""

    def __init__(self, residual: float, tolerance: float, name: str = "eta"):
        super().__init__(f"{name} is not symmetric: residual {residual:.3e} > {tolerance:.3e}")
        self.residual = residual


class NotPositiveDefinite(SpecInputError):
    """Raised when [[xi, eta], [eta*, xi*]] has a non-positive eigenvalue."""

    def __init__(self, min_eigenvalue: float):
        super().__init__(
            f"block matrix is not positive definite: smallest eigenvalue {min_eigenvalue:.6g}"
        )
        self.min_eigenvalue = min_eigenvalue


class DimensionMismatch(SpecInputError):
    """Raised when two operands describe different numbers of modes."""


class NotOneMode(SpecInputError):
    """Raised when a one-mode reduction is requested for N != 1."""


class NotTwoMode(SpecInputError):
    """Raised when a two-mode test is requested for N != 2."""


class StateParameterError(SpecInputError):
    """Raised when a state kind and its (alpha, n) parameters disagree."""


class DegreeTooLarge(SpecInputError):
    """Raised when a multi-index derivative exceeds the degree guard."""

    def __init__(self, degree: int, limit: int):
        super().__init__(f"requested degree {degree} exceeds the limit {limit}")
        self.degree = degree


class SingularQuadratureFrame(SpecInputError):
    """Raised when u - v is singular, so no coordinate wavefunction exists."""

    def __init__(self, det: float):
        super().__init__(f"|det(u - v)| = {det:.3e} is singular")
        self.det = det


class BranchCutError(SqueezeLabError):
    """
    Raised when M has an eigenvalue on or near the negative real axis.

    The principal logarithm is then undefined; the disentangled form of the
    squeeze operator is still available.
    """

    def __init__(self, eigenvalue: complex):
        super().__init__(f"eigenvalue {eigenvalue:.6g} of M lies on the branch cut of ln")
        self.eigenvalue = eigenvalue


class NotAntiHermitian(SqueezeLabError):
    """Raised when a generator handed to the oracle is not anti-Hermitian."""

    def __init__(self, residual: float):
        super().__init__(f"generator is not anti-Hermitian: residual {residual:.3e}")
        self.residual = residual


# -------------------- Resource exceptions --------------------


class ResourceLimitError(SqueezeLabError):
    """Base class for truncation and size limits of the oracle."""


class SpaceTooLarge(ResourceLimitError):
    """Raised when the truncated space or an amplitude table exceeds its size guard."""

    def __init__(self, dim: int, limit: int, what: str = "truncated space dimension"):
        super().__init__(f"{what} {dim} exceeds the limit {limit}")
        self.dim = dim


class TailMassTooLarge(ResourceLimitError):
    """Raised when a state has too much weight above the truncation cutoff."""

    def __init__(self, tail_mass: float, cutoff: int, suggested_cutoff: int):
        super().__init__(
            f"tail mass {tail_mass:.3e} above cutoff {cutoff}; "
            f"try --cutoff {suggested_cutoff}"
        )
        self.tail_mass = tail_mass
        self.cutoff = cutoff
        self.suggested_cutoff = suggested_cutoff
