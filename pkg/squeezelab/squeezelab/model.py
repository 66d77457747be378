"""
Hamiltonian input model.

A :class:`BilinearHamiltonian` holds the three coefficient arrays of

    H = [a†ᵀ aᵀ] [[ξ, η], [η*, ξ*]] [a; a†] + κᵀa + κ†a†

and nothing else. It is immutable once built. Files use the
:class:`HamiltonianSpec` schema, with complex entries written as ``[re, im]``
pairs, in either a JSON or a TOML surface encoding::

    n_modes = 1
    xi = [[[2.0, 0.0]]]
    eta = [[[0.5, 0.0]]]

:func:`validate` reports every invariant with its residual and never raises;
:func:`ensure_valid` raises the first failure. :func:`parse_spec` goes from
text to a validated Hamiltonian in one step.
"""

from __future__ import annotations

import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Literal

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveInt, ValidationError

from squeezelab.common.helpers import (
    CArray,
    as_complex_vector,
    dagger,
    max_abs,
    pairs_to_array,
)
from squeezelab.settings.custom_types import (
    HermiticityError,
    JSONType,
    NotPositiveDefinite,
    ShapeError,
    SpecSyntaxError,
    SymmetryError,
)
from squeezelab.settings.global_variables import HERMITICITY_RTOL

logger = logging.getLogger(__name__)

SpecFormat = Literal["json", "toml"]


# -------------------- Hamiltonian --------------------


def _frozen(a: CArray) -> CArray:
    out = np.array(a, dtype=np.complex128, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class BilinearHamiltonian:
    """
    Coefficients of a quadratic-plus-linear bosonic Hamiltonian.

    Attributes
    ----------
    n_modes :
        Number of bosonic modes N.
    xi :
        N×N Hermitian coefficient of a†a.
    eta :
        N×N symmetric coefficient of a†a†.
    kappa :
        Length-N coefficient of the linear term κᵀa (zero when undriven).
    """

    n_modes: int
    xi: CArray
    eta: CArray
    kappa: CArray = field(default_factory=lambda: np.zeros(0, dtype=np.complex128))

    def __post_init__(self) -> None:
        object.__setattr__(self, "xi", _frozen(self.xi))
        object.__setattr__(self, "eta", _frozen(self.eta))
        kappa = self.kappa if self.kappa.size else np.zeros(self.n_modes)
        object.__setattr__(self, "kappa", _frozen(kappa))

    @classmethod
    def from_matrices(
        cls,
        xi: object,
        eta: object,
        kappa: object | None = None,
    ) -> BilinearHamiltonian:
        """Build from array-likes, checking only shapes."""
        try:
            xi_arr = np.asarray(xi, dtype=np.complex128)
            eta_arr = np.asarray(eta, dtype=np.complex128)
        except (TypeError, ValueError) as exc:
            raise ShapeError(f"coefficients are not rectangular arrays: {exc}") from exc
        if xi_arr.ndim != 2 or xi_arr.shape[0] != xi_arr.shape[1]:
            raise ShapeError(f"xi must be square, got shape {xi_arr.shape}")
        n = xi_arr.shape[0]
        if n == 0:
            raise ShapeError("at least one mode is required")
        if eta_arr.shape != (n, n):
            raise ShapeError(f"eta must have shape {(n, n)}, got {eta_arr.shape}")
        try:
            kappa_arr = as_complex_vector(kappa, n, "kappa")  # type: ignore[arg-type]
        except ValueError as exc:
            raise ShapeError(str(exc)) from exc
        return cls(n_modes=n, xi=xi_arr, eta=eta_arr, kappa=kappa_arr)

    @property
    def block_matrix(self) -> CArray:
        """The 2N×2N matrix [[ξ, η], [η*, ξ*]]."""
        return np.block([[self.xi, self.eta], [self.eta.conj(), self.xi.conj()]])

    @property
    def is_driven(self) -> bool:
        """True when the linear term is present."""
        return bool(np.any(self.kappa != 0))


# -------------------- File schema --------------------


class SpecMeta(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str | None = None
    description: str | None = None


class HamiltonianSpec(BaseModel):
    """Serialized form of :class:`BilinearHamiltonian`."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    n_modes: PositiveInt
    xi: list[list[tuple[float, float]]]
    eta: list[list[tuple[float, float]]]
    kappa: list[tuple[float, float]] | None = None
    meta: SpecMeta | None = None

    def to_hamiltonian(self) -> BilinearHamiltonian:
        """Decode the [re, im] pairs; raises ShapeError on inconsistent sizes."""
        try:
            xi = pairs_to_array(self.xi)
            eta = pairs_to_array(self.eta)
            kappa = pairs_to_array(self.kappa) if self.kappa else None
        except ValueError as exc:
            raise ShapeError(f"ragged coefficient array: {exc}") from exc
        h = BilinearHamiltonian.from_matrices(xi, eta, kappa)
        if h.n_modes != self.n_modes:
            raise ShapeError(f"n_modes is {self.n_modes} but xi is {h.n_modes}×{h.n_modes}")
        return h

    @classmethod
    def from_hamiltonian(
        cls, h: BilinearHamiltonian, meta: SpecMeta | None = None
    ) -> HamiltonianSpec:
        def pairs(a: CArray) -> list[tuple[float, float]]:
            return [(float(z.real), float(z.imag)) for z in a]

        return cls(
            n_modes=h.n_modes,
            xi=[pairs(row) for row in h.xi],
            eta=[pairs(row) for row in h.eta],
            kappa=pairs(h.kappa),
            meta=meta,
        )


def _decode(text: str, fmt: SpecFormat | None) -> object:
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "toml"
    try:
        if fmt == "json":
            return json.loads(text)
        return tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise SpecSyntaxError(f"malformed {fmt.upper()} spec: {exc}") from exc


def load_spec(text: str, fmt: SpecFormat | None = None) -> HamiltonianSpec:
    """Decode and schema-check a spec document without validating the physics."""
    raw = _decode(text, fmt)
    try:
        return HamiltonianSpec.model_validate(raw)
    except ValidationError as exc:
        raise SpecSyntaxError(f"spec does not match the schema: {exc}") from exc


def parse_spec(text: str, fmt: SpecFormat | None = None) -> BilinearHamiltonian:
    """
    Parse a spec document into a validated Hamiltonian.

    Parameters
    ----------
    text : str
        The document. JSON when ``fmt`` is ``"json"`` or the text starts with
        ``{``, TOML otherwise.
    fmt : {"json", "toml"}, optional
        Force the surface encoding.

    Returns
    -------
    BilinearHamiltonian
        A Hamiltonian that passed every check of :func:`validate`.

    Raises
    ------
    SpecSyntaxError
        Malformed document or schema mismatch.
    ShapeError
        Non-square or inconsistent coefficient arrays.
    HermiticityError, SymmetryError, NotPositiveDefinite
        The corresponding invariant failed.
    """
    h = load_spec(text, fmt).to_hamiltonian()
    ensure_valid(h)
    logger.debug("parsed %d-mode Hamiltonian", h.n_modes)
    return h


def serialize_spec(
    h: BilinearHamiltonian,
    meta: SpecMeta | None = None,
    fmt: Literal["json"] = "json",
) -> str:
    """
    Write ``h`` as a spec document; ``parse_spec`` inverts it bit-exactly.

    Only JSON is written. TOML documents can be read but not produced.
    """
    if fmt != "json":
        raise ValueError(f"cannot write {fmt!r} spec documents")
    spec = HamiltonianSpec.from_hamiltonian(h, meta)
    return json.dumps(spec.model_dump(mode="json", exclude_none=True), indent=2)


# -------------------- Validation --------------------


@dataclass(frozen=True)
class CheckResult:
    """One invariant: its name, outcome, measured residual and the bound applied."""

    name: str
    passed: bool
    residual: float
    tolerance: float

    def to_dict(self) -> dict[str, JSONType]:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.residual,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class ValidationReport:
    """All invariant checks for one Hamiltonian; ``ok`` is their conjunction."""

    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict[str, JSONType]:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def validate(h: BilinearHamiltonian) -> ValidationReport:
    """
    Check Hermiticity of ξ, symmetry of η and positive definiteness.

    Each check is named after the exception :func:`ensure_valid` would raise.
    The positive-definiteness residual is the smallest eigenvalue of the
    symmetrized block matrix; it passes when that eigenvalue exceeds
    1e−12·max(1, max|entry|), so numerically zero modes are rejected too.
    """
    herm_res = max_abs(h.xi - dagger(h.xi))
    herm_tol = HERMITICITY_RTOL * max(1.0, max_abs(h.xi))
    sym_res = max_abs(h.eta - h.eta.T)
    sym_tol = HERMITICITY_RTOL * max(1.0, max_abs(h.eta))

    block = h.block_matrix
    block = (block + dagger(block)) / 2
    min_eig = float(np.linalg.eigvalsh(block)[0])
    pd_tol = HERMITICITY_RTOL * max(1.0, max_abs(block))

    checks = (
        CheckResult("HermiticityError", herm_res <= herm_tol, herm_res, herm_tol),
        CheckResult("SymmetryError", sym_res <= sym_tol, sym_res, sym_tol),
        CheckResult("NotPositiveDefinite", min_eig > pd_tol, min_eig, pd_tol),
    )
    return ValidationReport(checks)


def ensure_valid(h: BilinearHamiltonian) -> ValidationReport:
    """Run :func:`validate` and raise the first failure as its exception."""
    report = validate(h)
    for c in report.failures:
        if c.name == "HermiticityError":
            raise HermiticityError(c.residual, c.tolerance)
        if c.name == "SymmetryError":
            raise SymmetryError(c.residual, c.tolerance)
        if c.name == "NotPositiveDefinite":
            raise NotPositiveDefinite(c.residual)
    return report
