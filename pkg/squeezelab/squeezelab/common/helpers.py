"""Small helpers shared by the numerical modules and the CLI."""

from collections.abc import Callable, Sequence
from typing import TypeVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from squeezelab.settings.custom_types import JSONType

F = TypeVar("F", bound=Callable[..., object])

CArray = NDArray[np.complex128]
RArray = NDArray[np.float64]


def make_registry_decorator(registry: dict[str, F]) -> Callable[[str], Callable[[F], F]]:
    """
    Return a decorator factory that registers functions into a given mapping.

    The returned decorator takes a string key and, when applied to a function,
    stores that function in the provided registry under the specified name.
    The CLI uses this to collect its subcommands.

    Parameters
    ----------
    registry : dict[str, F]
        A dictionary that will collect functions keyed by the names supplied
        to the generated decorator.

    Returns
    -------
    Callable[[str], Callable[[F], F]]
        A decorator factory. Calling it with a name returns a decorator that
        registers a function under that name.
    """
    def register(name: str) -> Callable[[F], F]:
        def decorator(fn: F) -> F:
            if name in registry:
                raise ValueError(f"'{name}' is already registered.")
            registry[name] = fn
            return fn
        return decorator
    return register

#---------- Linear-algebra shorthands ----------

def dagger(a: CArray) -> CArray:
    """Conjugate transpose."""
    return a.conj().T


def symmetrize(a: CArray) -> CArray:
    """Return (A + A^T) / 2."""
    return (a + a.T) / 2


def max_abs(a: ArrayLike) -> float:
    """Max-norm of an array; 0 for an empty one."""
    arr = np.asarray(a)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def k_metric(n_modes: int) -> RArray:
    """The metric K = diag(I, -I) of size 2N."""
    return np.diag(np.concatenate([np.ones(n_modes), -np.ones(n_modes)]))


def as_complex_vector(values: ArrayLike | None, n_modes: int, name: str) -> CArray:
    """
    Coerce ``values`` to a complex vector of length ``n_modes``.

    ``None`` gives the zero vector.

    Raises:
        ValueError: If the length does not match.
    """
    if values is None:
        return np.zeros(n_modes, dtype=np.complex128)
    vec = np.asarray(values, dtype=np.complex128).reshape(-1)
    if vec.shape != (n_modes,):
        raise ValueError(f"{name} must have {n_modes} entries, got {vec.size}.")
    return vec

#---------- [re, im] encoding ----------

def to_pair(z: complex) -> JSONType:
    """Encode one complex number as [re, im]."""
    return [float(z.real), float(z.imag)]


def vector_to_pairs(vec: ArrayLike) -> JSONType:
    """Encode a complex vector as a list of [re, im] pairs."""
    return [to_pair(complex(z)) for z in np.asarray(vec).reshape(-1)]


def matrix_to_pairs(mat: ArrayLike) -> JSONType:
    """Encode a complex matrix as nested lists of [re, im] pairs."""
    return [vector_to_pairs(row) for row in np.atleast_2d(np.asarray(mat))]


def pairs_to_array(pairs: Sequence[object]) -> CArray:
    """
    Decode nested [re, im] pairs into a complex array.

    The innermost axis must have length 2.

    Raises:
        ValueError: If the innermost axis is not a pair.
    """
    raw = np.asarray(pairs, dtype=np.float64)
    if raw.ndim == 0 or raw.shape[-1] != 2:
        raise ValueError(f"expected [re, im] pairs, got an array of shape {raw.shape}.")
    return raw[..., 0] + 1j * raw[..., 1]


def parse_complex_list(text: str) -> list[complex]:
    """
    Parse a comma-separated list of Python complex literals.

    ``"0.5, 0.1+0.2j"`` gives ``[(0.5+0j), (0.1+0.2j)]``.

    Raises:
        ValueError: If an entry is not a complex literal.
    """
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError("empty list")
    try:
        return [complex(item.replace(" ", "")) for item in items]
    except ValueError as exc:
        raise ValueError(f"cannot parse {text!r} as a list of complex numbers") from exc


def parse_index_list(text: str) -> list[int]:
    """
    Parse a comma-separated list of non-negative integers.

    Raises:
        ValueError: If an entry is not a non-negative integer.
    """
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError("empty list")
    values = [int(item) for item in items]
    if any(v < 0 for v in values):
        raise ValueError(f"occupation numbers must be non-negative, got {text!r}")
    return values


def degenerate_groups(values: ArrayLike, rtol: float) -> list[list[int]]:
    """
    Group consecutive indices of a sorted array whose neighbours agree.

    Two neighbours belong to the same group when they differ by at most
    ``rtol * max(1, max|values|)``.
    """
    arr = np.asarray(values, dtype=np.float64)
    tol = rtol * max(1.0, max_abs(arr))
    groups: list[list[int]] = []
    for i in range(arr.size):
        if groups and abs(arr[i] - arr[groups[-1][-1]]) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups
