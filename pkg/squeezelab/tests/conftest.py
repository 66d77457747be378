"""Shared fixtures: the two-mode worked example and random valid inputs."""

from collections.abc import Callable

import numpy as np
import pytest
from scipy.linalg import expm

from squeezelab import example_data
from squeezelab.bogoliubov import BTMatrix, DiagonalizationResult, compose_bt, diagonalize
from squeezelab.model import BilinearHamiltonian


@pytest.fixture
def tol():
    """Tolerance for identities that hold to rounding."""
    return 1e-10


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def worked_example() -> BilinearHamiltonian:
    return example_data.hamiltonian()


@pytest.fixture
def worked_result(worked_example) -> DiagonalizationResult:
    return diagonalize(worked_example)


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _near_identity_unitary(rng: np.random.Generator, n: int, angle: float) -> np.ndarray:
    h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (h + h.conj().T) / 2
    return expm(1j * angle * h / max(1.0, np.linalg.norm(h, 2)))


@pytest.fixture
def make_bt(rng) -> Callable[..., BTMatrix]:
    """
    Factory for random BT matrices M_S·M_D·M_T.

    ``angle=None`` draws Haar rotations; a number keeps them within that
    angle of the identity, which keeps M away from the branch cut of ln.
    """

    def factory(n: int, r_max: float = 0.8, angle: float | None = None) -> BTMatrix:
        if angle is None:
            w1, w2 = _haar_unitary(rng, n), _haar_unitary(rng, n)
        else:
            w1, w2 = _near_identity_unitary(rng, n, angle), _near_identity_unitary(rng, n, angle)
        r = rng.uniform(0.05, r_max, size=n)
        squeeze = BTMatrix.diagonal_squeezer(r)
        return compose_bt(BTMatrix.embed(w1), compose_bt(squeeze, BTMatrix.embed(w2)))

    return factory


@pytest.fixture
def make_hamiltonian(rng, make_bt) -> Callable[..., tuple[BilinearHamiltonian, np.ndarray, BTMatrix]]:
    """
    Factory for valid Hamiltonians with a known spectrum.

    Returns the Hamiltonian M†·diag(Ω, Ω)·M, the frequencies Ω (distinct,
    in [1, 3]) and the BT matrix M it was built from.
    """

    def factory(n: int, r_max: float = 0.8, angle: float | None = None, kappa=None):
        bt = make_bt(n, r_max, angle)
        omega = np.sort(rng.uniform(1.0, 3.0, size=n))[::-1]
        m = bt.matrix
        hm = m.conj().T @ np.diag(np.concatenate([omega, omega])) @ m
        xi = hm[:n, :n]
        eta = hm[:n, n:]
        h = BilinearHamiltonian.from_matrices((xi + xi.conj().T) / 2, (eta + eta.T) / 2, kappa)
        return h, omega, bt

    return factory
