"""Multimode squeezing of bosonic modes.

Bilinear Hamiltonians are diagonalized into Bogoliubov transformations
(`squeezelab.bogoliubov`), whose squeeze operators and states have closed forms
(`squeezelab.squeezeop`, `squeezelab.states`). `squeezelab.oracle` checks those
closed forms on a truncated Fock space.
"""

from contextlib import suppress
from importlib.metadata import PackageNotFoundError, version

with suppress(PackageNotFoundError):
    __version__ = version(__name__)
