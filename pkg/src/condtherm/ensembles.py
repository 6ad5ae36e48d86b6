"""Seeded random Hamiltonians and unitaries for property suites.

All generators draw from :class:`numpy.random.Generator` backed by PCG64
(``numpy.random.default_rng``), so a given seed reproduces the same instance
on every platform numpy supports.

* ``random_hamiltonian``: Gaussian unitary ensemble, the Hermitian part of a
  complex Ginibre matrix whose entries have unit variance.
* ``haar_unitary``: QR of a complex Ginibre matrix with the phases of
  ``diag(R)`` moved into ``Q`` (Mezzadri's construction).
"""

from __future__ import annotations

import numpy as np


def rng_for(seed, *stream: int) -> np.random.Generator:
    """Independent generator for ``(seed, *stream)``, schedule-independent."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))


def ginibre(rng: np.random.Generator, d: int) -> np.ndarray:
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)


def random_hamiltonian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    g = ginibre(rng, d)
    return scale * 0.5 * (g + g.conj().T)


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(rng, d))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def qubit_pointer_basis(theta: float) -> np.ndarray:
    """Columns ``exp(i theta sigma_x / 2)|0>`` and ``exp(i theta sigma_x / 2)|1>``."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
