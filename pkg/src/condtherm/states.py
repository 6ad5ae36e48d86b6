"""Gibbs states, conditional thermal states and entropy functionals.

A conditional thermal state (CTS) for Hamiltonian ``H`` and pointer basis
``{|psi_k>}`` is the mixture ``sum_k p_k |psi_k><psi_k|`` with
``p_k = exp(-beta <psi_k|H|psi_k>) / Z_beta``. Choosing the eigenbasis of
``H`` recovers the Gibbs state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, PreconditionError
from .linalg import (
    EigenDecomposition,
    State,
    as_eig,
    check_hermitian,
    check_unitary,
    eig_hermitian,
)

SUPPORT_TOL = 1e-12
# eigenvalues recovered from a dense matrix below this (relative) size are round-off
MATRIX_NULL_RTOL = 1e-14


def check_basis(basis, name: str = "pointer basis") -> np.ndarray:
    return check_unitary(basis, name)


def _check_dims(h: np.ndarray, basis: np.ndarray) -> None:
    if h.shape != basis.shape:
        raise PreconditionError(f"dimension mismatch: H is {h.shape}, basis is {basis.shape}")


def diag_energies(h, basis) -> np.ndarray:
    """Pointer-basis energies ``<psi_k|H|psi_k>`` (columns of ``basis``)."""
    h = check_hermitian(h, "H")
    basis = check_basis(basis)
    _check_dims(h, basis)
    return np.einsum("ik,ij,jk->k", basis.conj(), h, basis).real


def log_partition(beta: float, energies) -> float:
    """Overflow-safe ``log sum_k exp(-beta e_k)``.

    Energies are sorted first so that any permutation of the same levels
    gives a bit-identical result.
    """
    if not np.isfinite(beta):
        raise DomainError(f"beta must be finite, got {beta}")
    e = np.sort(np.asarray(energies, dtype=float))
    if beta == 0.0:
        return float(np.log(e.size))
    return float(logsumexp(-beta * e))


def log_weights(beta: float, energies) -> np.ndarray:
    e = np.asarray(energies, dtype=float)
    return -beta * e - log_partition(beta, e)


def thermal_probabilities(beta: float, energies) -> np.ndarray:
    return np.exp(log_weights(beta, energies))


@dataclass(frozen=True)
class ConditionalThermalState:
    beta: float
    basis: np.ndarray
    diag_energies: np.ndarray
    probs: np.ndarray
    log_z: float

    @property
    def dim(self) -> int:
        return self.probs.shape[0]

    @cached_property
    def spectrum(self) -> EigenDecomposition:
        return EigenDecomposition(self.probs, self.basis)

    @cached_property
    def density(self) -> np.ndarray:
        return self.spectrum.reconstruct()

    def mean_energy(self) -> float:
        return float(np.dot(self.probs, self.diag_energies))


def cts_from_energies(beta: float, basis: np.ndarray, energies: np.ndarray) -> ConditionalThermalState:
    log_z = log_partition(beta, energies)
    probs = np.exp(-beta * energies - log_z)
    return ConditionalThermalState(float(beta), basis, energies, probs, log_z)


def cts(h, basis, beta: float) -> ConditionalThermalState:
    """Conditional thermal state of ``h`` in the pointer ``basis`` at ``beta``."""
    if not np.isfinite(beta):
        raise DomainError(f"beta must be finite, got {beta}")
    basis = check_basis(basis)
    return cts_from_energies(beta, basis, diag_energies(h, basis))


def gibbs_spectrum(h, beta: float) -> EigenDecomposition:
    """Gibbs state ``exp(-beta H) / Z`` in spectral form."""
    eig = eig_hermitian(h)
    return EigenDecomposition(thermal_probabilities(beta, eig.eigenvalues), eig.eigenvectors)


def gibbs(h, beta: float) -> np.ndarray:
    return gibbs_spectrum(h, beta).reconstruct()


@dataclass(frozen=True)
class SeparableCTS:
    """Classically correlated extension ``sum_k p_k |psi_k><psi_k| (x) |phi_k><phi_k|``."""

    state: ConditionalThermalState
    ancilla_basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.state.dim ** 2

    @cached_property
    def spectrum(self) -> EigenDecomposition:
        # complete product basis |psi_m> (x) |phi_k>; weight p_k on m == k, zero elsewhere
        d = self.state.dim
        vecs = np.einsum("im,jk->ijmk", self.state.basis, self.ancilla_basis).reshape(d * d, d * d)
        weights = np.einsum("mk,k->mk", np.eye(d), self.state.probs).reshape(d * d)
        return EigenDecomposition(weights, vecs)

    @cached_property
    def density(self) -> np.ndarray:
        return self.spectrum.reconstruct()


def separable_cts(h, basis, beta: float, ancilla_basis=None) -> SeparableCTS:
    state = cts(h, basis, beta)
    if ancilla_basis is None:
        ancilla_basis = np.eye(state.dim, dtype=complex)
    ancilla_basis = check_basis(ancilla_basis, "ancilla basis")
    if ancilla_basis.shape[0] != state.dim:
        raise PreconditionError("ancilla basis dimension must match the system dimension")
    return SeparableCTS(state, ancilla_basis)


def _xlogx(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    pos = p > 0.0
    out[pos] = p[pos] * np.log(p[pos])
    return out


def von_neumann_entropy(rho: State) -> float:
    """``-Tr rho ln rho`` in nats, with ``0 ln 0 = 0``."""
    w = np.clip(as_eig(rho).eigenvalues, 0.0, None)
    return float(max(-np.sum(_xlogx(w)), 0.0))


def relative_entropy(rho: State, sigma: State) -> float:
    """Umegaki relative entropy ``Tr rho (ln rho - ln sigma)``.

    Raises :class:`DomainError` when the support of ``rho`` is not contained
    in that of ``sigma`` (the divergence is infinite).
    """
    a = as_eig(rho)
    b = as_eig(sigma)
    if a.dim != b.dim:
        raise PreconditionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    p = np.clip(a.eigenvalues, 0.0, None)
    q = np.clip(b.eigenvalues, 0.0, None)
    if not isinstance(sigma, EigenDecomposition):
        q = np.where(q > MATRIX_NULL_RTOL * q.max(), q, 0.0)
    overlap = np.abs(a.eigenvectors.conj().T @ b.eigenvectors) ** 2
    # weight that rho puts on each eigenvector of sigma
    mass = p @ overlap
    support = q > 0.0
    if np.any(mass[~support] > SUPPORT_TOL):
        raise DomainError("support of rho is not contained in the support of sigma")
    cross = float(np.dot(mass[support], np.log(q[support])))
    return float(max(np.sum(_xlogx(p)) - cross, 0.0))


def classical_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    return float(-np.sum(_xlogx(np.clip(p, 0.0, None))))
