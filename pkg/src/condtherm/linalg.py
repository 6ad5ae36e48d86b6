"""Dense Hermitian linear algebra used by every other module.

Density matrices, Hamiltonians and observables are plain ``numpy`` arrays.
Wherever the spectral decomposition of a state is known analytically (Gibbs
states, conditional thermal states) it is carried around as an
:class:`EigenDecomposition` instead of a matrix, so that tiny weights such as
``exp(-35)`` keep full relative precision. Every function taking a state
accepts either form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, PreconditionError

HERMITIAN_RTOL = 1e-12
UNITARY_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral form ``A = V diag(w) V^dagger``.

    ``eig_hermitian`` returns eigenvalues in ascending order. Decompositions
    assembled from known spectra (e.g. a state written in its pointer basis)
    keep the order they were built in.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        a = (v * self.eigenvalues) @ v.conj().T
        return 0.5 * (a + a.conj().T)

    def apply(self, f) -> np.ndarray:
        """Return ``V f(w) V^dagger`` for a vectorised real function ``f``."""
        v = self.eigenvectors
        a = (v * f(self.eigenvalues)) @ v.conj().T
        return 0.5 * (a + a.conj().T)


State = Union[np.ndarray, EigenDecomposition]


def as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise PreconditionError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    return a


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a, rtol: float = HERMITIAN_RTOL) -> bool:
    a = as_square(a)
    return hermiticity_defect(a) <= rtol * (1.0 + float(np.max(np.abs(a))))


def check_hermitian(a, name: str = "matrix") -> np.ndarray:
    a = as_square(a, name)
    scale = 1.0 + float(np.max(np.abs(a)))
    defect = hermiticity_defect(a)
    if defect > HERMITIAN_RTOL * scale:
        raise PreconditionError(f"{name} is not Hermitian (max |A - A^dagger| = {defect:.3e})")
    return a


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def check_unitary(u, name: str = "matrix", tol: float = UNITARY_TOL) -> np.ndarray:
    u = as_square(u, name)
    defect = unitarity_defect(u)
    if defect > tol:
        raise PreconditionError(f"{name} is not unitary (max |U^dagger U - 1| = {defect:.3e})")
    return u


def eig_hermitian(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Backed by LAPACK ``heevd`` through :func:`numpy.linalg.eigh`. Within a
    degenerate eigenspace the eigenvectors are not unique; every quantity in
    this package is a spectral function and does not depend on that choice.
    """
    a = check_hermitian(a)
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    return EigenDecomposition(w, v)


def as_eig(state: State) -> EigenDecomposition:
    if isinstance(state, EigenDecomposition):
        return state
    return eig_hermitian(state)


def as_matrix(state: State) -> np.ndarray:
    if isinstance(state, EigenDecomposition):
        return state.reconstruct()
    return as_square(state)


def _clamp_psd(w: np.ndarray, what: str) -> np.ndarray:
    if np.any(w < -PSD_TOL):
        raise DomainError(f"{what} requires a positive semidefinite argument, min eigenvalue {w.min():.3e}")
    return np.where(w < 0.0, 0.0, w)


def nonneg_power(w: np.ndarray, alpha: float) -> np.ndarray:
    # 0**alpha := 0 for every alpha, including alpha <= 0 on the kernel
    out = np.zeros_like(w)
    pos = w > 0.0
    out[pos] = w[pos] ** alpha
    return out


def matrix_function(a: State, f: str, alpha: float | None = None) -> np.ndarray:
    """Evaluate ``f(A)`` for ``f`` in ``{"exp", "log", "sqrt", "power"}``.

    Eigenvalues in ``[-1e-10, 0)`` count as zero for ``sqrt``/``power``; more
    negative ones raise :class:`DomainError`. ``log`` requires a strictly
    positive spectrum.
    """
    eig = as_eig(a)
    w = eig.eigenvalues
    if f == "exp":
        return eig.apply(np.exp)
    if f == "log":
        if np.any(w <= PSD_TOL):
            raise DomainError(f"matrix log undefined: eigenvalue {w.min():.3e} outside support")
        return eig.apply(np.log)
    if f == "sqrt":
        return eig.apply(lambda x: np.sqrt(_clamp_psd(x, "sqrt")))
    if f == "power":
        if alpha is None:
            raise ValueError("power requires alpha")
        return eig.apply(lambda x: nonneg_power(_clamp_psd(x, "power"), alpha))
    raise ValueError(f"unknown matrix function {f!r}")


def trace_norm(a) -> float:
    """Sum of singular values, ``Tr sqrt(A^dagger A)``."""
    a = as_square(a)
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def check_density(rho: State, name: str = "rho") -> EigenDecomposition:
    eig = as_eig(rho)
    w = eig.eigenvalues
    if np.any(w < -PSD_TOL):
        raise PreconditionError(f"{name} is not positive semidefinite (min eigenvalue {w.min():.3e})")
    tr = float(np.sum(w))
    if abs(tr - 1.0) > TRACE_TOL:
        raise PreconditionError(f"{name} does not have unit trace (trace = {tr!r})")
    return eig


def fidelity(rho: State, sigma: State) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``.

    Evaluated as the squared trace norm of ``sqrt(rho) sqrt(sigma)``; singular
    values of that product keep small contributions accurate, which the
    finite-difference Fisher information relies on.
    """
    a = check_density(rho, "rho")
    b = check_density(sigma, "sigma")
    if a.dim != b.dim:
        raise PreconditionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    f = trace_norm(matrix_function(a, "sqrt") @ matrix_function(b, "sqrt")) ** 2
    return float(min(max(f, 0.0), 1.0))


def expectation(state: State, op: np.ndarray) -> float:
    """``Tr[rho op]`` for Hermitian ``op``."""
    if isinstance(state, EigenDecomposition):
        v = state.eigenvectors
        diag = np.einsum("ij,ik,kj->j", v.conj(), op, v).real
        return float(np.dot(state.eigenvalues, diag))
    return float(np.real(np.trace(state @ op)))


def partial_trace_second(rho: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Trace out the second factor of a ``d1*d2`` bipartite operator."""
    return np.einsum("ijkj->ik", rho.reshape(d1, d2, d1, d2))
