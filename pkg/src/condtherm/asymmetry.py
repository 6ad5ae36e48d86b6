"""Wigner-Yanase-Dyson skew information and the covariance bound on the QFI.

The Fisher information of a CTS equals the generalized covariance of
``H (x) 1`` in the classically correlated extension, and is bounded above by
the covariance of ``H`` in the CTS itself. ``skew_bound_report`` evaluates
every term twice: once with explicit ``d^2 x d^2`` matrices and once with
the reduced sum ``sum_k p_k e_k^2``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, PreconditionError
from .linalg import EigenDecomposition, State, as_eig, as_square, expectation, nonneg_power
from .metrology import qfi_analytic
from .states import separable_cts

DEFAULT_MAX_DIM = 6
ALPHA_GRID = (0.1, 0.25, 0.5, 0.75, 0.9)
ROUTE_TOL = 1e-9


def max_explicit_dim() -> int:
    return int(os.environ.get("CTS_MAX_DIM", DEFAULT_MAX_DIM))


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in the open interval (0, 1), got {alpha}")


def _powered_overlap(eig: EigenDecomposition, h: np.ndarray, alpha: float) -> float:
    # Tr[rho^a H rho^(1-a) H] = sum_ij p_i^a p_j^(1-a) |<i|H|j>|^2 ; 0**x := 0
    p = np.clip(eig.eigenvalues, 0.0, None)
    v = eig.eigenvectors
    hv = v.conj().T @ h @ v
    pa, pb = nonneg_power(p, alpha), nonneg_power(p, 1.0 - alpha)
    return float(np.einsum("i,ij,j->", pa, np.abs(hv) ** 2, pb))


def skew_information(rho: State, h, alpha: float) -> float:
    """``I_alpha(rho, H) = Tr rho H^2 - Tr rho^alpha H rho^(1-alpha) H``.

    Pass ``rho`` in spectral form when its weights are known exactly: powers
    of tiny eigenvalues recovered from a dense matrix are ill-conditioned for
    small ``alpha``.
    """
    _check_alpha(alpha)
    h = as_square(h, "H")
    eig = as_eig(rho)
    if eig.dim != h.shape[0]:
        raise PreconditionError("state and operator dimensions differ")
    return expectation(eig, h @ h) - _powered_overlap(eig, h, alpha)


def variance(rho: State, h) -> float:
    """``Tr rho H^2 - (Tr rho H)^2``."""
    h = as_square(h, "H")
    if isinstance(rho, EigenDecomposition):
        if rho.dim != h.shape[0]:
            raise PreconditionError("state and operator dimensions differ")
    elif np.shape(rho) != h.shape:
        raise PreconditionError("state and operator dimensions differ")
    return expectation(rho, h @ h) - expectation(rho, h) ** 2


def covariance(rho: State, h, alpha: float) -> float:
    """Generalized covariance: variance minus skew information."""
    return variance(rho, h) - skew_information(rho, h, alpha)


@dataclass(frozen=True)
class SkewReport:
    alpha: float
    skew_local: float
    skew_extended: float
    variance: float
    cov_local: float
    qfi: float
    explicit_route: bool

    @property
    def bound_gap(self) -> float:
        """``cov_local - qfi``; non-negative, zero for Gibbs states."""
        return self.cov_local - self.qfi


def skew_bound_report(h, basis, beta: float, alpha: float, ancilla_basis=None,
                      max_dim: int | None = None) -> SkewReport:
    _check_alpha(alpha)
    h = as_square(h, "H")
    ext = separable_cts(h, basis, beta, ancilla_basis)
    state = ext.state
    d = state.dim

    local = state.spectrum
    var = variance(local, h)
    skew_local = skew_information(local, h, alpha)
    qfi = qfi_analytic(state).value

    # reduced formula: the extended overlap term is sum_k p_k e_k^2 for every alpha
    overlap_reduced = float(np.dot(state.probs, state.diag_energies**2))
    skew_ext_reduced = expectation(local, h @ h) - overlap_reduced

    explicit = d <= (max_explicit_dim() if max_dim is None else max_dim)
    skew_ext = skew_ext_reduced
    if explicit:
        h12 = np.kron(h, np.eye(d))
        skew_ext = skew_information(ext.spectrum, h12, alpha)
        var_ext = variance(ext.spectrum, h12)
        if abs(skew_ext - skew_ext_reduced) > ROUTE_TOL * (1.0 + abs(skew_ext)):
            raise ConsistencyError(
                f"extended skew information: explicit {skew_ext!r} vs reduced {skew_ext_reduced!r}")
        if abs(var_ext - var) > ROUTE_TOL * (1.0 + abs(var)):
            raise ConsistencyError(f"extended variance {var_ext!r} differs from local {var!r}")

    report = SkewReport(alpha, skew_local, skew_ext, var, var - skew_local, qfi, explicit)
    if abs(qfi - (var - skew_ext)) > ROUTE_TOL * (1.0 + abs(qfi)):
        raise ConsistencyError(f"QFI {qfi!r} differs from extended covariance {var - skew_ext!r}")
    if qfi > report.cov_local + ROUTE_TOL:
        raise ConsistencyError(f"QFI {qfi!r} exceeds local covariance {report.cov_local!r}")
    return report
