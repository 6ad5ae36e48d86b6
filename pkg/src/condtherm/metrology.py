"""Quantum Fisher information for temperature estimation.

For a conditional thermal state the Fisher information about ``beta`` is the
curvature of ``ln Z_beta``, i.e. the variance of the pointer-basis energies
under the state's own weights. That exact value (``qfi_analytic``) is the
primary result; two fidelity-based finite-difference routes are kept as
independent checks of it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .ensembles import SIGMA_Z, qubit_pointer_basis
from .linalg import eig_hermitian, fidelity
from .states import (
    ConditionalThermalState,
    cts,
    log_partition,
    thermal_probabilities,
)

ANALYTIC = "analytic"
FIDELITY_CLOSED_FORM = "fidelity_closed_form"
FIDELITY_MATRIX_FD = "fidelity_matrix_fd"

DEFAULT_EPS = 1e-3
MIN_CLOSED_EPS = 1e-6


@dataclass(frozen=True)
class QfiResult:
    value: float
    route: str
    beta: float


def weighted_variance(weights, values) -> float:
    """Two-pass variance ``sum w (x - mean)**2``; never negative."""
    w = np.asarray(weights, dtype=float)
    x = np.asarray(values, dtype=float)
    mean = np.dot(w, x)
    return float(np.dot(w, (x - mean) ** 2))


def qfi_analytic(state: ConditionalThermalState) -> QfiResult:
    return QfiResult(weighted_variance(state.probs, state.diag_energies), ANALYTIC, state.beta)


def qfi_gibbs(h, beta: float) -> float:
    """Fisher information of the Gibbs state: energy variance at ``beta``."""
    w = eig_hermitian(h).eigenvalues
    return weighted_variance(thermal_probabilities(beta, w), w)


def _log_fidelity_ratio(energies: np.ndarray, beta: float, eps: float) -> float:
    # ln F(rho_beta, rho_{beta+eps}) = 2 ln Z_{beta+eps/2} - ln Z_beta - ln Z_{beta+eps}
    lz = lambda b: log_partition(b, energies)  # noqa: E731
    return 2.0 * lz(beta + 0.5 * eps) - lz(beta) - lz(beta + eps)


def fidelity_closed_form(state: ConditionalThermalState, eps: float) -> float:
    """Fidelity between CTSs at ``beta`` and ``beta + eps`` from partition functions."""
    return math.exp(_log_fidelity_ratio(state.diag_energies, state.beta, eps))


def _closed_fd(energies: np.ndarray, beta: float, eps: float) -> float:
    # expm1 keeps F - 1 accurate; F(beta, beta) = 1 exactly
    fp = math.expm1(_log_fidelity_ratio(energies, beta, eps))
    fm = math.expm1(_log_fidelity_ratio(energies, beta, -eps))
    return -2.0 * (fp + fm) / eps**2


def qfi_fidelity_closed(state: ConditionalThermalState, eps: float = DEFAULT_EPS,
                        richardson: bool = False) -> QfiResult:
    """``-2 d^2F/d eps^2`` by central differences of the partition-function ratio.

    Truncation error is ``O(eps**2)``; ``richardson=True`` combines steps
    ``eps`` and ``eps/2`` to cancel the leading term.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if eps < MIN_CLOSED_EPS:
        warnings.warn(f"eps={eps:g} is below {MIN_CLOSED_EPS:g}; cancellation dominates", RuntimeWarning)
    e, b = state.diag_energies, state.beta
    value = _closed_fd(e, b, eps)
    if richardson:
        value = (4.0 * _closed_fd(e, b, 0.5 * eps) - value) / 3.0
    return QfiResult(value, FIDELITY_CLOSED_FORM, b)


def qfi_fidelity_matrix(h, basis, beta: float, eps: float = DEFAULT_EPS) -> QfiResult:
    """Same second difference, with every fidelity computed from dense matrices."""
    if not 1e-4 <= eps <= 1e-2:
        raise ValueError(f"eps must lie in [1e-4, 1e-2], got {eps}")
    rho = cts(h, basis, beta).density
    f_plus = fidelity(rho, cts(h, basis, beta + eps).density)
    f_minus = fidelity(rho, cts(h, basis, beta - eps).density)
    return QfiResult(-2.0 * (f_plus - 2.0 + f_minus) / eps**2, FIDELITY_MATRIX_FD, float(beta))


def optimal_measurement(state: ConditionalThermalState) -> np.ndarray:
    """Pointer-diagonal energy observable ``sum_k e_k |psi_k><psi_k|``."""
    v = state.basis
    m = (v * state.diag_energies) @ v.conj().T
    return 0.5 * (m + m.conj().T)


def qfi_difference(h, basis, beta: float) -> float:
    """Fisher information of the CTS minus that of the Gibbs state."""
    return qfi_analytic(cts(h, basis, beta)).value - qfi_gibbs(h, beta)


def log_partition_ratio(h, basis, beta: float) -> float:
    """``ln(Z_beta / Z_beta^eq)``; minus the relative entropy of CTS to Gibbs."""
    e_cts = cts(h, basis, beta).diag_energies
    e_eq = eig_hermitian(h).eigenvalues
    return log_partition(beta, e_cts) - log_partition(beta, e_eq)


def _second_difference(f, x: float, h: float) -> float:
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / h**2


def qfi_difference_fd(h, basis, beta: float, step: float = DEFAULT_EPS) -> float:
    """Curvature of ``ln(Z_beta / Z_beta^eq)`` by central differences."""
    e_cts = cts(h, basis, beta).diag_energies
    e_eq = eig_hermitian(h).eigenvalues
    ratio = lambda b: log_partition(b, e_cts) - log_partition(b, e_eq)  # noqa: E731
    return _second_difference(ratio, beta, step)


def outperformance_criterion(h, basis, beta0: float, step: float = DEFAULT_EPS) -> tuple[bool, float]:
    """Whether the CTS beats the Gibbs state at ``beta0``.

    Returns ``(curvature < 0, curvature)`` where ``curvature`` is the second
    derivative of the relative entropy ``S(rho_beta || rho_beta^eq)`` in
    ``beta``. Curvatures inside the round-off floor of the difference
    quotient count as zero, so exactly-Gibbs inputs report ``False``.
    """
    lo, hi = 1e-4 * (1 + abs(beta0)), 1e-2 * (1 + abs(beta0))
    if not lo <= step <= hi:
        raise ValueError(f"step must lie in [{lo:g}, {hi:g}], got {step}")
    e_cts = cts(h, basis, beta0).diag_energies
    e_eq = eig_hermitian(h).eigenvalues
    rel = lambda b: log_partition(b, e_eq) - log_partition(b, e_cts)  # noqa: E731
    curvature = _second_difference(rel, beta0, step)
    scale = abs(log_partition(beta0, e_eq)) + abs(log_partition(beta0, e_cts)) + 1.0
    noise = 16.0 * np.finfo(float).eps * scale / step**2
    return bool(curvature < -noise), float(curvature)


def qubit_delta_qfi(omega: float, theta: float, beta: float) -> float:
    """Closed-form QFI difference for ``H = omega sigma_z``, basis rotated by ``theta`` about x.

    Evaluates ``omega^2 (-1 + cos^2 t / cosh^2(b w cos t) + tanh^2(b w))`` in
    the equivalent form ``omega^2 (cos^2 t sech^2(b w cos t) - sech^2(b w))``,
    which avoids the ``-1 + tanh^2`` cancellation at low temperature.
    """
    c = math.cos(theta)
    return omega**2 * (c**2 * _sech(beta * omega * c) ** 2 - _sech(beta * omega) ** 2)


def _sech(x: float) -> float:
    x = abs(x)
    if x > 350.0:
        return 0.0
    return 1.0 / math.cosh(x)


def qubit_instance(omega: float, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """``(H, basis)`` for the rotated single-qubit example."""
    return omega * SIGMA_Z, qubit_pointer_basis(theta)


def qubit_qfi_cts(omega: float, theta: float, beta: float) -> float:
    """``d^2/d beta^2 ln 2cosh(beta omega cos theta)``."""
    c = math.cos(theta)
    return (omega * c) ** 2 * _sech(beta * omega * c) ** 2

