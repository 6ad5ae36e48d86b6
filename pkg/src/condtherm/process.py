"""Work, dissipation and quantum heat for a unitary protocol.

A system starts in the Gibbs state of ``H0`` at inverse temperature ``beta``
and evolves under ``U`` to a final Hamiltonian ``Htau``. Besides the exact
final state ``U rho0 U^dagger`` this module builds the final conditional
thermal state: ``Htau``-weighted mixture of the evolved ``H0`` eigenvectors.

``analyze`` gathers every scalar into a :class:`ThermoReport` and checks the
identities tying them together before returning:

* ``beta * W_dis == S(rho || rho_eq)``
* ``S(rho || rho_eq) >= S(rho_cts || rho_eq)``
* ``S(rho || rho_cts) + S(rho_cts || rho_eq) == S(rho || rho_eq)``
* ``J == beta * (W - ergotropy - dE)``

The relative entropies are computed from spectra; the right-hand sides come
from traces of dense matrices, so each check compares two code paths.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import ConsistencyError, DomainError, PreconditionError
from .linalg import (
    EigenDecomposition,
    check_hermitian,
    check_unitary,
    eig_hermitian,
    expectation,
)
from .states import (
    ConditionalThermalState,
    cts_from_energies,
    gibbs_spectrum,
    log_partition,
    relative_entropy,
    thermal_probabilities,
)

IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class ProcessSpec:
    h0: np.ndarray
    htau: np.ndarray
    utau: np.ndarray
    beta: float

    def __post_init__(self):
        h0 = check_hermitian(self.h0, "h0")
        htau = check_hermitian(self.htau, "htau")
        utau = check_unitary(self.utau, "utau")
        if not (h0.shape == htau.shape == utau.shape):
            raise PreconditionError(
                f"dimension mismatch: h0 {h0.shape}, htau {htau.shape}, utau {utau.shape}")
        if not np.isfinite(self.beta):
            raise DomainError(f"beta must be finite, got {self.beta}")
        object.__setattr__(self, "h0", h0)
        object.__setattr__(self, "htau", htau)
        object.__setattr__(self, "utau", utau)
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def dim(self) -> int:
        return self.h0.shape[0]


def h0_eigenbasis(spec: ProcessSpec, h0_basis=None) -> EigenDecomposition:
    """Eigenpairs ``(E_k, |E_k>)`` of ``H0`` fixing the label ``k`` everywhere.

    Defaults to ascending eigenvalues. ``h0_basis`` overrides the eigenvectors
    (e.g. to relabel a degenerate level); it must diagonalize ``H0``.
    """
    if h0_basis is None:
        return eig_hermitian(spec.h0)
    v = check_unitary(h0_basis, "h0_basis")
    m = v.conj().T @ spec.h0 @ v
    off = m - np.diag(np.diagonal(m))
    if np.max(np.abs(off)) > 1e-9 * (1.0 + np.max(np.abs(spec.h0))):
        raise PreconditionError("h0_basis does not diagonalize h0")
    return EigenDecomposition(np.diagonal(m).real.copy(), v)


def exact_spectrum(spec: ProcessSpec, h0_basis=None) -> EigenDecomposition:
    eig = h0_eigenbasis(spec, h0_basis)
    return EigenDecomposition(thermal_probabilities(spec.beta, eig.eigenvalues),
                              spec.utau @ eig.eigenvectors)


def evolve_exact(spec: ProcessSpec) -> np.ndarray:
    """``U rho0 U^dagger`` with ``rho0`` the Gibbs state of ``H0``."""
    rho0 = gibbs_spectrum(spec.h0, spec.beta).reconstruct()
    u = spec.utau
    rho = u @ rho0 @ u.conj().T
    return 0.5 * (rho + rho.conj().T)


def final_cts(spec: ProcessSpec, h0_basis=None) -> ConditionalThermalState:
    """CTS of ``Htau`` in the pointer basis ``{U|E_k>}``."""
    basis = spec.utau @ h0_eigenbasis(spec, h0_basis).eigenvectors
    energies = np.einsum("ik,ij,jk->k", basis.conj(), spec.htau, basis).real
    return cts_from_energies(spec.beta, basis, energies)


def work_exact(spec: ProcessSpec) -> float:
    """Average work ``Tr[rho(tau) Htau] - Tr[rho0 H0]``."""
    rho0 = gibbs_spectrum(spec.h0, spec.beta)
    return float(np.real(np.trace(evolve_exact(spec) @ spec.htau))) - expectation(rho0, spec.h0)


def equilibrium_free_energy_difference(spec: ProcessSpec) -> float:
    if spec.beta <= 0.0:
        raise DomainError("free energy difference needs beta > 0")
    lz0 = log_partition(spec.beta, eig_hermitian(spec.h0).eigenvalues)
    lzt = log_partition(spec.beta, eig_hermitian(spec.htau).eigenvalues)
    return -(lzt - lz0) / spec.beta


def ergotropic_transformation(h0_vectors: np.ndarray, utau: np.ndarray) -> np.ndarray:
    """``Gamma = sum_k |E_k><E_k| U^dagger``."""
    proj = sum(np.outer(h0_vectors[:, k], h0_vectors[:, k].conj()) for k in range(h0_vectors.shape[1]))
    return proj @ utau.conj().T


def ergotropy(rho, h0, utau, h0_basis=None) -> tuple[float, np.ndarray]:
    """Ergotropy of ``rho`` relative to ``H0`` under the transformation ``Gamma``.

    Returns ``(Tr[rho H0] - Tr[Gamma rho Gamma^dagger H0], Gamma)``.
    """
    h0 = check_hermitian(h0, "h0")
    utau = check_unitary(utau, "utau")
    rho = np.asarray(rho, dtype=complex)
    if not (rho.shape == h0.shape == utau.shape):
        raise PreconditionError("rho, h0 and utau must share one dimension")
    vecs = eig_hermitian(h0).eigenvectors if h0_basis is None else check_unitary(h0_basis, "h0_basis")
    gamma = ergotropic_transformation(vecs, utau)
    passive = gamma @ rho @ gamma.conj().T
    value = float(np.real(np.trace(rho @ h0)) - np.real(np.trace(passive @ h0)))
    return value, gamma


@dataclass(frozen=True)
class ThermoReport:
    beta: float
    work: float
    delta_F_eq: float
    work_dissipative: float
    S_exact_vs_gibbs: float
    S_cts_vs_gibbs: float
    S_exact_vs_cts: float
    S_cts_vs_exact: float
    J: float
    ergotropy_W0: float
    delta_E_cts: float
    quantum_heat: float

    @property
    def residuals(self) -> dict[str, float]:
        b = self.beta
        return {
            "dissipation_residual": b * self.work_dissipative - self.S_exact_vs_gibbs,
            "bound_gap": self.S_exact_vs_gibbs - self.S_cts_vs_gibbs,
            "triangle_residual": self.S_exact_vs_cts + self.S_cts_vs_gibbs - self.S_exact_vs_gibbs,
            "heat_residual": self.J - b * (self.work - self.ergotropy_W0 - self.delta_E_cts),
        }

    def as_dict(self, with_residuals: bool = True) -> dict[str, float]:
        out = asdict(self)
        if with_residuals:
            out.update(self.residuals)
        return out

    @classmethod
    def columns(cls, with_residuals: bool = True) -> list[str]:
        names = [f.name for f in fields(cls)]
        if with_residuals:
            names += ["dissipation_residual", "bound_gap", "triangle_residual", "heat_residual"]
        return names


def check_report(report: ThermoReport, tol: float = IDENTITY_TOL) -> None:
    r = report.residuals
    if abs(report.work_dissipative - (report.work - report.delta_F_eq)) > 1e-10 * (1.0 + abs(report.work)):
        raise ConsistencyError("dissipative work differs from W - dF")
    if abs(r["dissipation_residual"]) > tol:
        raise ConsistencyError(f"beta W_dis != S(rho||rho_eq): residual {r['dissipation_residual']:.3e}")
    if r["bound_gap"] < -tol:
        raise ConsistencyError(f"S(rho||rho_eq) < S(rho_cts||rho_eq) by {-r['bound_gap']:.3e}")
    if abs(r["triangle_residual"]) > tol:
        raise ConsistencyError(f"triangle equality residual {r['triangle_residual']:.3e}")
    if abs(r["heat_residual"]) > tol:
        raise ConsistencyError(f"J-divergence / quantum heat residual {r['heat_residual']:.3e}")


def analyze(spec: ProcessSpec, h0_basis=None, check: bool = True) -> ThermoReport:
    """Full thermodynamic accounting of one protocol; requires ``beta > 0``."""
    if spec.beta <= 0.0:
        raise DomainError("process analysis needs beta > 0 (quantum heat is J / beta)")
    b = spec.beta
    exact = exact_spectrum(spec, h0_basis)
    final = final_cts(spec, h0_basis)
    eq_tau = gibbs_spectrum(spec.htau, b)

    work = work_exact(spec)
    dF = equilibrium_free_energy_difference(spec)
    s_exact_gibbs = relative_entropy(exact, eq_tau)
    s_cts_gibbs = relative_entropy(final.spectrum, eq_tau)
    s_exact_cts = relative_entropy(exact, final.spectrum)
    s_cts_exact = relative_entropy(final.spectrum, exact)
    J = s_exact_cts + s_cts_exact

    rho_cts = final.density
    vecs = h0_eigenbasis(spec, h0_basis).eigenvectors
    w0, _ = ergotropy(rho_cts, spec.h0, spec.utau, vecs)
    dE = float(np.real(np.trace(rho_cts @ (spec.htau - spec.h0))))

    report = ThermoReport(
        beta=b,
        work=work,
        delta_F_eq=dF,
        work_dissipative=work - dF,
        S_exact_vs_gibbs=s_exact_gibbs,
        S_cts_vs_gibbs=s_cts_gibbs,
        S_exact_vs_cts=s_exact_cts,
        S_cts_vs_exact=s_cts_exact,
        J=J,
        ergotropy_W0=w0,
        delta_E_cts=dE,
        quantum_heat=J / b,
    )
    if check:
        check_report(report)
    return report


def adiabatic_spec(h0, v, beta: float) -> ProcessSpec:
    """Protocol ``(H0, V H0 V^dagger, V)``: exact, conditional and Gibbs final states coincide."""
    h0 = np.asarray(h0, dtype=complex)
    htau = v @ h0 @ v.conj().T
    return ProcessSpec(h0, 0.5 * (htau + htau.conj().T), v, beta)
