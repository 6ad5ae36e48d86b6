"""Seeded property suites over random instances.

Each suite draws ``trials`` instances; instance ``t`` has dimension
``dims[t % len(dims)]`` and its own PRNG stream ``(seed, t)``, so any failing
case can be rebuilt from ``(seed, t)`` alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import asymmetry, metrology, process, states
from .ensembles import haar_unitary, random_hamiltonian, rng_for
from .linalg import eig_hermitian, expectation, partial_trace_second, trace_norm

BETAS = (0.2, 1.0, 5.0)


@dataclass
class PropertyResult:
    name: str
    tolerance: float
    trials: int = 0
    failures: int = 0
    max_residual: float = 0.0
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.trials > 0 and self.failures == 0

    def record(self, residual: float, context: str) -> None:
        residual = float(residual)
        ok = residual <= self.tolerance
        self.trials += 1
        if not math.isnan(residual):
            self.max_residual = max(self.max_residual, residual)
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = f"{context} residual={residual:.3e}"


def instance(seed: int, t: int, dims) -> tuple[int, np.ndarray, np.ndarray]:
    d = dims[t % len(dims)]
    rng = rng_for(seed, t)
    return d, random_hamiltonian(rng, d), haar_unitary(rng, d)


def constrained_perturbation(rng, energies: np.ndarray) -> np.ndarray:
    """Random direction orthogonal to ``(1, ..., 1)`` and to ``energies``."""
    a = np.vstack([np.ones_like(energies), energies])
    _, s, vt = np.linalg.svd(a)
    rank = int(np.sum(s > 1e-12 * s[0]))
    null = vt[rank:]
    if null.shape[0] == 0:
        return np.zeros_like(energies)
    return rng.standard_normal(null.shape[0]) @ null


def max_entropy_trials(h, basis, beta: float, rng, n: int = 100) -> list[float]:
    """Entropy excess of ``n`` constraint-preserving perturbations over the CTS.

    Every returned value should be ``<= 0`` up to round-off.
    """
    state = states.cts(h, basis, beta)
    s0 = states.classical_entropy(state.probs)
    out = []
    for _ in range(n):
        delta = constrained_perturbation(rng, state.diag_energies)
        scale = np.max(np.abs(delta))
        if scale > 0:
            # step that keeps every weight strictly positive
            delta *= rng.uniform(0.05, 0.95) * np.min(state.probs) / scale
        out.append(states.classical_entropy(state.probs + delta) - s0)
    return out


def states_suite(seed: int, trials: int, dims) -> list[PropertyResult]:
    gibbs_lim = PropertyResult("cts_eigenbasis_is_gibbs", 1e-10)
    ptrace = PropertyResult("separable_partial_trace", 1e-10)
    zbound = PropertyResult("partition_bound_Z_le_Zeq", 1e-12)
    entropy_id = PropertyResult("cts_entropy_identity", 1e-10)
    maxent = PropertyResult("max_entropy", 1e-12)
    for t in range(trials):
        d, h, v = instance(seed, t, dims)
        eig = eig_hermitian(h)
        for b in BETAS:
            ctx = f"seed={seed} trial={t} d={d} beta={b}"
            gibbs_lim.record(np.max(np.abs(states.cts(h, eig.eigenvectors, b).density - states.gibbs(h, b))), ctx)
            sep = states.separable_cts(h, v, b, haar_unitary(rng_for(seed, t, 1), d))
            ptrace.record(np.max(np.abs(partial_trace_second(sep.density, d, d) - sep.state.density)), ctx)
            lz = states.log_partition(b, sep.state.diag_energies)
            lz_eq = states.log_partition(b, eig.eigenvalues)
            zbound.record(max(lz - lz_eq, 0.0), ctx)
            st = sep.state
            entropy_id.record(abs(states.von_neumann_entropy(st.spectrum)
                                  - (b * expectation(st.spectrum, h) + st.log_z)), ctx)
            excess = max_entropy_trials(h, v, b, rng_for(seed, t, 2), n=20)
            maxent.record(max(max(excess), 0.0), ctx)
    return [gibbs_lim, ptrace, zbound, entropy_id, maxent]


def metrology_suite(seed: int, trials: int, dims) -> list[PropertyResult]:
    closed = PropertyResult("qfi_closed_fidelity_route", 1e-5)
    matrix = PropertyResult("qfi_matrix_fidelity_route", 1e-4)
    crb = PropertyResult("crb_identity_var_Mopt", 1e-10)
    mean_id = PropertyResult("mopt_mean_is_energy", 1e-10)
    gibbs_zero = PropertyResult("gibbs_limit_delta_qfi", 1e-10)
    curvature = PropertyResult("delta_qfi_curvature", 1e-5)
    for t in range(trials):
        d, h, v = instance(seed, t, dims)
        eig = eig_hermitian(h)
        for b in BETAS:
            ctx = f"seed={seed} trial={t} d={d} beta={b}"
            st = states.cts(h, v, b)
            qfi = metrology.qfi_analytic(st).value
            closed.record(abs(qfi - metrology.qfi_fidelity_closed(st).value), ctx)
            matrix.record(abs(qfi - metrology.qfi_fidelity_matrix(h, v, b).value), ctx)
            m = metrology.optimal_measurement(st)
            crb.record(abs(asymmetry.variance(st.spectrum, m) - qfi), ctx)
            mean_id.record(abs(expectation(st.spectrum, m) - st.mean_energy()), ctx)
            gibbs_zero.record(abs(metrology.qfi_difference(h, eig.eigenvectors, b)), ctx)
            curvature.record(abs(metrology.qfi_difference(h, v, b) - metrology.qfi_difference_fd(h, v, b)), ctx)
    qubit = PropertyResult("qubit_closed_form_vs_matrix", 1e-10)
    for theta in np.linspace(0.0, np.pi, 13):
        h, v = metrology.qubit_instance(1.0, theta)
        for b in np.linspace(0.0, 10.0, 21):
            qubit.record(abs(metrology.qubit_delta_qfi(1.0, theta, b) - metrology.qfi_difference(h, v, b)),
                         f"theta={theta} beta={b}")
    return [closed, matrix, crb, mean_id, gibbs_zero, curvature, qubit]


def asymmetry_suite(seed: int, trials: int, dims) -> list[PropertyResult]:
    identity = PropertyResult("qfi_equals_extended_covariance", 1e-9)
    alpha_free = PropertyResult("extended_skew_alpha_independent", 1e-9)
    bound = PropertyResult("qfi_le_local_covariance", 1e-9)
    monotone = PropertyResult("skew_monotone_under_extension", 1e-9)
    saturation = PropertyResult("eigenbasis_saturates_bound", 1e-10)
    strict = PropertyResult("generic_basis_strict_bound", 0.0)
    gibbs_skew = PropertyResult("gibbs_skew_zero", 1e-9)
    for t in range(trials):
        d, h, v = instance(seed, t, dims)
        eig = eig_hermitian(h)
        for b in BETAS:
            ctx = f"seed={seed} trial={t} d={d} beta={b}"
            ext = []
            for alpha in asymmetry.ALPHA_GRID:
                actx = f"{ctx} alpha={alpha}"
                r = asymmetry.skew_bound_report(h, v, b, alpha)
                ext.append(r.skew_extended)
                identity.record(abs(r.qfi - (r.variance - r.skew_extended)), actx)
                bound.record(max(r.qfi - r.cov_local, 0.0), actx)
                monotone.record(max(r.skew_local - r.skew_extended, 0.0), actx)
                strict.record(max(1e-10 - r.bound_gap, 0.0), actx)
                g = asymmetry.skew_bound_report(h, eig.eigenvectors, b, alpha)
                saturation.record(abs(g.bound_gap), actx)
                gibbs_skew.record(abs(asymmetry.skew_information(states.gibbs_spectrum(h, b), h, alpha)), actx)
            alpha_free.record(max(ext) - min(ext), ctx)
    return [identity, alpha_free, bound, monotone, saturation, strict, gibbs_skew]


def random_process(seed: int, t: int, dims, beta: float) -> process.ProcessSpec:
    d = dims[t % len(dims)]
    rng = rng_for(seed, t, int(round(beta * 1000)))
    return process.ProcessSpec(random_hamiltonian(rng, d), random_hamiltonian(rng, d), haar_unitary(rng, d), beta)


def process_suite(seed: int, trials: int, dims) -> list[PropertyResult]:
    dissipation = PropertyResult("dissipative_work_relative_entropy", 1e-9)
    bound = PropertyResult("dissipation_lower_bound", 1e-9)
    triangle = PropertyResult("triangle_equality", 1e-9)
    heat = PropertyResult("j_divergence_quantum_heat", 1e-9)
    exact_vs_cts = PropertyResult("exact_vs_cts_work_identity", 1e-9)
    passive = PropertyResult("ergotropic_passive_energy", 1e-10)
    adiabatic = PropertyResult("adiabatic_family_zero_heat", 1e-9)
    equality = PropertyResult("equality_implies_same_state", 1e-7)
    for t in range(trials):
        for b in BETAS:
            spec = random_process(seed, t, dims, b)
            ctx = f"seed={seed} trial={t} d={spec.dim} beta={b}"
            r = process.analyze(spec, check=False)
            res = r.residuals
            dissipation.record(abs(res["dissipation_residual"]), ctx)
            bound.record(max(-res["bound_gap"], 0.0), ctx)
            triangle.record(abs(res["triangle_residual"]), ctx)
            heat.record(abs(res["heat_residual"]), ctx)

            lz_cts = process.final_cts(spec).log_z
            lz0 = states.log_partition(b, eig_hermitian(spec.h0).eigenvalues)
            exact_vs_cts.record(abs(r.S_exact_vs_cts - (b * r.work + lz_cts - lz0)), ctx)

            final = process.final_cts(spec)
            _, gamma = process.ergotropy(final.density, spec.h0, spec.utau)
            e0 = eig_hermitian(spec.h0).eigenvalues
            lhs = np.real(np.trace(gamma @ final.density @ gamma.conj().T @ spec.h0))
            passive.record(abs(lhs - np.dot(e0, final.probs)), ctx)

            ad = process.adiabatic_spec(spec.h0, spec.utau, b)
            ra = process.analyze(ad, check=False)
            adiabatic.record(max(abs(ra.J), abs(ra.work_dissipative), abs(ra.S_cts_vs_gibbs),
                                 abs(ra.S_exact_vs_gibbs)), ctx)
            gap = ra.S_exact_vs_gibbs - ra.S_cts_vs_gibbs
            if gap < 1e-9:
                equality.record(trace_norm(process.evolve_exact(ad) - process.final_cts(ad).density), ctx)
    return [dissipation, bound, triangle, heat, exact_vs_cts, passive, adiabatic, equality]


def run_all(seed: int = 42, trials: int = 100, dims=(2, 3, 4, 5, 6)) -> list[PropertyResult]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    dims = tuple(dims)
    return (states_suite(seed, trials, dims) + metrology_suite(seed, trials, dims)
            + asymmetry_suite(seed, trials, dims) + process_suite(seed, trials, dims))
