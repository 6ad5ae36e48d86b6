"""Conditional thermal states for quantum thermometry and work protocols."""

from .errors import CondThermError, ConsistencyError, DomainError, PreconditionError
from .linalg import EigenDecomposition, eig_hermitian, fidelity, matrix_function, trace_norm
from .states import (
    ConditionalThermalState,
    SeparableCTS,
    cts,
    diag_energies,
    gibbs,
    log_partition,
    relative_entropy,
    separable_cts,
    von_neumann_entropy,
)
from .metrology import (
    QfiResult,
    optimal_measurement,
    outperformance_criterion,
    qfi_analytic,
    qfi_difference,
    qfi_fidelity_closed,
    qfi_fidelity_matrix,
    qubit_delta_qfi,
)
from .asymmetry import SkewReport, skew_bound_report, skew_information, variance
from .process import ProcessSpec, ThermoReport, analyze, ergotropy, evolve_exact, final_cts, work_exact
from .estimation import EstimationRun, crb_experiment, estimate_beta, sample_outcomes

__version__ = "0.1.0"

__all__ = [
    "CondThermError",
    "ConditionalThermalState",
    "ConsistencyError",
    "DomainError",
    "EigenDecomposition",
    "EstimationRun",
    "PreconditionError",
    "ProcessSpec",
    "QfiResult",
    "SeparableCTS",
    "SkewReport",
    "ThermoReport",
    "analyze",
    "crb_experiment",
    "cts",
    "diag_energies",
    "eig_hermitian",
    "ergotropy",
    "estimate_beta",
    "evolve_exact",
    "fidelity",
    "final_cts",
    "gibbs",
    "log_partition",
    "matrix_function",
    "optimal_measurement",
    "outperformance_criterion",
    "qfi_analytic",
    "qfi_difference",
    "qfi_fidelity_closed",
    "qfi_fidelity_matrix",
    "qubit_delta_qfi",
    "relative_entropy",
    "sample_outcomes",
    "separable_cts",
    "skew_bound_report",
    "skew_information",
    "trace_norm",
    "variance",
    "von_neumann_entropy",
    "work_exact",
]
