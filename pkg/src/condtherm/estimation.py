"""Monte Carlo check that the pointer-energy measurement saturates the Cramer-Rao bound.

Each repeat draws ``N`` outcomes of the optimal measurement on a CTS and
estimates ``beta`` by matching the sample mean energy to the model mean
``<e>_beta``. For this exponential family moment matching is the maximum
likelihood estimator, so ``N * mse`` tends to ``1 / QFI``.

Outcomes are drawn by inverse-CDF lookup of PCG64 uniforms; repeat ``r`` of a
run seeded with ``seed`` uses the stream ``SeedSequence(seed, spawn_key=(r,))``
so results do not depend on execution order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .ensembles import rng_for
from .errors import DomainError
from .metrology import qfi_analytic
from .states import ConditionalThermalState, cts, thermal_probabilities

logger = logging.getLogger(__name__)

BETA_TOL = 1e-10
DEFAULT_BETA_SPAN = 50.0
MIN_QFI = 1e-12


def sample_outcomes(state: ConditionalThermalState, n: int, seed) -> np.ndarray:
    """``n`` i.i.d. outcome indices ``k`` drawn with probabilities ``p_k``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _draw(state.probs, n, np.random.default_rng(seed))


def _draw(probs: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    return np.minimum(idx, probs.size - 1)


def mean_energy(beta: float, energies: np.ndarray) -> float:
    """``<e>_beta = -d ln Z / d beta``."""
    return float(np.dot(thermal_probabilities(beta, energies), energies))


def default_bounds(energies) -> tuple[float, float]:
    spread = float(np.ptp(energies))
    return -DEFAULT_BETA_SPAN / spread, DEFAULT_BETA_SPAN / spread


def beta_from_mean(energies, target: float, beta_bounds=None) -> tuple[float, bool]:
    """Solve ``<e>_beta == target`` by bisection; returns ``(beta, clamped)``.

    ``<e>_beta`` is strictly decreasing (its derivative is ``-QFI``), so the
    root is unique. Targets outside the bracketed range are clamped to the
    nearer bound and reported with ``clamped=True``.
    """
    e = np.asarray(energies, dtype=float)
    if np.ptp(e) <= 0.0:
        raise DomainError("constant pointer energies carry no information about beta")
    lo, hi = default_bounds(e) if beta_bounds is None else map(float, beta_bounds)
    if not lo < hi:
        raise ValueError(f"empty beta bracket [{lo}, {hi}]")
    if target >= mean_energy(lo, e):
        return lo, True
    if target <= mean_energy(hi, e):
        return hi, True
    while hi - lo > BETA_TOL:
        mid = 0.5 * (lo + hi)
        if mean_energy(mid, e) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), False


def estimate_beta(energies, outcomes, beta_bounds=None) -> float:
    """Moment-matching estimate of ``beta`` from measured outcome indices."""
    e = np.asarray(energies, dtype=float)
    outcomes = np.asarray(outcomes)
    if outcomes.size == 0:
        raise ValueError("no outcomes")
    beta, clamped = beta_from_mean(e, float(np.mean(e[outcomes])), beta_bounds)
    if clamped:
        logger.warning("sample mean outside the bracketed range; estimate clamped to %g", beta)
    return beta


@dataclass(frozen=True)
class EstimationRun:
    true_beta: float
    n_samples: int
    n_repeats: int
    seed: int
    qfi: float
    beta_hat_mean: float
    mse: float
    crb: float
    ratio: float
    n_clamped: int

    CSV_COLUMNS = ("seed", "n_samples", "beta", "qfi", "mse", "crb", "ratio")

    def csv_row(self) -> dict:
        return {"seed": self.seed, "n_samples": self.n_samples, "beta": self.true_beta,
                "qfi": self.qfi, "mse": self.mse, "crb": self.crb, "ratio": self.ratio}


def crb_experiment(h, basis, beta: float, n_samples: int, n_repeats: int, seed: int,
                   beta_bounds=None) -> EstimationRun:
    state = cts(h, basis, beta)
    qfi = qfi_analytic(state).value
    if qfi <= MIN_QFI:
        raise DomainError(f"Fisher information {qfi:.3e} is zero; beta is not estimable")
    if n_samples < 1 or n_repeats < 1:
        raise ValueError("n_samples and n_repeats must be positive")
    e = state.diag_energies
    estimates = np.empty(n_repeats)
    clamped = 0
    for r in range(n_repeats):
        outcomes = _draw(state.probs, n_samples, rng_for(seed, r))
        estimates[r], flag = beta_from_mean(e, float(np.mean(e[outcomes])), beta_bounds)
        clamped += flag
    mse = float(np.mean((estimates - beta) ** 2))
    crb = 1.0 / (n_samples * qfi)
    return EstimationRun(float(beta), n_samples, n_repeats, seed, qfi,
                         float(np.mean(estimates)), mse, crb, mse / crb, clamped)
