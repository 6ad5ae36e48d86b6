import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from condtherm.ensembles import SIGMA_Z, haar_unitary, qubit_pointer_basis, random_hamiltonian
from condtherm.linalg import eig_hermitian, expectation
from condtherm.asymmetry import variance
from condtherm.metrology import (
    fidelity_closed_form,
    log_partition_ratio,
    optimal_measurement,
    outperformance_criterion,
    qfi_analytic,
    qfi_difference,
    qfi_difference_fd,
    qfi_fidelity_closed,
    qfi_fidelity_matrix,
    qfi_gibbs,
    qubit_delta_qfi,
    qubit_instance,
    qubit_qfi_cts,
    weighted_variance,
)
from condtherm.linalg import fidelity
from condtherm.states import cts

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([2, 3, 4, 6])
betas = st.sampled_from([0.2, 1.0, 5.0])


def _instance(seed, d):
    rng = np.random.default_rng(seed)
    return random_hamiltonian(rng, d), haar_unitary(rng, d)


def test_qfi_two_level_oracle():
    # d^2/dbeta^2 ln 2cosh(beta) = sech^2(beta)
    s = cts(SIGMA_Z, np.eye(2), 1.0)
    assert qfi_analytic(s).value == pytest.approx(1 / math.cosh(1.0) ** 2, abs=1e-15)
    assert qfi_gibbs(SIGMA_Z, 1.0) == pytest.approx(1 / math.cosh(1.0) ** 2, abs=1e-15)


def test_qfi_rotated_qubit_oracle():
    for theta in (0.3, math.pi / 4, 1.2):
        h, v = qubit_instance(1.0, theta)
        c = math.cos(theta)
        assert qfi_analytic(cts(h, v, 0.8)).value == pytest.approx(c**2 / math.cosh(0.8 * c) ** 2, abs=1e-14)
        assert qubit_qfi_cts(1.0, theta, 0.8) == pytest.approx(c**2 / math.cosh(0.8 * c) ** 2, abs=1e-15)


def test_weighted_variance_nonnegative_for_constant():
    assert weighted_variance([0.2, 0.3, 0.5], [7.0, 7.0, 7.0]) == 0.0


def test_qubit_delta_qfi_at_infinite_temperature():
    # omega^2 (cos^2 theta - 1) = -omega^2 sin^2 theta
    assert qubit_delta_qfi(1.0, math.pi / 4, 0.0) == pytest.approx(-0.5, abs=1e-15)
    assert qubit_delta_qfi(2.0, math.pi / 2, 0.0) == pytest.approx(-4.0, abs=1e-14)


def test_qubit_delta_qfi_textbook_form():
    # compare with the form omega^2(-1 + cos^2/cosh^2 + tanh^2) where it is well conditioned
    for theta in (0.2, 0.9, 2.0):
        for beta in (0.1, 0.5, 1.5):
            c = math.cos(theta)
            oracle = -1 + c**2 / math.cosh(beta * c) ** 2 + math.tanh(beta) ** 2
            assert qubit_delta_qfi(1.0, theta, beta) == pytest.approx(oracle, abs=1e-14)


def test_qubit_delta_qfi_extreme_beta_is_finite():
    assert qubit_delta_qfi(1.0, 0.7, 1e4) == 0.0
    assert math.isfinite(qubit_delta_qfi(1.0, 0.7, 500.0))


@settings(max_examples=60, deadline=None)
@given(theta=st.floats(-7, 7), beta=st.floats(0, 20), omega=st.floats(0.1, 3))
def test_qubit_closed_form_matches_pipeline(theta, beta, omega):
    h, v = qubit_instance(omega, theta)
    assert qubit_delta_qfi(omega, theta, beta) == pytest.approx(qfi_difference(h, v, beta), abs=1e-10)


def test_closed_fidelity_eps_warning(rng):
    s = cts(random_hamiltonian(rng, 3), haar_unitary(rng, 3), 1.0)
    with pytest.warns(RuntimeWarning):
        qfi_fidelity_closed(s, eps=1e-7)
    with pytest.raises(ValueError):
        qfi_fidelity_closed(s, eps=0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        qfi_fidelity_closed(s)


def test_matrix_route_eps_range(rng):
    h, v = random_hamiltonian(rng, 3), haar_unitary(rng, 3)
    for eps in (1e-5, 0.05):
        with pytest.raises(ValueError):
            qfi_fidelity_matrix(h, v, 1.0, eps)


def test_closed_form_fidelity_matches_matrix_fidelity(rng):
    h, v = random_hamiltonian(rng, 4), haar_unitary(rng, 4)
    s = cts(h, v, 1.0)
    f = fidelity(s.density, cts(h, v, 1.3).density)
    assert fidelity_closed_form(s, 0.3) == pytest.approx(f, abs=1e-12)


def test_richardson_improves_accuracy(rng):
    s = cts(random_hamiltonian(rng, 4), haar_unitary(rng, 4), 1.0)
    exact = qfi_analytic(s).value
    plain = abs(qfi_fidelity_closed(s, 1e-2).value - exact)
    rich = abs(qfi_fidelity_closed(s, 1e-2, richardson=True).value - exact)
    assert rich < plain


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=dims, beta=betas)
def test_qfi_routes_agree(seed, d, beta):
    h, v = _instance(seed, d)
    s = cts(h, v, beta)
    exact = qfi_analytic(s).value
    assert abs(qfi_fidelity_closed(s).value - exact) <= 1e-5
    assert abs(qfi_fidelity_matrix(h, v, beta).value - exact) <= 1e-4


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=dims, beta=betas)
def test_optimal_measurement_identities(seed, d, beta):
    h, v = _instance(seed, d)
    s = cts(h, v, beta)
    m = optimal_measurement(s)
    assert abs(variance(s.spectrum, m) - qfi_analytic(s).value) <= 1e-10
    assert abs(expectation(s.spectrum, m) - s.mean_energy()) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=dims, beta=betas)
def test_qfi_difference_is_curvature(seed, d, beta):
    h, v = _instance(seed, d)
    assert abs(qfi_difference(h, v, beta) - qfi_difference_fd(h, v, beta)) <= 1e-5


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=dims, beta=betas)
def test_gibbs_limit(seed, d, beta):
    h, _ = _instance(seed, d)
    vecs = eig_hermitian(h).eigenvectors
    assert abs(qfi_difference(h, vecs, beta)) <= 1e-10
    assert abs(log_partition_ratio(h, vecs, beta)) <= 1e-12
    flag, _ = outperformance_criterion(h, vecs, beta)
    assert flag is False


def test_criterion_sign_matches_delta_qfi():
    # rotated qubit: negative at high temperature, positive past the crossover
    h, v = qubit_instance(1.0, math.pi / 4)
    flag_hot, curv_hot = outperformance_criterion(h, v, 0.5)
    assert flag_hot is False and curv_hot > 0
    flag_cold, curv_cold = outperformance_criterion(h, v, 3.0)
    assert flag_cold is True
    assert curv_cold == pytest.approx(-qubit_delta_qfi(1.0, math.pi / 4, 3.0), abs=1e-5)


def test_criterion_step_validation():
    h, v = qubit_instance(1.0, 0.5)
    with pytest.raises(ValueError):
        outperformance_criterion(h, v, 1.0, step=1.0)


def test_pointer_basis_period():
    # theta -> theta + 2 pi flips the basis sign only
    np.testing.assert_allclose(qubit_pointer_basis(0.3 + 2 * math.pi), -qubit_pointer_basis(0.3), atol=1e-14)
