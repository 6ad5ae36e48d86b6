import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from condtherm.ensembles import SIGMA_X, SIGMA_Z, ginibre, random_hamiltonian
from condtherm.errors import DomainError, PreconditionError
from condtherm.linalg import (
    EigenDecomposition,
    eig_hermitian,
    fidelity,
    matrix_function,
    partial_trace_second,
    trace_norm,
)

from conftest import random_density

seeds = st.integers(0, 2**32 - 1)
dims = st.sampled_from([1, 2, 3, 4, 6, 9])


def test_eig_identity():
    eig = eig_hermitian(np.eye(2))
    np.testing.assert_allclose(eig.eigenvalues, [1, 1])
    np.testing.assert_allclose(eig.eigenvectors.conj().T @ eig.eigenvectors, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("pauli", [SIGMA_Z, SIGMA_X])
def test_eig_pauli(pauli):
    # characteristic polynomial lambda^2 - 1 for both
    np.testing.assert_allclose(eig_hermitian(pauli).eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_eig_rejects_non_hermitian():
    with pytest.raises(PreconditionError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_eig_deterministic(rng):
    h = random_hamiltonian(rng, 5)
    a, b = eig_hermitian(h), eig_hermitian(h.copy())
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, d=dims)
def test_eig_contract(seed, d):
    h = random_hamiltonian(np.random.default_rng(seed), d, scale=10.0)
    eig = eig_hermitian(h)
    v, w = eig.eigenvectors, eig.eigenvalues
    assert np.linalg.norm(h - (v * w) @ v.conj().T) <= 1e-10 * (1 + np.linalg.norm(h))
    assert np.max(np.abs(v.conj().T @ v - np.eye(d))) <= 1e-10
    assert np.all(np.diff(w) >= 0)


def test_matrix_function_examples():
    np.testing.assert_allclose(matrix_function(np.zeros((2, 2)), "exp"), np.eye(2))
    np.testing.assert_allclose(matrix_function(np.diag([4.0, 9.0]), "sqrt"), np.diag([2.0, 3.0]))
    np.testing.assert_allclose(matrix_function(np.diag([0.5, 0.5]), "power", 0.5),
                               np.diag([np.sqrt(0.5)] * 2))


def test_matrix_function_domains():
    with pytest.raises(DomainError):
        matrix_function(np.diag([1.0, 0.0]), "log")
    with pytest.raises(DomainError):
        matrix_function(np.diag([1.0, -1e-6]), "sqrt")
    # round-off negatives are clamped
    np.testing.assert_allclose(matrix_function(np.diag([1.0, -1e-12]), "sqrt"), np.diag([1.0, 0.0]))


def test_matrix_function_accepts_spectral_form():
    eig = EigenDecomposition(np.array([0.25, 1e-8]), np.eye(2, dtype=complex))
    np.testing.assert_allclose(np.diag(matrix_function(eig, "log")).real, np.log([0.25, 1e-8]))
    # numerically null eigenvalues are outside the log's domain
    with pytest.raises(DomainError):
        matrix_function(EigenDecomposition(np.array([1.0, 1e-13]), np.eye(2)), "log")


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=dims)
def test_sqrt_squares_back(seed, d):
    rng = np.random.default_rng(seed)
    a = random_density(rng, d) * rng.uniform(0.1, 10)
    r = matrix_function(a, "sqrt")
    assert np.max(np.abs(r @ r - a)) <= 1e-9


def test_trace_norm_examples(rng):
    assert trace_norm(np.zeros((3, 3))) == 0.0
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0, abs=1e-15)
    a = ginibre(rng, 3)
    oracle = np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(a.conj().T @ a), 0, None)))
    assert trace_norm(a) == pytest.approx(oracle, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=dims)
def test_trace_norm_subadditive(seed, d):
    rng = np.random.default_rng(seed)
    a, b = ginibre(rng, d), ginibre(rng, d)
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-12


def test_fidelity_examples(rng):
    rho = random_density(rng, 4)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)
    assert fidelity(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(0.0, abs=1e-15)
    p, q = rng.dirichlet(np.ones(5)), rng.dirichlet(np.ones(5))
    bhattacharyya = np.sum(np.sqrt(p * q)) ** 2
    assert fidelity(np.diag(p), np.diag(q)) == pytest.approx(bhattacharyya, abs=1e-12)


def test_fidelity_rejects_non_density():
    with pytest.raises(PreconditionError):
        fidelity(np.eye(2), np.eye(2) / 2)
    with pytest.raises(PreconditionError):
        fidelity(np.diag([1.5, -0.5]), np.eye(2) / 2)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=dims, rank=st.integers(1, 3))
def test_fidelity_symmetric_and_bounded(seed, d, rank):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density(rng, d, min(rank, d)), random_density(rng, d)
    f = fidelity(rho, sigma)
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(fidelity(sigma, rho), abs=1e-9)


def test_fidelity_matches_textbook_form(rng):
    rho, sigma = random_density(rng, 3), random_density(rng, 3)
    from scipy.linalg import sqrtm
    s = sqrtm(rho)
    oracle = np.real(np.trace(sqrtm(s @ sigma @ s))) ** 2
    assert fidelity(rho, sigma) == pytest.approx(oracle, abs=1e-10)


def test_partial_trace_product(rng):
    a, b = random_density(rng, 2), random_density(rng, 3)
    np.testing.assert_allclose(partial_trace_second(np.kron(a, b), 2, 3), a, atol=1e-15)
