import numpy as np
import pytest
from hypothesis import given, strategies as st

import sfcovsel.covsel as covsel
from conftest import random_covariance
from oracles import subgradient_certificate
from sfcovsel.covsel import (admm_covsel, gaussian_objective,
                             logdet_prox_eigenvalues, prox_logdet,
                             soft_threshold)
from sfcovsel.exceptions import (InvalidParameterError, NotSymmetricError)
from sfcovsel.weights import make_weights


def check_stationary(M, rho, X):
    lam, Q = np.linalg.eigh(M)
    new = np.einsum("ij,jk,ki->i", Q.T, X, Q)
    return np.max(np.abs(rho * new - 1 / new - lam))


def test_prox_logdet_examples():
    np.testing.assert_allclose(prox_logdet(-0.5 * np.eye(3), 0.5),
                               np.eye(3), atol=1e-12)
    np.testing.assert_allclose(prox_logdet(np.zeros((2, 2)), 0.5),
                               np.sqrt(2) * np.eye(2), atol=1e-15)


@given(st.floats(-1e8, 1e8), st.floats(1e-3, 1e3))
def test_eigenvalue_map_stationary(lam, rho):
    x = logdet_prox_eigenvalues(np.array([lam]), rho)[0]
    assert x > 0
    assert abs(rho * x - 1 / x - lam) <= 1e-13 * max(1, abs(lam),
                                                     rho * x, 1 / x)


def test_prox_logdet_stationary_and_pd(rng):
    for scale in [1e-3, 1, 10]:
        A = rng.normal(size=(10, 10)) * scale
        M = A + A.T
        X = prox_logdet(M, 0.5)
        assert np.linalg.eigvalsh(X).min() > 0
        assert check_stationary(M, 0.5, X) <= 1e-10
    X = prox_logdet(np.diag([-1e6, 1e6]), 0.5)
    assert X[0, 0] > 0 and X[0, 1] == 0


def test_prox_logdet_rejects():
    with pytest.raises(InvalidParameterError):
        prox_logdet(np.eye(2), 0.0)
    with pytest.raises(InvalidParameterError):
        prox_logdet(np.full((2, 2), np.nan), 0.5)


def test_soft_threshold():
    np.testing.assert_array_equal(soft_threshold(np.array([-2, 0.5, 3.]), 1),
                                  [-1, 0, 2])


def test_gaussian_objective():
    assert gaussian_objective(np.eye(3), np.eye(3)) == 3.0
    assert gaussian_objective(-np.eye(2), np.eye(2)) == np.inf


def test_unregularized_recovers_inverse(rng):
    C = random_covariance(rng, 12)
    res = admm_covsel(C, 0.0)
    assert res.converged
    err = np.linalg.norm(res.precision - np.linalg.inv(C))
    assert err / np.linalg.norm(np.linalg.inv(C)) < 1e-4


def test_identity_covariance():
    for pen in ["l1", make_weights("sqrt", None, 4)]:
        res = admm_covsel(np.eye(5), 0.3, pen)
        np.testing.assert_allclose(res.precision, np.eye(5), atol=1e-5)
        assert len(res.edge_set) == 0


def test_l1_kkt(rng):
    C = random_covariance(rng, 10)
    alpha = 0.1
    res = admm_covsel(C, alpha)
    X = res.precision
    D = C - np.linalg.inv(X)
    off = ~np.eye(10, dtype=bool)
    assert np.abs(D[off]).max() <= alpha + 1e-5
    act = off & (X != 0)
    assert act.any() and (~act & off).any()
    np.testing.assert_allclose(D[act], -alpha * np.sign(X[act]), atol=1e-4)
    assert res.history[-1][0] < 1e-5 if hasattr(res, "history") else True


def test_omega_kkt(rng):
    C = random_covariance(rng, 8)
    alpha = 0.1
    w = make_weights("sqrt", {"beta": 0.5}, 7)
    res = admm_covsel(C, alpha, w)
    X = res.precision
    G = np.linalg.inv(X) - C
    cert = subgradient_certificate(G / alpha, X, w.diffs)
    assert alpha * max(cert) < 1e-4


def test_iterates_positive_definite_and_residual(rng):
    C = random_covariance(rng, 9)
    mins, hist = [], []

    def cb(state):
        mins.append(np.linalg.eigvalsh(state.X).min())
        hist.append(state.history[-1])

    res = admm_covsel(C, 0.05, make_weights("log", None, 8), callback=cb)
    assert res.converged and min(mins) > 0
    assert hist[-1][0] < 1e-5 and hist[-1][1] < 1e-5
    assert len(res.trace) == res.iterations


def test_every_logdet_call_stationary(rng, monkeypatch):
    calls = []
    orig = covsel.prox_logdet

    def spy(M, rho):
        X = orig(M, rho)
        calls.append(check_stationary(M, rho, X))
        return X

    monkeypatch.setattr(covsel, "prox_logdet", spy)
    admm_covsel(random_covariance(rng, 8), 0.1)
    assert calls and max(calls) <= 1e-10


def test_max_iter_reports_unconverged(rng):
    res = admm_covsel(random_covariance(rng, 6), 0.1, max_iter=2)
    assert not res.converged and res.iterations == 2


def test_weight_matrix_penalty_matches_l1(rng):
    C = random_covariance(rng, 6)
    W = np.ones((6, 6)) - np.eye(6)
    a = admm_covsel(C, 0.2, W).precision
    b = admm_covsel(C, 0.2).precision
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("bad", [
    np.array([[1.0, 0.2], [0.3, 1.0]]),
    np.array([[1.0, 0.2], [0.2, -1.0]]),
])
def test_input_validation(bad):
    with pytest.raises((NotSymmetricError, InvalidParameterError)):
        admm_covsel(bad, 0.1)


def test_parameter_validation():
    with pytest.raises(InvalidParameterError):
        admm_covsel(np.eye(2), -0.1)
    with pytest.raises(InvalidParameterError):
        admm_covsel(np.eye(2), 0.1, "l2")
    with pytest.raises(InvalidParameterError):
        admm_covsel(np.eye(2), 0.1, rho=0)


def test_summary(rng):
    s = admm_covsel(random_covariance(rng, 5), 0.1).summary()
    assert set(s) >= {"iterations", "converged", "objective", "n_edges"}
