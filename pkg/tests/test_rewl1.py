import numpy as np
import pytest

from conftest import random_covariance
from sfcovsel.covsel import admm_covsel
from sfcovsel.exceptions import ConvergenceError, InvalidParameterError
from sfcovsel.rewl1 import (RewConfig, node_weights, penalty_matrix,
                            reweighted_l1_objective, reweighted_l1_solve)


def test_node_weights_finite_on_empty_rows():
    lam = node_weights(np.eye(4), 0.5, 0.1)
    np.testing.assert_allclose(lam, 5.0)
    X = np.array([[1, -0.5, 0], [-0.5, 1, 0.25], [0, 0.25, 1]])
    np.testing.assert_allclose(node_weights(X, 1.0, 1.0),
                               [1 / 1.5, 1 / 1.75, 1 / 1.25])


def test_penalty_matrix():
    W = penalty_matrix([1.0, 3.0], 0.25)
    np.testing.assert_array_equal(W, [[0.25, 2.0], [2.0, 0.25]])


def test_linearised_penalty_matches_row_sum(rng):
    A = rng.normal(size=(6, 6))
    X = A + A.T
    lam = rng.random(6)
    rows = np.abs(X).sum(1) - np.abs(np.diag(X))
    W = penalty_matrix(lam, 0.0)
    assert np.sum(W * np.abs(X)) == pytest.approx(lam @ rows)


def test_objective_inf_when_not_pd():
    assert reweighted_l1_objective(-np.eye(2), np.eye(2), 1, 0, 1) == np.inf


def test_zero_strength_is_mle(rng):
    C = random_covariance(rng, 10)
    res = reweighted_l1_solve(C, RewConfig(alpha=0.0, beta=0.0))
    ref = admm_covsel(C, 0.0, eps=1e-8, max_iter=20000).precision
    np.testing.assert_allclose(res.precision, ref, atol=1e-6)


def test_one_outer_step_is_weighted_l1(rng):
    C = random_covariance(rng, 8)
    cfg = RewConfig(alpha=0.2, beta=0.05, outer_iters=1)
    warm = admm_covsel(C, 1.0, penalty_matrix(np.full(8, 0.2), 0.05),
                       eps=1e-8, max_iter=20000).precision
    lam = node_weights(warm, 0.2, 1.0)
    ref = admm_covsel(C, 1.0, penalty_matrix(lam, 0.05), eps=1e-8,
                      max_iter=20000).precision
    res = reweighted_l1_solve(C, cfg)
    np.testing.assert_array_equal(res.precision, ref)
    assert len(res.outer_trace) == 2


def test_monotone_outer_objective(rng):
    for _ in range(3):
        C = random_covariance(rng, 20)
        res = reweighted_l1_solve(C, RewConfig(alpha=0.1, beta=0.05))
        f = np.asarray(res.outer_trace)
        assert np.all(np.diff(f) <= 1e-8)


def test_inner_failure_propagates(rng):
    C = random_covariance(rng, 8)
    with pytest.raises(ConvergenceError, match="outer iteration 0"):
        reweighted_l1_solve(C, RewConfig(alpha=0.1, inner_max_iter=3))


@pytest.mark.parametrize("kw", [{"epsilon": 0}, {"alpha": -1},
                                {"outer_iters": 0}, {"inner_max_iter": 0}])
def test_config_validation(kw):
    with pytest.raises(InvalidParameterError):
        RewConfig(**kw)
