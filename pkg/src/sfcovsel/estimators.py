"""scikit-learn compatible estimators.

All three estimators subclass :class:`sklearn.covariance.EmpiricalCovariance`
so that ``score``, ``mahalanobis``, ``get_params``/``set_params`` and
``clone`` behave as for :class:`sklearn.covariance.GraphicalLasso`.

Examples
--------
>>> import numpy as np
>>> from sfcovsel import ScaleFreeGraphicalModel
>>> X = np.random.default_rng(0).standard_normal((200, 5))
>>> model = ScaleFreeGraphicalModel(alpha=0.2).fit(X)
>>> model.precision_.shape
(5, 5)
"""
from __future__ import annotations

import warnings

import numpy as np
from sklearn.covariance import EmpiricalCovariance
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_array

from ._validation import check_covariance
from .covsel import DEFAULT_EPS, DEFAULT_MAX_ITER, DEFAULT_RHO, admm_covsel
from .exceptions import InvalidParameterError
from .rewl1 import RewConfig, reweighted_l1_solve
from .synth import empirical_covariance
from .weights import WeightSequence, make_weights

__all__ = ["L1GraphicalModel", "ReweightedL1GraphicalModel",
           "ScaleFreeGraphicalModel", "make_estimator"]


class _PenalizedGraphicalModel(EmpiricalCovariance):
    """Shared ``fit`` logic; subclasses implement ``_solve(C)``."""

    def __init__(self, alpha=0.01, *, covariance=None, normalize=False,
                 rho=DEFAULT_RHO, tol=DEFAULT_EPS, max_iter=DEFAULT_MAX_ITER,
                 assume_centered=False):
        super().__init__(assume_centered=assume_centered)
        self.alpha = alpha
        self.covariance = covariance
        self.normalize = normalize
        self.rho = rho
        self.tol = tol
        self.max_iter = max_iter

    def _input_covariance(self, X):
        if self.covariance == "precomputed":
            C = check_covariance(X)
            self.location_ = np.zeros(C.shape[0])
        elif self.covariance is None:
            X = check_array(X, ensure_min_samples=2, estimator=self)
            if self.assume_centered:
                self.location_ = np.zeros(X.shape[1])
                C = X.T @ X / X.shape[0]
            else:
                self.location_ = X.mean(axis=0)
                C = empirical_covariance(X, normalize=False)
        else:
            raise InvalidParameterError(
                f"covariance must be None or 'precomputed', "
                f"got {self.covariance!r}")
        if self.normalize:
            d = 1.0 / np.sqrt(np.diag(C))
            C = C * d[:, None] * d[None, :]
            C = 0.5 * (C + C.T)
            np.fill_diagonal(C, 1.0)
        return check_covariance(C)

    def fit(self, X, y=None):
        """Estimate a sparse precision matrix.

        Parameters
        ----------
        X : array-like of shape (n_samples, n_features), or (n_features,
            n_features) when ``covariance='precomputed'``.
        y : ignored

        Returns
        -------
        self
        """
        C = self._input_covariance(X)
        self.n_features_in_ = C.shape[0]
        self.input_covariance_ = C
        result = self._solve(C)
        if not result.converged:
            warnings.warn(f"{type(self).__name__} did not converge in "
                          f"{result.iterations} iterations",
                          ConvergenceWarning)
        self.result_ = result
        self.precision_ = result.precision
        self.covariance_ = np.linalg.inv(result.precision)
        self.edges_ = result.edge_set
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        self.objective_ = result.objective
        return self

    def _solve(self, C):
        raise NotImplementedError


class L1GraphicalModel(_PenalizedGraphicalModel):
    """Off-diagonal L1 penalised covariance selection solved by ADMM.

    Minimises ``<X, C> - log det X + alpha * sum_{i != j} |X_ij|``.

    Parameters
    ----------
    alpha : float, default=0.01
    covariance : {None, 'precomputed'}, default=None
        With 'precomputed', ``fit`` receives the covariance matrix itself.
    normalize : bool, default=False
        Rescale the covariance to unit diagonal before solving.
    rho : float, default=0.5
        ADMM penalty parameter.
    tol : float, default=1e-5
        Bound on both ADMM residuals at convergence.
    max_iter : int, default=2000
    assume_centered : bool, default=False

    Attributes
    ----------
    precision_ : ndarray of shape (n_features, n_features)
        Sparse precision estimate.
    covariance_ : ndarray of shape (n_features, n_features)
        Its inverse.
    edges_ : EdgeSet
    n_iter_ : int
    converged_ : bool
    objective_ : float
    result_ : SolveResult
    """

    def _solve(self, C):
        return admm_covsel(C, self.alpha, "l1", rho=self.rho, eps=self.tol,
                           max_iter=self.max_iter)


class ScaleFreeGraphicalModel(_PenalizedGraphicalModel):
    """Covariance selection under the convex scale-free degree prior.

    Minimises ``<X, C> - log det X + alpha * omega(X)`` where ``omega`` is
    the convex relaxation of ``sum_v h(degree(v))`` for the chosen
    degree-weight family ``h``.

    Parameters
    ----------
    alpha : float, default=0.01
    weights : str or WeightSequence, default='sqrt'
        Family name for :func:`~sfcovsel.weights.make_weights` or a ready
        sequence (re-tabulated to ``n_features - 1`` if needed).
    weight_params : dict, optional
        Family parameters, e.g. ``{'beta': 1.0}``.
    eta, sym_tol, round_tol, max_outer
        Dual decomposition settings, see :class:`~sfcovsel.prox.ProxParams`.
    covariance, normalize, rho, tol, max_iter, assume_centered
        As for :class:`L1GraphicalModel`.
    """

    def __init__(self, alpha=0.01, *, weights="sqrt", weight_params=None,
                 eta=0.9, sym_tol=1e-6, round_tol=1e-15, max_outer=10000,
                 covariance=None, normalize=False, rho=DEFAULT_RHO,
                 tol=DEFAULT_EPS, max_iter=DEFAULT_MAX_ITER,
                 assume_centered=False):
        super().__init__(alpha, covariance=covariance, normalize=normalize,
                         rho=rho, tol=tol, max_iter=max_iter,
                         assume_centered=assume_centered)
        self.weights = weights
        self.weight_params = weight_params
        self.eta = eta
        self.sym_tol = sym_tol
        self.round_tol = round_tol
        self.max_outer = max_outer

    def weight_sequence(self, n_features):
        max_degree = max(n_features - 1, 1)
        if isinstance(self.weights, WeightSequence):
            return self.weights.with_max_degree(max_degree)
        return make_weights(self.weights, self.weight_params, max_degree)

    def _solve(self, C):
        self.weights_ = self.weight_sequence(C.shape[0])
        prox_params = dict(eta=self.eta, sym_tol=self.sym_tol,
                           round_tol=self.round_tol,
                           max_outer=self.max_outer)
        return admm_covsel(C, self.alpha, self.weights_, rho=self.rho,
                           eps=self.tol, max_iter=self.max_iter,
                           prox_params=prox_params)


class ReweightedL1GraphicalModel(_PenalizedGraphicalModel):
    """Non-convex reweighted-L1 baseline.

    Minimises ``<X, C> - log det X + alpha * sum_v log(||X_-v||_1 +
    epsilon) + beta * sum_v |X_vv|`` by a majorise-minimise double loop.

    Parameters
    ----------
    alpha : float, default=0.01
    beta : float, default=0
        Diagonal L1 strength.
    epsilon : float, default=1
        Offset inside the logarithm.
    outer_iters : int, default=10
    weight_tol : float, default=1e-4
        Early exit once node weights move less than this.
    tol : float, default=1e-8
        Inner ADMM tolerance.
    max_iter : int, default=20000
        Inner ADMM iteration cap.
    """

    def __init__(self, alpha=0.01, *, beta=0.0, epsilon=1.0, outer_iters=10,
                 weight_tol=1e-4, covariance=None, normalize=False,
                 rho=DEFAULT_RHO, tol=1e-8, max_iter=20000,
                 assume_centered=False):
        super().__init__(alpha, covariance=covariance, normalize=normalize,
                         rho=rho, tol=tol, max_iter=max_iter,
                         assume_centered=assume_centered)
        self.beta = beta
        self.epsilon = epsilon
        self.outer_iters = outer_iters
        self.weight_tol = weight_tol

    def _solve(self, C):
        cfg = RewConfig(alpha=self.alpha, beta=self.beta,
                        epsilon=self.epsilon, outer_iters=self.outer_iters,
                        weight_tol=self.weight_tol, rho=self.rho,
                        inner_eps=self.tol, inner_max_iter=self.max_iter)
        return reweighted_l1_solve(C, cfg)


_METHODS = {"sf": ScaleFreeGraphicalModel, "l1": L1GraphicalModel,
            "rw": ReweightedL1GraphicalModel}


def make_estimator(method: str, **params):
    """Estimator for a method code: 'sf' (degree prior), 'l1' or 'rw'."""
    try:
        cls = _METHODS[method]
    except KeyError:
        raise InvalidParameterError(
            f"unknown method {method!r}; expected one of "
            f"{sorted(_METHODS)}") from None
    return cls(**params)
