"""ADMM for penalised Gaussian covariance selection.

Minimises ``<X, C> - log det X + penalty(X)`` by splitting ``X = Y``:

    X <- prox of the log-det term at Y - U   (closed form via eigh)
    Y <- prox of the penalty at X + U
    U <- U + X - Y

The penalty is either ``alpha * omega`` (degree prior, see
:mod:`sfcovsel.prox`) or an entrywise weighted L1 norm.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from ._validation import check_covariance, check_positive, \
    check_positive_int
from .exceptions import InvalidParameterError
from .prox import ProxParams, prox_omega
from .regularizer import EdgeSet, omega
from .weights import WeightSequence

__all__ = [
    "AdmmState",
    "SolveResult",
    "admm_covsel",
    "gaussian_objective",
    "logdet_prox_eigenvalues",
    "prox_logdet",
    "soft_threshold",
]

DEFAULT_RHO = 0.5
DEFAULT_EPS = 1e-5
DEFAULT_MAX_ITER = 2000


@dataclass
class AdmmState:
    """Iterates of one ADMM run; ``history`` holds (primal, dual) residuals."""

    X: np.ndarray
    Y: np.ndarray
    U: np.ndarray
    iteration: int = 0
    history: List[Tuple[float, float]] = field(default_factory=list)


@dataclass
class SolveResult:
    """Outcome of a covariance-selection solve.

    Attributes
    ----------
    precision : ndarray of shape (n, n)
        The sparse iterate ``Y``; its zero pattern is the estimated graph.
    edge_set : EdgeSet
        Off-diagonal support of ``precision``.
    iterations : int
    converged : bool
    objective : float
        Penalised objective at ``precision`` (``inf`` if it is not PD).
    trace : list of (primal residual, dual residual)
        Per-iteration ADMM residuals. Reweighted solves store the outer
        objective values in ``outer_trace`` instead.
    """

    precision: np.ndarray
    edge_set: EdgeSet
    iterations: int
    converged: bool
    objective: float
    trace: list = field(default_factory=list)
    outer_trace: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "objective": float(self.objective),
            "n_edges": len(self.edge_set),
        }


def logdet_prox_eigenvalues(lam, rho: float) -> np.ndarray:
    """Positive root of ``rho * x - 1 / x = lam``, elementwise."""
    lam = np.asarray(lam, dtype=float)
    root = np.sqrt(lam * lam + 4.0 * rho)
    out = np.empty_like(root)
    pos = lam >= 0
    out[pos] = (lam[pos] + root[pos]) / (2.0 * rho)
    # equivalent form without cancellation for negative lam
    out[~pos] = 2.0 / (root[~pos] - lam[~pos])
    return out


def prox_logdet(M, rho: float) -> np.ndarray:
    """Minimiser of ``-log det X + (rho / 2) ||X||^2 - <X, M>``.

    Each eigenvalue ``lam`` of ``M`` maps to the positive root of
    ``rho * x - 1 / x = lam``, i.e. ``(lam + sqrt(lam^2 + 4 rho)) / (2 rho)``.
    For negative ``lam`` the equivalent form ``2 / (sqrt(lam^2 + 4 rho) -
    lam)`` is used to avoid cancellation.

    Parameters
    ----------
    M : ndarray of shape (n, n)
        Symmetric; inside ADMM this is ``rho * (Y - U) - C``.
    rho : float
        Positive penalty parameter.
    """
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise InvalidParameterError("prox_logdet input is not finite")
    rho = check_positive(rho, "rho")
    lam, Q = np.linalg.eigh(M)
    X = (Q * logdet_prox_eigenvalues(lam, rho)) @ Q.T
    return 0.5 * (X + X.T)


def soft_threshold(A, thresh):
    """Entrywise ``sign(A) * max(|A| - thresh, 0)``; ``thresh`` broadcasts."""
    return np.sign(A) * np.maximum(np.abs(A) - thresh, 0.0)


def gaussian_objective(X, C) -> float:
    """``<X, C> - log det X``, or ``inf`` when ``X`` is not PD."""
    try:
        L = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        return np.inf
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    return float(np.sum(X * C) - logdet)


Penalty = Union[str, WeightSequence, np.ndarray]


def _make_penalty(penalty, alpha, rho, n, prox_params):
    """Return ``(prox(Z), value(X))`` for ``alpha * penalty``."""
    if isinstance(penalty, WeightSequence):
        w = penalty if penalty.max_degree == n - 1 else \
            penalty.with_max_degree(max(n - 1, 1))
        pp = ProxParams(shrink_scale=alpha / rho, **(prox_params or {}))

        def prox(Z):
            return prox_omega(Z, pp, w)

        def value(X):
            return alpha * omega(X, w)

        return prox, value

    if isinstance(penalty, str):
        if penalty != "l1":
            raise InvalidParameterError(
                f"unknown penalty {penalty!r}; use 'l1', a WeightSequence "
                f"or a weight matrix")
        weights = np.ones((n, n))
        np.fill_diagonal(weights, 0.0)
    else:
        weights = np.asarray(penalty, dtype=float)
        if weights.shape != (n, n) or np.any(weights < 0) \
                or not np.allclose(weights, weights.T):
            raise InvalidParameterError(
                "a penalty matrix must be symmetric, non-negative and "
                f"of shape {(n, n)}")
    thresh = alpha * weights / rho

    def prox(Z):
        return soft_threshold(Z, thresh)

    def value(X):
        return float(alpha * np.sum(weights * np.abs(X)))

    return prox, value


def admm_covsel(C, alpha: float = 0.0, penalty: Penalty = "l1", *,
                rho: float = DEFAULT_RHO, eps: float = DEFAULT_EPS,
                max_iter: int = DEFAULT_MAX_ITER,
                prox_params: Optional[dict] = None,
                init: Optional[Tuple[np.ndarray, np.ndarray]] = None,
                callback: Optional[Callable[[AdmmState], None]] = None
                ) -> SolveResult:
    """Penalised maximum-likelihood precision estimate by ADMM.

    Parameters
    ----------
    C : array-like of shape (n, n)
        Covariance matrix, symmetric with positive diagonal.
    alpha : float, default=0
        Penalty strength.
    penalty : 'l1', WeightSequence or ndarray, default='l1'
        ``'l1'`` penalises ``sum_{i != j} |X_ij|``; a :class:`WeightSequence`
        uses the degree prior ``omega``; an ``(n, n)`` array ``W`` gives
        ``sum_ij W_ij |X_ij|`` (diagonal included).
    rho : float, default=0.5
    eps : float, default=1e-5
        Stop when ``||X - Y||_F < eps`` and ``||Y - Y_prev||_F < eps``.
    max_iter : int, default=2000
    prox_params : dict, optional
        Extra :class:`~sfcovsel.prox.ProxParams` fields (``eta``,
        ``sym_tol``, ...) for the degree-prior prox.
    init : (Y, U), optional
        Starting point; defaults to ``(I, 0)``.
    callback : callable, optional
        Called with the :class:`AdmmState` after every iteration.

    Returns
    -------
    SolveResult
        ``converged`` is False if ``max_iter`` was reached.
    """
    C = check_covariance(C)
    n = C.shape[0]
    alpha = check_positive(alpha, "alpha", strict=False)
    rho = check_positive(rho, "rho")
    eps = check_positive(eps, "eps")
    max_iter = check_positive_int(max_iter, "max_iter")
    prox, value = _make_penalty(penalty, alpha, rho, n, prox_params)

    if init is None:
        Y, U = np.eye(n), np.zeros((n, n))
    else:
        Y, U = (np.array(a, dtype=float) for a in init)
    state = AdmmState(X=Y.copy(), Y=Y, U=U)
    converged = False
    for it in range(1, max_iter + 1):
        X = prox_logdet(rho * (state.Y - state.U) - C, rho)
        Y_prev = state.Y
        Y = prox(X + state.U)
        state.U = state.U + X - Y
        state.X, state.Y, state.iteration = X, Y, it
        r = float(np.linalg.norm(X - Y))
        s = float(np.linalg.norm(Y - Y_prev))
        state.history.append((r, s))
        if callback is not None:
            callback(state)
        if r < eps and s < eps:
            converged = True
            break

    P = state.Y
    return SolveResult(
        precision=P,
        edge_set=EdgeSet.from_matrix(P),
        iterations=state.iteration,
        converged=converged,
        objective=gaussian_objective(P, C) + value(P),
        trace=state.history,
    )
