"""Proximal operator of the degree-prior relaxation.

The operator ``argmin_X s * omega(X) + 0.5 * ||X - Z||_F^2`` over symmetric
``X`` is computed by dual decomposition: the symmetry constraint is relaxed
with an anti-symmetric multiplier ``V`` so that every row becomes an
independent ordered-weighted-L1 prox, solved exactly by sorting and pooling
adjacent violators. ``V`` is then updated by gradient ascent until the row
solutions agree with their transpose.

A plain subgradient method on the same objective is provided as a baseline.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Optional

import numpy as np
from numba import njit

from ._validation import check_positive, check_positive_int, \
    check_symmetric_matrix
from .exceptions import ConvergenceError, InvalidParameterError
from .regularizer import omega, omega_subgradient
from .weights import WeightSequence

__all__ = [
    "ProxParams",
    "ProxInfo",
    "TracePoint",
    "prox_objective",
    "prox_omega",
    "prox_omega_subgrad",
    "prox_row",
]


@dataclass(frozen=True)
class ProxParams:
    """Settings of the dual-decomposition prox.

    Parameters
    ----------
    shrink_scale : float
        Multiplier ``s`` of the regularizer, ``alpha / rho`` inside ADMM.
    eta : float, default=0.9
        Dual step size, in ``(0, 1)``.
    sym_tol : float, default=1e-6
        Stop once ``||X - X.T||_F < sym_tol``.
    round_tol : float, default=1e-15
        Entries of the symmetrised result below this are set to zero.
    max_outer : int, default=10000
        Cap on dual iterations.
    """

    shrink_scale: float
    eta: float = 0.9
    sym_tol: float = 1e-6
    round_tol: float = 1e-15
    max_outer: int = 10000

    def __post_init__(self):
        check_positive(self.shrink_scale, "shrink_scale", strict=False)
        if not 0 < self.eta < 1:
            raise InvalidParameterError(f"eta must lie in (0, 1), "
                                        f"got {self.eta!r}")
        check_positive(self.sym_tol, "sym_tol")
        check_positive(self.round_tol, "round_tol")
        check_positive_int(self.max_outer, "max_outer")


class TracePoint(NamedTuple):
    iteration: int
    objective: float
    sym_residual: float


class ProxInfo(NamedTuple):
    n_iter: int
    sym_residual: float
    trace: List[TracePoint]


@njit(cache=True)
def _prox_row_kernel(z, v, diag, diffs, shrink, out):
    n = z.shape[0]
    m = n - 1
    w = z - v
    mag = np.empty(m)
    pos = np.empty(m, dtype=np.int64)
    c = 0
    for j in range(n):
        if j != diag:
            mag[c] = abs(w[j])
            pos[c] = j
            c += 1
    order = np.argsort(-mag, kind="mergesort")

    # pool adjacent violators on the tentative values; a stack of
    # (sum, count) blocks is the disjoint-set forest keyed by group head
    bsum = np.empty(m)
    bcnt = np.empty(m, dtype=np.int64)
    top = -1
    for k in range(m):
        top += 1
        bsum[top] = mag[order[k]] - shrink * diffs[k]
        bcnt[top] = 1
        while top > 0 and bsum[top] * bcnt[top - 1] >= \
                bsum[top - 1] * bcnt[top]:
            bsum[top - 1] += bsum[top]
            bcnt[top - 1] += bcnt[top]
            top -= 1

    k = 0
    for b in range(top + 1):
        val = bsum[b] / bcnt[b]
        if val < 0.0:
            val = 0.0
        for _ in range(bcnt[b]):
            j = pos[order[k]]
            if w[j] > 0.0:
                out[j] = val
            elif w[j] < 0.0:
                out[j] = -val
            else:
                out[j] = 0.0
            k += 1
    out[diag] = z[diag]


@njit(cache=True)
def _prox_rows(Z, V, diffs, shrink, X):
    for i in range(Z.shape[0]):
        _prox_row_kernel(Z[i], V[i], i, diffs, shrink, X[i])


def prox_row(z, v, params: ProxParams, w: WeightSequence, diag: int):
    """Exact minimiser of one row subproblem.

    Minimises ``s * sum_k diffs[k] * |x|_(k) + 0.5 * ||x - (z - v)||^2``
    over the off-diagonal positions, where ``|x|_(k)`` is the k-th largest
    magnitude; position ``diag`` is copied from ``z``.

    Parameters
    ----------
    z, v : array-like of shape (n,)
        Row of the prox input and of the dual variable.
    params : ProxParams
    w : WeightSequence
        Needs ``max_degree >= n - 1``.
    diag : int
        Index of the diagonal entry within the row.

    Returns
    -------
    x : ndarray of shape (n,)
    """
    z = np.ascontiguousarray(z, dtype=float)
    v = np.ascontiguousarray(v, dtype=float)
    if z.ndim != 1 or z.shape != v.shape:
        raise InvalidParameterError(
            f"z and v must be vectors of equal length, got {z.shape} "
            f"and {v.shape}")
    n = z.shape[0]
    if not 0 <= diag < n:
        raise InvalidParameterError(f"diag={diag} outside [0, {n})")
    if n - 1 > w.max_degree:
        raise InvalidParameterError(
            f"row of length {n} needs max_degree >= {n - 1}")
    out = np.empty(n)
    _prox_row_kernel(z, v, diag, np.asarray(w.diffs[:max(n - 1, 0)]),
                     float(params.shrink_scale), out)
    return out


def prox_objective(X, Z, shrink_scale: float, w: WeightSequence) -> float:
    """``shrink_scale * omega(X) + 0.5 * ||X - Z||_F^2``."""
    X = np.asarray(X, dtype=float)
    return float(shrink_scale * omega(X, w)
                 + 0.5 * np.sum((X - np.asarray(Z)) ** 2))


def prox_omega(Z, params: ProxParams, w: WeightSequence, *,
               trace: bool = False,
               callback: Optional[Callable] = None,
               return_info: bool = False):
    """Proximal operator of ``params.shrink_scale * omega`` at ``Z``.

    Parameters
    ----------
    Z : array-like of shape (n, n)
        Symmetric input.
    params : ProxParams
    w : WeightSequence
    trace : bool, default=False
        Record the objective at the symmetrised iterate and the symmetry
        residual after every dual step (costs one extra sort per step).
    callback : callable, optional
        Called as ``callback(iteration, X, V)`` after each dual update.
    return_info : bool, default=False
        Also return a :class:`ProxInfo`.

    Returns
    -------
    X : ndarray of shape (n, n)
        Symmetric, with ``diag(X) == diag(Z)``.
    info : ProxInfo
        Only if ``return_info``.

    Raises
    ------
    ConvergenceError
        If ``max_outer`` dual steps do not reach ``sym_tol``.
    """
    Z = check_symmetric_matrix(Z, name="Z")
    n = Z.shape[0]
    if n - 1 > w.max_degree:
        raise InvalidParameterError(
            f"{n}x{n} input needs max_degree >= {n - 1}")
    Z = np.ascontiguousarray(Z)
    s = float(params.shrink_scale)
    points = []

    if s == 0.0 or n == 1:
        X = Z.copy()
        info = ProxInfo(0, 0.0, points)
        return (X, info) if return_info else X

    diffs = np.ascontiguousarray(w.diffs[:n - 1])
    X = Z.copy()
    V = np.zeros_like(Z)
    residual = np.inf
    it = 0
    while it < params.max_outer:
        it += 1
        _prox_rows(Z, V, diffs, s, X)
        D = X - X.T
        residual = float(np.sqrt(np.sum(D * D)))
        V += params.eta * D
        if trace:
            points.append(TracePoint(
                it, prox_objective(0.5 * (X + X.T), Z, s, w), residual))
        if callback is not None:
            callback(it, X, V)
        if residual < params.sym_tol:
            break
    else:
        raise ConvergenceError(
            f"dual decomposition did not reach symmetry residual "
            f"{params.sym_tol:g} in {params.max_outer} iterations "
            f"(final {residual:.3g})", residual=residual, n_iter=it)

    X = 0.5 * (X + X.T)
    X[np.abs(X) < params.round_tol] = 0.0
    np.fill_diagonal(X, np.diag(Z))
    if return_info:
        return X, ProxInfo(it, residual, points)
    return X


def _default_step(t):
    return 1.0 / np.sqrt(t + 1.0)


def prox_omega_subgrad(Z, shrink_scale: float, w: WeightSequence,
                       iters: int = 1000,
                       step_schedule: Optional[Callable[[int], float]] = None):
    """Subgradient descent on the prox objective, as a slow baseline.

    Starts at ``Z`` and steps along ``-(shrink_scale * G / 2 + X - Z)``,
    where ``G`` is :func:`omega_subgradient` (the factor 1/2 converts it to
    the Frobenius gradient over symmetric matrices), then re-symmetrises.

    Parameters
    ----------
    Z : array-like of shape (n, n)
    shrink_scale : float
    w : WeightSequence
    iters : int
        Number of steps.
    step_schedule : callable, optional
        ``t -> step`` for ``t = 0, 1, ...``; default ``1 / sqrt(t + 1)``.

    Returns
    -------
    X_best : ndarray
        Iterate with the lowest objective seen (the start included).
    trace : list of TracePoint
        One entry per step; ``objective`` is at the current iterate.
    """
    Z = check_symmetric_matrix(Z, name="Z")
    shrink_scale = check_positive(shrink_scale, "shrink_scale", strict=False)
    iters = check_positive_int(iters, "iters")
    step = step_schedule or _default_step

    X = Z.copy()
    best = X.copy()
    best_obj = prox_objective(X, Z, shrink_scale, w)
    points = []
    for t in range(iters):
        G = 0.5 * shrink_scale * omega_subgradient(X, w) + (X - Z)
        X = X - step(t) * G
        X = 0.5 * (X + X.T)
        obj = prox_objective(X, Z, shrink_scale, w)
        points.append(TracePoint(t + 1, obj, 0.0))
        if obj < best_obj:
            best_obj = obj
            best = X.copy()
    return best, points
