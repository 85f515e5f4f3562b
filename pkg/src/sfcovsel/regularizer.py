"""The combinatorial degree prior and its convex relaxation.

``combinatorial_F`` sums ``h(degree)`` over the nodes of an edge set.
``omega`` is its Lovasz extension evaluated on ``|X|``: every row of a
symmetric weight matrix is treated as an ordered weighted L1 norm whose
weights ``diffs[k] = h(k+1) - h(k)`` are assigned by decreasing magnitude,
with the diagonal left out.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Tuple

import numpy as np

from ._validation import check_symmetric_matrix
from .exceptions import InvalidParameterError
from .weights import WeightSequence

__all__ = [
    "EdgeSet",
    "combinatorial_F",
    "omega",
    "omega_subgradient",
    "row_ordering",
]


@dataclass(frozen=True)
class EdgeSet:
    """Undirected simple graph on nodes ``0..n-1``.

    Edges are stored as ``(i, j)`` pairs with ``i < j``.
    """

    n: int
    edges: FrozenSet[Tuple[int, int]]

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        n = int(n)
        if n < 1:
            raise InvalidParameterError("an edge set needs at least one node")
        canon = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidParameterError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidParameterError(
                    f"edge ({i}, {j}) outside [0, {n})")
            canon.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(canon))

    @classmethod
    def from_matrix(cls, X, tol: float = 0.0) -> "EdgeSet":
        """Edges are off-diagonal entries with ``|X_ij| > tol`` (upper part)."""
        X = np.asarray(X)
        iu, ju = np.triu_indices(X.shape[0], k=1)
        mask = np.abs(X[iu, ju]) > tol
        return cls(X.shape[0], zip(iu[mask].tolist(), ju[mask].tolist()))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge) -> bool:
        i, j = edge
        return (min(i, j), max(i, j)) in self.edges

    def sorted_edges(self):
        return sorted(self.edges)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j in self.edges:
            A[i, j] = A[j, i] = 1.0
        return A

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            d[i] += 1
            d[j] += 1
        return d


def combinatorial_F(es: EdgeSet, w: WeightSequence) -> float:
    """Sum of ``h(d(v))`` over all nodes, the constant term dropped."""
    deg = es.degrees()
    if deg.size and deg.max() > w.max_degree:
        raise InvalidParameterError(
            f"node degree {deg.max()} exceeds max_degree {w.max_degree}")
    return float(np.sum(w.values[deg]))


def _offdiag(X):
    n = X.shape[0]
    return X[~np.eye(n, dtype=bool)].reshape(n, n - 1)


def _diffs_for(X, w):
    n = X.shape[0]
    if n - 1 > w.max_degree:
        raise InvalidParameterError(
            f"{n}x{n} matrix needs max_degree >= {n - 1}, "
            f"weights have {w.max_degree}")
    return w.diffs[:n - 1]


def row_ordering(X) -> np.ndarray:
    """Column indices of each row, sorted by decreasing ``|X_ij|``.

    The diagonal is excluded, so the result has shape ``(n, n - 1)``.
    Ties keep increasing column order.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    cols = _offdiag(np.broadcast_to(np.arange(n), (n, n)))
    order = np.argsort(-np.abs(_offdiag(X)), axis=1, kind="stable")
    return np.take_along_axis(cols, order, axis=1)


def omega(X, w: WeightSequence) -> float:
    """Evaluate the convex relaxation of the degree prior at ``X``.

    Parameters
    ----------
    X : array-like of shape (n, n)
        Symmetric matrix; its diagonal is ignored.
    w : WeightSequence
        Needs ``max_degree >= n - 1``.
    """
    X = check_symmetric_matrix(X)
    if X.shape[0] == 1:
        return 0.0
    d = _diffs_for(X, w)
    mags = -np.sort(-np.abs(_offdiag(X)), axis=1)
    return float(np.sum(mags @ d))


def omega_subgradient(X, w: WeightSequence) -> np.ndarray:
    """A subgradient of :func:`omega` with respect to the free entries.

    Entry ``(i, j)`` collects ``sign(X_ij) * diffs[rank of j in row i]``
    plus the same term from row ``j``. Zero entries and the diagonal get 0.
    Perturbing ``X_ij`` and ``X_ji`` together by ``t`` changes ``omega`` by
    ``t * G_ij`` wherever ``omega`` is differentiable.
    """
    X = check_symmetric_matrix(X)
    n = X.shape[0]
    G = np.zeros((n, n))
    if n == 1:
        return G
    d = _diffs_for(X, w)
    cols = row_ordering(X)
    rows = np.repeat(np.arange(n), n - 1).reshape(n, n - 1)
    G[rows, cols] = d[np.newaxis, :]
    G *= np.sign(X)
    np.fill_diagonal(G, 0.0)
    return G + G.T
