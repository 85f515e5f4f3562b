"""Synthetic scale-free Gaussian graphical models.

Ground-truth graphs come from preferential attachment or from a
configuration model with a power-law degree sequence. A graph is turned
into a diagonally dominant precision matrix, sampled, and summarised by a
(optionally unit-diagonal) empirical covariance.

All randomness goes through ``numpy.random.default_rng(seed)`` (PCG64).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from ._validation import check_positive_int, check_symmetric_matrix
from .exceptions import (DegenerateCovarianceError, InvalidParameterError,
                         NotPositiveDefiniteError, SfcovselError)
from .regularizer import EdgeSet

__all__ = [
    "DataMatrix",
    "GroundTruthGraph",
    "build_precision",
    "empirical_covariance",
    "generate_ba",
    "generate_powerlaw_config",
    "is_graphical",
    "powerlaw_degree_sequence",
    "sample_gaussian",
]


@dataclass(frozen=True)
class GroundTruthGraph:
    """A generated graph plus what is needed to regenerate it."""

    n: int
    edges: EdgeSet
    model: str
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges.sorted_edges()],
            "model": self.model,
            "params": dict(self.params),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d) -> "GroundTruthGraph":
        n = int(d["n"])
        return cls(n, EdgeSet(n, (tuple(e) for e in d["edges"])),
                   d.get("model", "unknown"), dict(d.get("params", {})),
                   d.get("seed"))


@dataclass(frozen=True)
class DataMatrix:
    samples: np.ndarray
    seed: Optional[int] = None


def generate_ba(n: int, m: int = 2, seed=None) -> GroundTruthGraph:
    """Preferential-attachment graph.

    Starts from ``m`` isolated nodes; every new node links to ``m`` distinct
    existing nodes chosen with probability proportional to ``degree + 1``.
    The result has exactly ``m * (n - m)`` edges.
    """
    n = check_positive_int(n, "n")
    m = check_positive_int(m, "m")
    if not n > m:
        raise InvalidParameterError(f"need n > m, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    deg = np.zeros(n)
    edges = []
    for new in range(m, n):
        p = deg[:new] + 1.0
        targets = rng.choice(new, size=m, replace=False, p=p / p.sum())
        for t in targets:
            edges.append((int(t), new))
            deg[t] += 1
        deg[new] = m
    return GroundTruthGraph(n, EdgeSet(n, edges), "ba", {"m": m}, seed)


def powerlaw_degree_sequence(n: int, exponent: float, rng) -> np.ndarray:
    """Draw ``n`` degrees with ``P(d) ~ d ** -exponent`` on ``1..n-1``."""
    support = np.arange(1, n)
    p = support ** -float(exponent)
    return rng.choice(support, size=n, p=p / p.sum())


def is_graphical(degrees) -> bool:
    """Erdos-Gallai test for a simple-graph degree sequence."""
    d = np.sort(np.asarray(degrees, dtype=np.int64))[::-1]
    if d.sum() % 2 or (d.size and (d[0] >= d.size or d[-1] < 0)):
        return False
    csum = np.cumsum(d)
    for k in range(1, d.size + 1):
        rhs = k * (k - 1) + np.sum(np.minimum(d[k:], k))
        if csum[k - 1] > rhs:
            return False
    return True


def generate_powerlaw_config(n: int, exponent: float = 2.0, seed=None,
                             max_attempts: int = 100) -> GroundTruthGraph:
    """Configuration-model graph with a power-law degree sequence.

    Degrees are drawn from a discrete power law on ``1..n-1``; one degree is
    nudged by one to make the sum even, and the sequence is redrawn until it
    is graphical. Half-edges are paired uniformly at random, then self-loops
    are dropped and parallel edges merged.
    """
    n = check_positive_int(n, "n")
    if n < 4:
        raise InvalidParameterError(f"need n >= 4, got {n}")
    exponent = float(exponent)
    if not exponent > 1:
        raise InvalidParameterError(f"exponent must be > 1, got {exponent}")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        deg = powerlaw_degree_sequence(n, exponent, rng)
        if deg.sum() % 2:
            v = rng.integers(n)
            deg[v] += 1 if deg[v] < n - 1 else -1
        if is_graphical(deg):
            break
    else:
        raise SfcovselError(
            f"no graphical degree sequence after {max_attempts} draws")

    stubs = np.repeat(np.arange(n), deg)
    rng.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    edges = EdgeSet(n, map(tuple, pairs.tolist()))
    return GroundTruthGraph(n, edges, "powerlaw", {"exponent": exponent},
                            seed)


def build_precision(g, edge_weight: float = -0.2, base: float = 0.5):
    """Precision matrix with a constant weight on every edge.

    Off-diagonal entries are ``edge_weight`` on edges and 0 elsewhere; the
    diagonal is ``base - sum_{j != i} X_ij``.

    Raises
    ------
    NotPositiveDefiniteError
        If the result fails a Cholesky factorisation.
    """
    es = g.edges if isinstance(g, GroundTruthGraph) else g
    X = edge_weight * es.adjacency()
    np.fill_diagonal(X, base - X.sum(axis=1))
    try:
        cholesky(X, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            "precision matrix is not positive definite") from exc
    return X


def sample_gaussian(precision, N: int, seed=None) -> DataMatrix:
    """``N`` zero-mean Gaussian draws with the given precision matrix.

    With ``precision = L L^T``, a standard normal ``z`` is mapped to
    ``x = L^{-T} z``, whose covariance is ``precision^{-1}``.
    """
    P = check_symmetric_matrix(precision, name="precision", tol=1e-10)
    N = check_positive_int(N, "N")
    try:
        L = cholesky(P, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            "precision matrix is not positive definite") from exc
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((P.shape[0], N))
    x = solve_triangular(L.T, z, lower=False)
    return DataMatrix(np.ascontiguousarray(x.T), seed)


def empirical_covariance(d, normalize: bool = True) -> np.ndarray:
    """Mean-centred ``1/N`` sample covariance, optionally rescaled to unit
    diagonal.

    Raises
    ------
    DegenerateCovarianceError
        When normalising and some coordinate has zero variance.
    """
    x = d.samples if isinstance(d, DataMatrix) else np.asarray(d, float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise InvalidParameterError("need at least two samples")
    xc = x - x.mean(axis=0)
    C = xc.T @ xc / x.shape[0]
    C = 0.5 * (C + C.T)
    if not normalize:
        return C
    var = np.diag(C)
    if np.any(var <= 0):
        raise DegenerateCovarianceError(
            f"{int(np.sum(var <= 0))} coordinate(s) have zero variance")
    s = 1.0 / np.sqrt(var)
    C = C * s[:, None] * s[None, :]
    C = 0.5 * (C + C.T)
    np.fill_diagonal(C, 1.0)
    return C
