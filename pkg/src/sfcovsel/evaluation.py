"""Scoring recovered graphs against a known ground truth."""
from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import clone

from .covsel import SolveResult
from .exceptions import InvalidParameterError, SfcovselError
from .regularizer import EdgeSet
from .synth import GroundTruthGraph

__all__ = ["EdgeMetrics", "RocCurve", "RocPoint", "degree_histogram",
           "edge_errors", "roc_auc", "roc_sweep"]


@dataclass(frozen=True)
class EdgeMetrics:
    """Confusion counts over the ``n (n - 1) / 2`` unordered node pairs."""

    true_positives: int
    false_positives: int
    false_negatives: int
    true_negatives: int

    @property
    def hamming(self) -> int:
        return self.false_positives + self.false_negatives

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hamming"] = self.hamming
        return d


def _as_edge_set(obj) -> EdgeSet:
    if isinstance(obj, EdgeSet):
        return obj
    if isinstance(obj, GroundTruthGraph):
        return obj.edges
    if isinstance(obj, SolveResult):
        return obj.edge_set
    if hasattr(obj, "edges_") and isinstance(obj.edges_, EdgeSet):
        return obj.edges_
    return EdgeSet.from_matrix(np.asarray(obj))


def edge_errors(estimate, truth) -> EdgeMetrics:
    """Compare an estimated edge set to the true one.

    ``estimate`` and ``truth`` may be any of EdgeSet, GroundTruthGraph,
    SolveResult, a fitted estimator, or a matrix whose off-diagonal
    nonzeros are edges.
    """
    est, true = _as_edge_set(estimate), _as_edge_set(truth)
    if est.n != true.n:
        raise InvalidParameterError(
            f"node count mismatch: estimate {est.n}, truth {true.n}")
    tp = len(est.edges & true.edges)
    fp = len(est.edges) - tp
    fn = len(true.edges) - tp
    tn = true.n * (true.n - 1) // 2 - tp - fp - fn
    return EdgeMetrics(tp, fp, fn, tn)


@dataclass(frozen=True)
class RocPoint:
    alpha: float
    false_positives: int
    true_positives: int
    fp_rate: float
    tp_rate: float


@dataclass
class RocCurve:
    """ROC points ordered by decreasing ``alpha`` and their AUC.

    ``failures`` lists ``(alpha, message)`` for solves that raised.
    """

    points: List[RocPoint]
    auc: float
    failures: list = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["alpha,false_positives,true_positives,fp_rate,tp_rate"]
        for p in self.points:
            lines.append(f"{p.alpha!r},{p.false_positives},"
                         f"{p.true_positives},{p.fp_rate!r},{p.tp_rate!r}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"auc": self.auc,
                "points": [asdict(p) for p in self.points],
                "failures": [[a, m] for a, m in self.failures]}


def _rates(m: EdgeMetrics):
    neg = m.false_positives + m.true_negatives
    pos = m.true_positives + m.false_negatives
    return (m.false_positives / neg if neg else 0.0,
            m.true_positives / pos if pos else 0.0)


def roc_auc(rates: Sequence) -> float:
    """Trapezoidal area under ``(fp_rate, tp_rate)`` pairs.

    ``(0, 0)`` and ``(1, 1)`` are added and the points sorted by false
    positive rate (then true positive rate) before integrating.
    """
    pts = sorted({(0.0, 0.0), (1.0, 1.0), *map(tuple, rates)})
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return float(np.trapezoid(y, x))


def _fit_one(estimator, C, alpha):
    est = clone(estimator).set_params(alpha=float(alpha),
                                      covariance="precomputed")
    try:
        est.fit(C)
    except SfcovselError as exc:
        return None, f"{type(exc).__name__}: {exc}"
    return est.edges_, None


def roc_sweep(C, truth, estimator, alphas, n_jobs: Optional[int] = 1
              ) -> RocCurve:
    """Fit ``estimator`` once per ``alpha`` on the covariance ``C``.

    Parameters
    ----------
    C : ndarray of shape (n, n)
        Covariance matrix; the estimator is fitted with
        ``covariance='precomputed'``.
    truth : GroundTruthGraph or EdgeSet
    estimator : estimator from :mod:`sfcovsel.estimators`
        Cloned for every solve, with ``alpha`` overridden.
    alphas : sequence of float
        Positive penalty strengths.
    n_jobs : int, default=1
        Solves to run in parallel (joblib).
    """
    alphas = [float(a) for a in alphas]
    if not alphas or min(alphas) <= 0:
        raise InvalidParameterError("alphas must be non-empty and positive")
    C = np.asarray(C, dtype=float)
    results = Parallel(n_jobs=n_jobs)(
        delayed(_fit_one)(estimator, C, a) for a in alphas)

    points, failures = [], []
    for a, (edges, err) in zip(alphas, results):
        if err is not None:
            failures.append((a, err))
            continue
        m = edge_errors(edges, truth)
        fpr, tpr = _rates(m)
        points.append(RocPoint(a, m.false_positives, m.true_positives,
                               fpr, tpr))
    points.sort(key=lambda p: -p.alpha)
    auc = roc_auc([(p.fp_rate, p.tp_rate) for p in points])
    return RocCurve(points, auc, failures)


def degree_histogram(es) -> dict:
    """Map each degree to the number of nodes having it."""
    es = _as_edge_set(es)
    return dict(sorted(Counter(es.degrees().tolist()).items()))
