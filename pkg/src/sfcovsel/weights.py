"""Degree-weight families for the scale-free degree prior.

A degree-weight function ``h`` maps a node degree to a penalty. The
regularizer only ever consumes its first differences
``diffs[k] = h(k + 1) - h(k)``, which are precomputed here.

Every family is normalised so that ``h(0) == 0`` and is checked for
tractability (non-decreasing and concave) on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .exceptions import InvalidParameterError, TractabilityError

__all__ = ["FAMILIES", "WeightSequence", "make_weights", "weight_diff"]

FAMILIES = ("log", "smoothed-log", "sqrt", "linear", "geometric")

_DEFAULTS = {
    "log": {"scale": 1.0, "eps": 1.0},
    "smoothed-log": {"scale": 1.0, "eps": 1.0, "beta": 0.0},
    "sqrt": {"scale": 1.0, "beta": 0.0},
    "linear": {"scale": 1.0},
    "geometric": {"scale": 1.0, "ratio": 0.5},
}


@dataclass(frozen=True)
class WeightSequence:
    """A tractable degree-weight function tabulated up to ``max_degree``.

    Attributes
    ----------
    family : str
        Name of the family, one of :data:`FAMILIES`.
    params : mapping
        Fully resolved family parameters (defaults filled in).
    max_degree : int
        Largest degree the table covers; ``n - 1`` for an ``n``-node problem.
    values : ndarray of shape (max_degree + 1,)
        ``h(0), ..., h(max_degree)`` with ``h(0) == 0``.
    diffs : ndarray of shape (max_degree,)
        ``h(k + 1) - h(k)``, non-negative and non-increasing.
    """

    family: str
    params: Mapping[str, float]
    max_degree: int
    values: np.ndarray = field(repr=False, compare=False)
    diffs: np.ndarray = field(repr=False, compare=False)

    def __call__(self, degree):
        """Evaluate ``h`` at an integer degree (or array of degrees)."""
        degree = np.asarray(degree)
        if np.any(degree < 0) or np.any(degree > self.max_degree):
            raise IndexError(
                f"degree outside [0, {self.max_degree}]: {degree.tolist()}")
        return self.values[degree]

    def diff(self, k: int) -> float:
        return weight_diff(self, k)

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params),
                "max_degree": self.max_degree}

    @classmethod
    def from_dict(cls, d: Mapping) -> "WeightSequence":
        return make_weights(d["family"], d.get("params"), d["max_degree"])

    def with_max_degree(self, max_degree: int) -> "WeightSequence":
        """Same family and parameters, tabulated to a different size."""
        return make_weights(self.family, self.params, max_degree)


def _resolve_params(family, params):
    if family not in _DEFAULTS:
        raise InvalidParameterError(
            f"unknown weight family {family!r}; expected one of {FAMILIES}")
    resolved = dict(_DEFAULTS[family])
    for key, value in (params or {}).items():
        if key not in resolved:
            raise InvalidParameterError(
                f"parameter {key!r} is not used by the {family!r} family")
        resolved[key] = float(value)

    if not resolved["scale"] > 0:
        raise InvalidParameterError("scale must be > 0")
    if "eps" in resolved and not resolved["eps"] > 0:
        raise InvalidParameterError("eps must be > 0")
    if "ratio" in resolved and not 0 < resolved["ratio"] < 1:
        raise InvalidParameterError("ratio must lie in (0, 1)")
    if not all(np.isfinite(v) for v in resolved.values()):
        raise InvalidParameterError("parameters must be finite")
    return resolved


def _tabulate(family, p, max_degree):
    i = np.arange(max_degree + 1, dtype=float)
    k = i[:-1]
    scale = p["scale"]
    # differences use cancellation-free closed forms rather than np.diff(h)
    if family in ("log", "smoothed-log"):
        eps = p["eps"]
        h = scale * (np.log(i + eps) - np.log(eps))
        d = scale * np.log1p(1.0 / (k + eps))
    elif family == "sqrt":
        h = scale * (np.sqrt(i + 1.0) - 1.0)
        d = scale / (np.sqrt(k + 2.0) + np.sqrt(k + 1.0))
    elif family == "linear":
        h = scale * i
        d = np.full(max_degree, scale)
    else:  # geometric
        r = p["ratio"]
        h = scale * -np.expm1(i * np.log(r))
        d = scale * (1.0 - r) * r ** k
    beta = p.get("beta", 0.0)
    if beta:
        h = h + beta * i
        d = d + beta
    h[0] = 0.0
    return h, d


def make_weights(family: str, params: Mapping[str, float] | None = None,
                 max_degree: int = 1) -> WeightSequence:
    """Build a :class:`WeightSequence`.

    Parameters
    ----------
    family : {'log', 'smoothed-log', 'sqrt', 'linear', 'geometric'}
        ``log``:          scale * (log(i + eps) - log(eps))
        ``smoothed-log``: the ``log`` family plus ``beta * i``
        ``sqrt``:         scale * (sqrt(i + 1) - 1) + beta * i
        ``linear``:       scale * i
        ``geometric``:    scale * (1 - ratio ** i)
    params : dict, optional
        Overrides for the family defaults (``scale=1``, ``eps=1``,
        ``beta=0``, ``ratio=0.5``).
    max_degree : int
        Largest degree to tabulate, at least 1.

    Raises
    ------
    InvalidParameterError
        If a parameter is out of range or unknown.
    TractabilityError
        If the resulting sequence is decreasing or not concave somewhere,
        e.g. for a too negative ``beta``.
    """
    if isinstance(max_degree, bool) or int(max_degree) != max_degree \
            or max_degree < 1:
        raise InvalidParameterError(
            f"max_degree must be a positive integer, got {max_degree!r}")
    max_degree = int(max_degree)
    p = _resolve_params(family, params)
    h, d = _tabulate(family, p, max_degree)

    tol = 1e-12 * max(1.0, float(np.max(np.abs(d))))
    if np.any(d < -tol):
        k = int(np.argmax(d < -tol))
        raise TractabilityError(
            f"{family} weights decrease at degree {k} (diff {d[k]:.3g})")
    if np.any(np.diff(d) > tol):
        k = int(np.argmax(np.diff(d) > tol))
        raise TractabilityError(f"{family} weights are not concave at {k}")
    d = np.maximum(d, 0.0)

    h.setflags(write=False)
    d.setflags(write=False)
    return WeightSequence(family, MappingProxyType(p), max_degree, h, d)


def weight_diff(w: WeightSequence, k: int) -> float:
    """Return ``h(k + 1) - h(k)`` for ``0 <= k < w.max_degree``."""
    if not 0 <= k < w.max_degree:
        raise IndexError(f"k={k} outside [0, {w.max_degree})")
    return float(w.diffs[k])
