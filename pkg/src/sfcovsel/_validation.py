"""Input validation helpers shared by the solvers and estimators."""
import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import InvalidParameterError, NotSymmetricError

SYMMETRY_TOL = 1e-12


def check_symmetric_matrix(X, name="X", tol=SYMMETRY_TOL, copy=False):
    """Return ``X`` as a finite, square, symmetric float array.

    Asymmetry is measured as ``max|X - X.T|`` relative to ``max(1, max|X|)``.
    """
    X = check_array(X, dtype=np.float64, copy=copy, ensure_2d=True,
                    ensure_min_samples=1, ensure_min_features=1,
                    input_name=name)
    if X.shape[0] != X.shape[1]:
        raise NotSymmetricError(f"{name} must be square, got {X.shape}")
    scale = max(1.0, float(np.max(np.abs(X))))
    if np.max(np.abs(X - X.T)) > tol * scale:
        raise NotSymmetricError(
            f"{name} is not symmetric (max asymmetry "
            f"{np.max(np.abs(X - X.T)):.3g})")
    return X


def check_covariance(C, name="C"):
    """Symmetric with a strictly positive diagonal."""
    C = check_symmetric_matrix(C, name=name, tol=1e-10)
    if np.any(np.diag(C) <= 0):
        raise InvalidParameterError(f"{name} must have a positive diagonal")
    return C


def check_positive(value, name, strict=True):
    value = float(value)
    if not np.isfinite(value) or (value <= 0 if strict else value < 0):
        bound = "> 0" if strict else ">= 0"
        raise InvalidParameterError(f"{name} must be finite and {bound}, "
                                    f"got {value!r}")
    return value


def check_positive_int(value, name):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InvalidParameterError(
            f"{name} must be a positive integer, got {value!r}")
    return int(value)
