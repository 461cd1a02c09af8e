"""Input validation helpers shared by the estimators and the CLI."""

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import InvalidInputError


def check_strictly_increasing(values, name="values"):
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < 2:
        raise InvalidInputError(f"{name} needs at least two entries")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be finite")
    if not np.all(np.diff(arr) > 0):
        raise InvalidInputError(f"{name} must be strictly increasing")
    return arr


def as_profile_array(X):
    """Return ``X`` as an ``(n, 3)`` float array of ``x, Re u, Im u`` columns."""
    try:
        arr = check_array(X, dtype=float, ensure_min_samples=2)
    except ValueError as exc:
        raise InvalidInputError(str(exc)) from exc
    if arr.shape[1] != 3:
        raise InvalidInputError(f"profile arrays have 3 columns (x, re_u, im_u), got {arr.shape[1]}")
    return arr


def as_spacetime_array(X):
    """Return ``X`` as an ``(n, 2)`` float array of ``x, t`` rows with ``t > 0``."""
    try:
        arr = check_array(X, dtype=float, ensure_min_samples=1)
    except ValueError as exc:
        raise InvalidInputError(str(exc)) from exc
    if arr.shape[1] != 2:
        raise InvalidInputError(f"spacetime arrays have 2 columns (x, t), got {arr.shape[1]}")
    if np.any(arr[:, 1] <= 0):
        raise InvalidInputError("all times must be positive")
    return arr


def as_1d(values, name="values"):
    arr = np.atleast_1d(np.asarray(values, dtype=float)).ravel()
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be finite")
    return arr
