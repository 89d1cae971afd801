"""Input validation helpers shared by the numerical modules and estimators."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils import check_array

__all__ = [
    "DimensionError",
    "PairingError",
    "check_random_state",
    "check_spectrum",
    "check_spectra",
    "check_square",
    "check_symmetric",
    "check_rotation",
]


class DimensionError(ValueError):
    """Raised when array sizes do not agree."""


class PairingError(RuntimeError):
    """Raised when a spectrum that must come in equal pairs does not."""


def check_random_state(seed):
    """Turn ``seed`` into a :class:`numpy.random.Generator`.

    ``None`` gives fresh OS entropy, an int or a sequence of ints seeds a new
    generator, and an existing generator is passed through unchanged.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (numbers.Integral, np.integer)):
        return np.random.default_rng(seed)
    if isinstance(seed, (list, tuple)):
        return np.random.default_rng(list(seed))
    raise TypeError(f"{seed!r} cannot be used to seed a Generator")


def check_spectrum(values, *, length=None, name="spectrum", descending=True):
    """Validate a 1-D spectrum and return it as a float array."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {x.shape}")
    if length is not None and x.shape[0] != length:
        raise DimensionError(f"{name} must have length {length}, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    if descending and np.any(np.diff(x) > 0):
        raise ValueError(f"{name} must be in descending order")
    return x


def check_spectra(X, *, n_features=None, name="X"):
    """Validate a 2-D stack of spectra, one per row."""
    X = check_array(X, dtype=float, ensure_2d=True)
    if n_features is not None and X.shape[1] != n_features:
        raise DimensionError(
            f"{name} has {X.shape[1]} columns, expected {n_features}")
    return X


def check_square(M, *, name="matrix"):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


def check_symmetric(S, *, name="matrix"):
    """Return ``(S + S.T) / 2`` after checking ``S`` is close to symmetric.

    The symmetrized copy is exactly symmetric, which the eigensolver relies
    on.
    """
    S = check_square(S, name=name)
    scale = max(1.0, float(np.abs(S).max(initial=0.0)))
    if np.abs(S - S.T).max(initial=0.0) > 1e-10 * scale:
        raise ValueError(f"{name} is not symmetric")
    return 0.5 * (S + S.T)


def check_rotation(R, *, atol=1e-12, name="rotation"):
    R = check_square(R, name=name)
    n = R.shape[0]
    if np.abs(R.T @ R - np.eye(n)).max() > atol:
        raise ValueError(f"{name} is not orthogonal")
    if abs(np.linalg.det(R) - 1.0) > 1e-9:
        raise ValueError(f"{name} has determinant {np.linalg.det(R):.3g}, not +1")
    return R
