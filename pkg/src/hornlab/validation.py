"""Input validation helpers in the style of ``sklearn.utils.validation``."""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.utils import check_array

from .exceptions import DegenerateIndex, LengthMismatch
from .rng import RngStream

__all__ = [
    "check_random_state",
    "check_vector",
    "check_spectrum",
    "check_points",
    "check_complex_index",
    "check_integer_index",
]


def check_random_state(random_state):
    """Turn ``random_state`` into a :class:`numpy.random.Generator`.

    ``None`` gives an unseeded generator, an integer or :class:`RngStream`
    gives a fresh reproducible stream, and a generator is passed through.
    """
    if random_state is None:
        return np.random.default_rng()
    if isinstance(random_state, np.random.Generator):
        return random_state
    if isinstance(random_state, RngStream):
        return random_state.generator()
    if isinstance(random_state, numbers.Integral):
        return RngStream(int(random_state)).generator()
    raise ValueError(f"{random_state!r} cannot be used to seed a generator")


def check_vector(x, name="x", dtype=np.float64, n=None):
    x = check_array(np.atleast_1d(np.asarray(x)), ensure_2d=False, dtype=dtype,
                    input_name=name, ensure_min_samples=1)
    x = np.asarray(x).reshape(-1)
    if n is not None and x.shape[0] != n:
        raise LengthMismatch(f"{name} has length {x.shape[0]}, expected {n}")
    return x


def check_spectrum(a, name="a", strict=True):
    """1-D float array sorted in (strictly, by default) decreasing order."""
    a = check_vector(a, name=name)
    d = np.diff(a)
    if np.any(d > 0) or (strict and np.any(d == 0)):
        order = "strictly decreasing" if strict else "non-increasing"
        raise ValueError(f"{name} must be {order}")
    return a


def check_points(X, n_features, name="X"):
    """2-D float array with ``n_features`` columns; a 1-D input is one point."""
    X = np.asarray(X, dtype=float)
    if X.ndim <= 1:
        X = X.reshape(1, -1) if n_features > 0 else X.reshape(-1, 0)
    X = check_array(X, dtype=np.float64, input_name=name, ensure_min_features=0)
    if X.shape[1] != n_features:
        raise LengthMismatch(f"{name} has {X.shape[1]} columns, expected {n_features}")
    return X


def check_complex_index(s, n=None, name="s"):
    s = np.atleast_1d(np.asarray(s, dtype=complex)).reshape(-1)
    if not np.all(np.isfinite(s)):
        raise ValueError(f"{name} contains non-finite entries")
    if n is not None and s.shape[0] != n:
        raise LengthMismatch(f"{name} has length {s.shape[0]}, expected {n}")
    return s


def check_integer_index(s, n=None, name="s"):
    """Strictly decreasing integer vector labelling a U(n) irrep."""
    raw = np.atleast_1d(np.asarray(s)).reshape(-1)
    if np.iscomplexobj(raw):
        if np.any(raw.imag != 0):
            raise DegenerateIndex(f"{name} must be real integers")
        raw = raw.real
    if not np.all(np.isfinite(raw)) or np.any(np.asarray(raw, dtype=float) % 1 != 0):
        raise DegenerateIndex(f"{name} must be integers")
    s_int = np.asarray(raw, dtype=np.int64)
    if n is not None and s_int.shape[0] != n:
        raise LengthMismatch(f"{name} has length {s_int.shape[0]}, expected {n}")
    if np.any(np.diff(s_int) >= 0):
        raise DegenerateIndex(f"{name} must be strictly decreasing")
    return s_int
