"""Finitely supported real sequences, the distribution function and the
decreasing rearrangement.

Indices are 1-based in the public API (``unit_vector(1, L)`` is the first
coordinate); internally values live in a 0-based numpy array.
"""

import math

import numpy as np

from .errors import InvalidArgument


class FiniteSequence:
    """A real sequence that vanishes beyond its stored length ``L``.

    Two sequences compare equal when they agree after zero padding, so
    ``FiniteSequence([1, 0]) == FiniteSequence([1])``.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise InvalidArgument("a sequence needs at least one entry")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgument("sequence entries must be finite reals")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self):
        return self._values

    @property
    def length(self):
        return self._values.size

    def __len__(self):
        return self._values.size

    def __iter__(self):
        return iter(self._values.tolist())

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._values.copy()
        return self._values.astype(dtype)

    def __getitem__(self, n):
        return self._values[n]

    def padded(self, L):
        """Values zero-padded (never truncated) to length ``L``."""
        if L < self.length:
            if np.any(self._values[L:] != 0.0):
                raise InvalidArgument(f"sequence has support beyond index {L}")
            return self._values[:L].copy()
        out = np.zeros(L)
        out[: self.length] = self._values
        return out

    def __eq__(self, other):
        if not isinstance(other, FiniteSequence):
            return NotImplemented
        L = max(self.length, other.length)
        a = np.zeros(L)
        b = np.zeros(L)
        a[: self.length] = self._values
        b[: other.length] = other._values
        return bool(np.array_equal(a, b))

    __hash__ = None

    def tolist(self):
        return self._values.tolist()

    def __repr__(self):
        return f"{type(self).__name__}({self._values.tolist()!r})"


class Rearrangement(FiniteSequence):
    """Nonnegative, nonincreasing sequence; the output of :func:`rearrange`."""

    __slots__ = ()

    def __init__(self, values):
        super().__init__(values)
        v = self._values
        if np.any(v < 0.0) or np.any(v[1:] > v[:-1]):
            raise InvalidArgument("a rearrangement must be nonnegative and nonincreasing")


def as_sequence(a):
    if isinstance(a, FiniteSequence):
        return a
    return FiniteSequence(a)


def as_array(a):
    """Float64 view of a sequence-like input; validation identical to FiniteSequence."""
    return as_sequence(a).values


def distribution(a, omega):
    """Number of indices with ``|a_n| > omega``."""
    if not isinstance(omega, (int, float, np.floating, np.integer)) or not math.isfinite(omega):
        raise InvalidArgument("omega must be a finite real")
    if omega < 0:
        raise InvalidArgument("omega must be nonnegative")
    return int(np.count_nonzero(np.abs(as_array(a)) > omega))


def rearrange(a):
    """Decreasing rearrangement: absolute values sorted nonincreasingly."""
    v = np.abs(as_array(a))
    return Rearrangement(-np.sort(-v))


def rearranged_values(a):
    """Like :func:`rearrange` but returns a plain array (no object overhead)."""
    return -np.sort(-np.abs(np.asarray(a, dtype=np.float64)))


def unit_vector(j, L):
    if not (isinstance(j, (int, np.integer)) and isinstance(L, (int, np.integer))):
        raise InvalidArgument("j and L must be integers")
    if L < 1 or j < 1 or j > L:
        raise InvalidArgument(f"need 1 <= j <= L, got j={j}, L={L}")
    v = np.zeros(int(L))
    v[j - 1] = 1.0
    return FiniteSequence(v)


def rearrangement_by_infimum(a, n, candidates=None):
    """``inf{omega > 0 : m_a(omega) <= n - 1}`` evaluated over a finite candidate set.

    Brute-force reference for :func:`rearrange`.  The infimum is attained
    at one of the absolute values (or is 0), so the default candidates are
    ``{0} ∪ {|a_k|}``.
    """
    v = np.abs(as_array(a))
    if candidates is None:
        candidates = np.concatenate(([0.0], v))
    ok = [w for w in candidates if np.count_nonzero(v > w) <= n - 1]
    return float(min(ok))
