"""Hot inner loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly, unless the environment
variable ``LORENTZSEQ_DISABLE_NUMBA`` is set to a truthy value.  The
backend can also be switched at runtime with :func:`set_backend`.

The compensated prefix sums are bit-identical across backends: both compute
the same sequential float64 partial sums and the same exact two-sum errors,
and accumulate the errors in the same order.
"""

import os

import numpy as np

try:
    import numba
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

ENV_FLAG = "LORENTZSEQ_DISABLE_NUMBA"


def _env_disables_numba():
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


_backend = "numba" if HAS_NUMBA and not _env_disables_numba() else "numpy"


def active_backend():
    return _backend


def set_backend(name):
    """Select ``"numba"``, ``"numpy"`` or ``"auto"``; returns the backend now active."""
    global _backend
    if name == "auto":
        name = "numba" if HAS_NUMBA and not _env_disables_numba() else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ValueError("numba is not importable")
    _backend = name
    return _backend


# ---------------------------------------------------------------------------
# compensated prefix sums (Neumaier)
# ---------------------------------------------------------------------------

def _np_compensated_cumsum(x):
    s = np.cumsum(x)
    prev = np.empty_like(s)
    prev[0] = 0.0
    prev[1:] = s[:-1]
    # exact error of prev + x = s (Knuth two-sum, branch free)
    bp = s - prev
    err = (prev - (s - bp)) + (x - bp)
    return s + np.cumsum(err)


def _py_compensated_cumsum(x):
    out = np.empty(x.size)
    s = 0.0
    c = 0.0
    for i in range(x.size):
        v = x[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out


def _py_pav_nonincreasing(y):
    n = y.size
    sums = np.empty(n)
    counts = np.empty(n, dtype=np.int64)
    k = -1
    for i in range(n):
        k += 1
        sums[k] = y[i]
        counts[k] = 1
        while k > 0 and sums[k - 1] / counts[k - 1] < sums[k] / counts[k]:
            sums[k - 1] += sums[k]
            counts[k - 1] += counts[k]
            k -= 1
    out = np.empty(n)
    pos = 0
    for b in range(k + 1):
        level = sums[b] / counts[b]
        for _ in range(counts[b]):
            out[pos] = level
            pos += 1
    return out


def _np_pav_nonincreasing(y):
    from scipy.optimize import isotonic_regression

    return np.asarray(isotonic_regression(y, increasing=False).x, dtype=np.float64)


def _py_greedy_indices(level, thresholds):
    out = np.full(thresholds.size, -1, dtype=np.int64)
    j = 0
    n = level.size
    for k in range(thresholds.size):
        t = thresholds[k]
        while j < n and level[j] > t:
            j += 1
        if j == n:
            return out
        out[k] = j
        j += 1
    return out


def _np_greedy_indices(level, thresholds):
    out = np.full(thresholds.size, -1, dtype=np.int64)
    n = level.size
    j = 0
    for k, t in enumerate(thresholds):
        # doubling windows keep each step proportional to the gap it skips
        width = 64
        while j < n:
            hits = np.flatnonzero(level[j:j + width] <= t)
            if hits.size:
                break
            j += width
            width *= 2
        if j >= n:
            break
        j += int(hits[0])
        out[k] = j
        j += 1
    return out


if HAS_NUMBA:
    _nb_compensated_cumsum = njit(cache=True, nogil=True)(_py_compensated_cumsum)
    _nb_pav_nonincreasing = njit(cache=True, nogil=True)(_py_pav_nonincreasing)
    _nb_greedy_indices = njit(cache=True, nogil=True)(_py_greedy_indices)


def _as_f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def compensated_cumsum(x):
    """Prefix sums of ``x`` with Neumaier compensation, in input order."""
    x = _as_f64(x)
    if x.size == 0:
        return np.zeros(0)
    if _backend == "numba":
        return _nb_compensated_cumsum(x)
    return _np_compensated_cumsum(x)


def compensated_sum(x):
    x = _as_f64(x)
    if x.size == 0:
        return 0.0
    return float(compensated_cumsum(x)[-1])


def pav_nonincreasing(y):
    """Euclidean projection of ``y`` onto nonincreasing vectors (pool adjacent violators)."""
    y = _as_f64(y)
    if y.size <= 1:
        return y.copy()
    if _backend == "numba":
        return _nb_pav_nonincreasing(y)
    return _np_pav_nonincreasing(y)


def project_monotone_cone(y):
    """Project onto {x_1 >= x_2 >= ... >= x_L >= 0}: PAV followed by clipping at zero."""
    return np.maximum(pav_nonincreasing(y), 0.0)


def greedy_indices(level, thresholds):
    """Earliest strictly increasing indices ``j_k`` with ``level[j_k] <= thresholds[k]``.

    ``thresholds`` must be nonincreasing, which makes the greedy choice optimal.
    Entries are -1 from the first ``k`` that cannot be placed.
    """
    level = _as_f64(level)
    thresholds = _as_f64(thresholds)
    if thresholds.size == 0:
        return np.zeros(0, dtype=np.int64)
    if _backend == "numba":
        return _nb_greedy_indices(level, thresholds)
    return _np_greedy_indices(level, thresholds)


def warmup():
    """Trigger JIT compilation so that timing measurements exclude it."""
    if _backend != "numba":
        return
    z = np.linspace(1.0, 0.0, 8)
    compensated_cumsum(z)
    pav_nonincreasing(z[::-1])
    greedy_indices(z, z[:2])
