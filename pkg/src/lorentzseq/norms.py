"""Lorentz quasi-norms, the sup norm and the weighted ell^p norm, plus the
elementary inequality audits that go with them.

All sums run over the stored support only; the zero tail contributes
nothing, so every value here is an exact finite computation up to
floating-point rounding.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidArgument
from .sequences import as_array, rearranged_values

INF = math.inf


def _inv(x):
    return 0.0 if x == INF else 1.0 / x


def _check_exponent(name, x):
    if isinstance(x, bool) or not isinstance(x, (int, float, np.integer, np.floating)):
        raise InvalidArgument(f"{name} must be a number")
    x = float(x)
    if math.isnan(x) or x <= 0:
        raise InvalidArgument(f"{name} must be positive (infinity allowed), got {x}")
    return x


@dataclass(frozen=True)
class LorentzParams:
    p: float
    q: float

    def __post_init__(self):
        object.__setattr__(self, "p", _check_exponent("p", self.p))
        object.__setattr__(self, "q", _check_exponent("q", self.q))

    @property
    def in_c0(self):
        """Whether ell^{p,q} sits inside c0, i.e. ``min(p, q) < inf``."""
        return min(self.p, self.q) < INF


KINDS = ("lorentz", "sup_space", "c0", "weighted_lp")


@dataclass(frozen=True)
class SpaceDescriptor:
    kind: str
    p: float = None
    q: float = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown space kind {self.kind!r}")
        if self.kind == "lorentz":
            params = LorentzParams(self.p, self.q)
            object.__setattr__(self, "p", params.p)
            object.__setattr__(self, "q", params.q)
        elif self.kind == "weighted_lp":
            p = _check_exponent("p", self.p)
            if not (1.0 <= p < INF):
                raise InvalidArgument("weighted_lp needs p in [1, inf)")
            object.__setattr__(self, "p", p)
            object.__setattr__(self, "q", None)
        else:
            object.__setattr__(self, "p", None)
            object.__setattr__(self, "q", None)

    @property
    def params(self):
        return LorentzParams(self.p, self.q) if self.kind == "lorentz" else None

    @property
    def is_sup_norm(self):
        """True for the spaces whose norm is the plain sup of |a_n|."""
        return self.kind in ("sup_space", "c0") or (
            self.kind == "lorentz" and self.p == INF and self.q == INF
        )

    @property
    def in_c0(self):
        if self.kind == "lorentz":
            return self.params.in_c0
        return self.kind in ("c0", "weighted_lp")

    @property
    def rearrangement_invariant(self):
        return self.kind != "weighted_lp"

    def label(self):
        if self.kind == "lorentz":
            return f"lorentz:{_fmt(self.p)},{_fmt(self.q)}"
        if self.kind == "weighted_lp":
            return f"wlp:{_fmt(self.p)}"
        return {"sup_space": "linf", "c0": "c0"}[self.kind]

    def __str__(self):
        return self.label()

    @classmethod
    def parse(cls, text):
        """Parse ``lorentz:p,q`` (``inf`` allowed), ``c0``, ``linf`` or ``wlp:p``."""
        text = text.strip().lower()
        if text == "c0":
            return c0()
        if text in ("linf", "l_inf", "sup"):
            return linf()
        head, _, rest = text.partition(":")
        try:
            if head == "lorentz":
                p, q = rest.split(",")
                return lorentz(_parse_number(p), _parse_number(q))
            if head == "wlp":
                return weighted_lp(_parse_number(rest))
        except ValueError as exc:
            raise InvalidArgument(f"cannot parse space {text!r}: {exc}") from None
        raise InvalidArgument(f"cannot parse space {text!r}")


def _parse_number(s):
    s = s.strip()
    if s in ("inf", "+inf", "infinity", "∞"):
        return INF
    if "/" in s:
        num, den = s.split("/")
        return float(num) / float(den)
    return float(s)


def _fmt(x):
    if x == INF:
        return "inf"
    return repr(float(x)).rstrip("0").rstrip(".") if float(x) != int(x) else str(int(x))


def lorentz(p, q):
    return SpaceDescriptor("lorentz", p, q)


def c0():
    return SpaceDescriptor("c0")


def linf():
    return SpaceDescriptor("sup_space")


def weighted_lp(p):
    return SpaceDescriptor("weighted_lp", p)


# ---------------------------------------------------------------------------
# norm evaluation
# ---------------------------------------------------------------------------

def _lorentz_terms(v, p, q):
    """Summands ``(v_n/v_1)^q n^{q/p-1}`` for a nonincreasing nonnegative ``v``."""
    n = np.arange(1, v.size + 1, dtype=np.float64)
    return np.power(v / v[0], q) * np.power(n, q * _inv(p) - 1.0)


def lorentz_norm_sorted(v, p, q):
    """||v||_{p,q} for ``v`` already nonnegative and nonincreasing."""
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0 or v[0] == 0.0:
        return 0.0
    if q == INF:
        n = np.arange(1, v.size + 1, dtype=np.float64)
        return float(np.max(np.power(n, _inv(p)) * v))
    # scale by v_1 so that large/small magnitudes do not overflow
    total = _kernels.compensated_sum(_lorentz_terms(v, p, q))
    return float(v[0] * total ** (1.0 / q))


def norm_sorted(v, s):
    """Norm of a nonnegative nonincreasing profile in a rearrangement-invariant space."""
    if s.kind == "lorentz":
        return lorentz_norm_sorted(v, s.p, s.q)
    if s.kind in ("sup_space", "c0"):
        return float(v[0]) if len(v) else 0.0
    raise InvalidArgument("weighted_lp is not rearrangement invariant")


def weighted_lp_norm(a, p):
    a = np.abs(np.asarray(a, dtype=np.float64))
    top = np.max(a)
    if top == 0.0:
        return 0.0
    w = np.full(a.size, 0.5)
    w[0] = 1.0
    return float(top * _kernels.compensated_sum(w * np.power(a / top, p)) ** (1.0 / p))


def norm(a, s):
    """Norm (or quasi-norm) of a finite sequence in the space ``s``."""
    a = as_array(a)
    if s.kind == "weighted_lp":
        return weighted_lp_norm(a, s.p)
    if s.kind in ("sup_space", "c0"):
        return float(np.max(np.abs(a)))
    return lorentz_norm_sorted(rearranged_values(a), s.p, s.q)


def norm_rows(Y, s):
    """Row-wise norms of a 2-D array; vectorised, for sampling loops.

    Uses numpy's pairwise summation rather than the compensated kernel;
    intended for short rows.
    """
    Y = np.asarray(Y, dtype=np.float64)
    A = np.abs(Y)
    if s.kind in ("sup_space", "c0") or s.is_sup_norm:
        return A.max(axis=1)
    if s.kind == "weighted_lp":
        w = np.full(A.shape[1], 0.5)
        w[0] = 1.0
        top = A.max(axis=1)
        safe = np.where(top > 0, top, 1.0)
        return top * np.sum(w * (A / safe[:, None]) ** s.p, axis=1) ** (1.0 / s.p)
    V = -np.sort(-A, axis=1)
    n = np.arange(1, A.shape[1] + 1, dtype=np.float64)
    if s.q == INF:
        return np.max(V * n ** _inv(s.p), axis=1)
    top = V[:, 0]
    safe = np.where(top > 0, top, 1.0)
    S = np.sum((V / safe[:, None]) ** s.q * n ** (s.q * _inv(s.p) - 1.0), axis=1)
    return top * S ** (1.0 / s.q)


def prefix_norms(v, s):
    """Norms of every prefix ``v[:n]``, n = 1..L, of a nonincreasing profile.

    O(L) via compensated prefix sums (or a running max when q = inf).
    """
    v = np.asarray(v, dtype=np.float64)
    if s.kind in ("sup_space", "c0") or s.is_sup_norm:
        return np.full(v.size, float(v[0]))
    if s.kind != "lorentz":
        raise InvalidArgument("prefix norms need a rearrangement-invariant space")
    n = np.arange(1, v.size + 1, dtype=np.float64)
    if s.q == INF:
        return np.maximum.accumulate(np.power(n, _inv(s.p)) * v)
    if v[0] == 0.0:
        return np.zeros(v.size)
    sums = _kernels.compensated_cumsum(_lorentz_terms(v, s.p, s.q))
    return v[0] * np.power(sums, 1.0 / s.q)


# ---------------------------------------------------------------------------
# inequality audits
# ---------------------------------------------------------------------------

def quasi_triangle_defect(a, b, params):
    """``2^{1/p}(||a|| + ||b||) - ||a + b||`` in ell^{p,q}.

    Nonnegative whenever p <= q, and whenever 1 <= q (the functional is then
    a norm or satisfies the 2^{1/p} bound).  For q < min(1, p) the constant
    2^{1/p} can be too small: ``(1, 1)`` in ell^{1, 0.3} gives a negative value.
    """
    s = lorentz(params.p, params.q)
    a = as_array(a)
    b = as_array(b)
    L = max(a.size, b.size)
    a = np.pad(a, (0, L - a.size))
    b = np.pad(b, (0, L - b.size))
    return 2.0 ** _inv(params.p) * (norm(a, s) + norm(b, s)) - norm(a + b, s)


def triangle_defect(a, b, params):
    """Same as :func:`quasi_triangle_defect` with constant 1 (a norm when 1 <= q <= p)."""
    s = lorentz(params.p, params.q)
    a = as_array(a)
    b = as_array(b)
    L = max(a.size, b.size)
    a = np.pad(a, (0, L - a.size))
    b = np.pad(b, (0, L - b.size))
    return norm(a, s) + norm(b, s) - norm(a + b, s)


def scalar_inequality_audit(x, y, q):
    """Defects of the two power-of-a-sum inequalities for positive ``x, y``.

    Returns ``(defect1, defect2)`` where only the one whose hypothesis on
    ``q`` holds is populated and the other is ``None``:
    ``defect1 = 2^{q-1}(x^q + y^q) - (x + y)^q`` for q >= 1 and
    ``defect2 = x^q + y^q - (x + y)^q`` for 0 < q < 1.
    """
    if not (q > 0) or not math.isfinite(q):
        raise InvalidArgument("q must be a positive finite real")
    if not (x > 0 and y > 0):
        raise InvalidArgument("x and y must be positive")
    if q >= 1:
        return 2.0 ** (q - 1.0) * (x**q + y**q) - (x + y) ** q, None
    return None, x**q + y**q - (x + y) ** q


def rearrangement_bound_constant(p, q):
    """The constant C in ``a_n^* <= C n^{-1/p} ||a||_{p,q}`` (q finite)."""
    if q == INF:
        raise InvalidArgument("the pointwise rearrangement bound needs q < inf")
    if p <= q:
        return (q / p) ** (1.0 / q)
    return 1.0


def rearrangement_bound_audit(a, params):
    """Per-index defects ``C n^{-1/p} ||a||_{p,q} - a_n^*`` over the support."""
    C = rearrangement_bound_constant(params.p, params.q)
    v = rearranged_values(as_array(a))
    nrm = lorentz_norm_sorted(v, params.p, params.q)
    n = np.arange(1, v.size + 1, dtype=np.float64)
    return C * np.power(n, -_inv(params.p)) * nrm - v
