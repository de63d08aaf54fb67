"""Classification of embeddings between Lorentz sequence spaces, c0 and
ell^inf: proved inclusion constants, exact operator norms where known, and
the maximal non-compactness verdict.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DivergentSeries, InvalidArgument, UnsupportedPair
from .norms import INF, SpaceDescriptor, _inv, c0, linf, lorentz, rearrangement_bound_constant

EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not self.lo <= self.hi:
            raise InvalidArgument(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x):
        return cls(float(x), float(x))

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    def contains(self, x, slack=0.0):
        return self.lo - slack <= x <= self.hi + slack

    def __mul__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo * other.lo, self.hi * other.hi)
        return Interval(self.lo * other, self.hi * other)

    def to_dict(self):
        return {"lo": self.lo, "hi": self.hi}


class Case(str, enum.Enum):
    IDENTITY = "identity"
    SAME_P_P_LT_Q1 = "same-p:p<q1"
    SAME_P_P_GE_Q1 = "same-p:p>=q1"
    INCL_Q1_LE_P1 = "incl:q1<=p1"
    INCL_SERIES = "incl:p1<q1=inf,q2<inf"
    INCL_P1_Q1_Q2 = "incl:p1<q1<q2"
    INCL_Q1_EQ_Q2 = "incl:p1<q1=q2<inf"
    INCL_BOTH_INF = "incl:q1=q2=inf"
    INCL_VIA_WEAK = "incl:via-weak"
    INTO_C0 = "lorentz->c0"
    INTO_LINF = "lorentz->linf"
    C0_INTO_LINF = "c0->linf"
    UNCOVERED = "uncovered"


@dataclass(frozen=True)
class EmbeddingSpec:
    source: SpaceDescriptor
    target: SpaceDescriptor
    exploratory: bool = False

    @property
    def identity_trivial(self):
        return _canonical(self.source) == _canonical(self.target)

    def label(self):
        return f"{self.source.label()} -> {self.target.label()}"


@dataclass(frozen=True)
class EmbeddingVerdict:
    """Outcome of :func:`classify`.

    ``embedded`` is ``None`` when no proved case applies (tag ``uncovered``):
    the catalog does not claim non-inclusion, it only declines to extrapolate.
    """

    embedded: bool
    constant: Interval
    exact_norm: Interval
    theorem_tag: Case
    maximally_noncompact: bool = None
    maximal_tag: str = None
    alpha_upper: float = None
    attainment: str = None

    def to_dict(self):
        return {
            "embedded": self.embedded,
            "constant": None if self.constant is None else self.constant.to_dict(),
            "exact_norm": None if self.exact_norm is None else self.exact_norm.to_dict(),
            "theorem_tag": self.theorem_tag.value,
            "maximally_noncompact": self.maximally_noncompact,
            "maximal_tag": self.maximal_tag,
            "alpha_upper": self.alpha_upper,
            "attainment": self.attainment,
        }


# ---------------------------------------------------------------------------
# series constant
# ---------------------------------------------------------------------------

def zeta_bracket(s, rel_tol=1e-12, n_start=64):
    """Bracket ``[lo, hi]`` for ``sum_{n>=1} n^{-s}``, s > 1.

    Partial sum to N (compensated) plus a tail bracket from convexity of
    ``x^{-s}``: trapezoid below, midpoint above.  Both lie inside the plain
    integral bracket ``[int_{N+1}^inf, int_N^inf]``.  N doubles until
    ``hi - lo <= rel_tol * lo``; successive brackets are nested.
    """
    if not (s > 1):
        raise DivergentSeries(f"sum n^(-s) diverges for s = {s} <= 1")
    if not rel_tol > 64 * EPS:
        raise InvalidArgument(f"rel_tol must exceed {64 * EPS:.3g}")
    N = int(n_start)
    partial = 0.0
    done = 0
    while True:
        # extend the partial sum from done+1 to N; restarting the compensated
        # sum per chunk keeps results independent of chunk boundaries' history
        terms = np.power(np.arange(done + 1, N + 1, dtype=np.float64), -s)
        partial = _kernels.compensated_sum(np.concatenate(([partial], terms)))
        done = N
        tail_lo = (N + 1.0) ** (1.0 - s) / (s - 1.0) + 0.5 * (N + 1.0) ** (-s)
        tail_hi = (N + 0.5) ** (1.0 - s) / (s - 1.0)
        # rounding guard: a few ulps of the total
        guard = 8.0 * EPS * (partial + tail_hi)
        lo = partial + tail_lo - guard
        hi = partial + tail_hi + guard
        if hi - lo <= rel_tol * lo:
            return Interval(lo, hi)
        if N > 1 << 30:
            raise InvalidArgument("series bracket did not close; loosen rel_tol")
        N *= 2


def series_exponent(p1, p2, q2):
    return 1.0 + q2 * _inv(p1) - q2 * _inv(p2)


def series_norm(p1, p2, q2, rel_tol=1e-12):
    """Bracket for ``(sum_n n^{q2/p2 - q2/p1 - 1})^{1/q2}``.

    ``hi - lo <= rel_tol * lo`` holds for the returned root.
    """
    if q2 == INF or not (q2 > 0):
        raise InvalidArgument("q2 must be finite and positive")
    s = series_exponent(p1, p2, q2)
    # root contracts relative widths by 1/q2 at most when q2 >= 1, may expand otherwise
    inner_tol = rel_tol * min(1.0, q2)
    br = zeta_bracket(s, max(inner_tol, 65 * EPS))
    lo, hi = br.lo ** (1.0 / q2), br.hi ** (1.0 / q2)
    lo = math.nextafter(lo, 0.0)
    hi = math.nextafter(hi, INF)
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _canonical(s):
    """ell^{inf,inf} carries the sup norm, so it is treated as ell^inf."""
    if s.kind == "lorentz" and s.p == INF and s.q == INF:
        return linf()
    return s


def _classifiable(s):
    return s.kind in ("lorentz", "c0", "sup_space")


def _sup_alpha_upper(p, q):
    """Upper bound on alpha(ell^{p,q} -> ell^inf), or None when the bound is not below 1."""
    if q < INF and p <= q:
        sigma = 2.0 ** (1.0 - 1.0 / q) if q >= 1 else 1.0
    else:
        sigma = 1.0 + 2.0 ** (-_inv(p))
    bound = sigma / 2.0
    return bound if bound < 1.0 else None


def _uncovered():
    return EmbeddingVerdict(None, None, None, Case.UNCOVERED)


def _maximal(verdict_kwargs, target):
    """Both spaces are r.i. lattices inside c0, so the embedding is maximally non-compact."""
    verdict_kwargs["maximally_noncompact"] = True
    verdict_kwargs["maximal_tag"] = (
        "ri-lattice-in-c0" if target.kind == "lorentz" else "lorentz-into-c0"
    )
    return verdict_kwargs


def classify(spec):
    """Classify an embedding against the proved inclusion and norm results."""
    src, tgt = _canonical(spec.source), _canonical(spec.target)
    if not (_classifiable(src) and _classifiable(tgt)):
        raise UnsupportedPair(
            "classify handles lorentz, c0 and linf only; weighted_lp appears in alpha_bracket"
        )

    if src == tgt:
        one = Interval.point(1.0)
        in_c0 = src.in_c0
        return EmbeddingVerdict(
            True, one, one, Case.IDENTITY,
            maximally_noncompact=True if in_c0 else None,
            maximal_tag="ri-lattice-in-c0" if in_c0 else None,
            attainment="attained",
        )

    if src.kind == "c0":
        if tgt.kind == "sup_space":
            one = Interval.point(1.0)
            return EmbeddingVerdict(
                True, one, one, Case.C0_INTO_LINF,
                maximally_noncompact=True, maximal_tag="c0-signflip", attainment="attained",
            )
        return _uncovered()

    if src.kind == "sup_space":
        return _uncovered()

    p1, q1 = src.p, src.q
    one = Interval.point(1.0)

    if tgt.kind == "c0":
        return EmbeddingVerdict(
            True, one, one, Case.INTO_C0,
            maximally_noncompact=True, maximal_tag="lorentz-into-c0", attainment="attained",
        )

    if tgt.kind == "sup_space":
        upper = _sup_alpha_upper(p1, q1)
        return EmbeddingVerdict(
            True, one, one, Case.INTO_LINF,
            maximally_noncompact=False if upper is not None else None,
            maximal_tag="span-cover" if upper is not None else None,
            alpha_upper=upper,
            attainment="attained",
        )

    p2, q2 = tgt.p, tgt.q
    exact_allowed = q1 >= 1 and q2 >= 1

    if p1 == p2:
        p = p1
        if not q1 < q2:
            return _uncovered()
        kw = {"embedded": True}
        if p < q1:
            kw["constant"] = Interval.point((q1 / p) ** (1.0 / q1 - _inv(q2)))
            kw["theorem_tag"] = Case.SAME_P_P_LT_Q1
            if exact_allowed and q2 == INF:
                kw["exact_norm"] = kw["constant"]
                kw["attainment"] = "limit-only"
            else:
                kw["exact_norm"] = None
        else:
            kw["constant"] = one
            kw["theorem_tag"] = Case.SAME_P_P_GE_Q1
            kw["exact_norm"] = one if exact_allowed else None
            kw["attainment"] = "attained" if exact_allowed else None
        if tgt.in_c0:
            _maximal(kw, tgt)
        return EmbeddingVerdict(**kw)

    if p1 > p2:
        return _uncovered()

    # p1 < p2: collect every applicable case, keep the smallest constant.
    # The unit constant of the q1 <= p1 case needs q2 >= q1, and that of the
    # q1 >= q2 case needs q2 = q1: both bound (a_n^*)^{q2-q1} from above.
    cands = []
    if q1 <= p1 and q2 >= q1:
        cands.append((one, Case.INCL_Q1_LE_P1, one if exact_allowed else None))
    if p1 < q1 and q1 == INF and q2 < INF:
        c = series_norm(p1, p2, q2)
        cands.append((c, Case.INCL_SERIES, c if exact_allowed else None))
    if p1 < q1 < q2:
        c = Interval.point((q1 / p1) ** (1.0 / q1 - _inv(q2)))
        cands.append((c, Case.INCL_P1_Q1_Q2, None))
    if p1 < q1 < INF and q1 == q2:
        cands.append((one, Case.INCL_Q1_EQ_Q2, one if exact_allowed else None))
    if q1 == INF and q2 == INF:
        cands.append((one, Case.INCL_BOTH_INF, one if exact_allowed else None))
    if q2 < q1 < INF:
        # a_n^* <= C n^{-1/p1} ||a||_{p1,q1}, then the series bound out of ell^{p1,inf}
        C = rearrangement_bound_constant(p1, q1)
        br = series_norm(p1, p2, q2)
        c = Interval(br.lo * C, math.nextafter(br.hi * C, INF))
        cands.append((c, Case.INCL_VIA_WEAK, None))
    constant, tag, exact = min(cands, key=lambda c: c[0].hi)
    kw = {
        "embedded": True,
        "constant": constant,
        "theorem_tag": tag,
        "exact_norm": exact,
        "attainment": "attained" if exact is not None else None,
    }
    if tgt.in_c0:
        _maximal(kw, tgt)
    return EmbeddingVerdict(**kw)


def norm_lower_bound(spec, verdict=None):
    """A proved lower bound on ||I|| for an embedded spec (the e^1 ratio, or the exact value)."""
    verdict = verdict or classify(spec)
    if verdict.exact_norm is not None:
        return verdict.exact_norm.lo
    return 1.0


def parameter_grid(values=(0.5, 1.0, 2.0, 3.0, INF)):
    """Every lorentz pair over ``values`` plus the c0 / linf combinations."""
    spaces = [lorentz(p, q) for p in values for q in values] + [c0(), linf()]
    return [EmbeddingSpec(a, b) for a in spaces for b in spaces]
