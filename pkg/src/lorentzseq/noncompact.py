"""Finite-truncation evidence about the ball measure of non-compactness.

Upper bounds come from explicit covers (constant-sequence covers of the
unit ball inside ell^inf, and the weighted-ell^p example), checked by
sampling.  Lower-bound evidence comes from witnesses: points of the unit
ball that sit outside every ball of a proposed cover.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .catalog import Case, EmbeddingSpec, classify, norm_lower_bound
from .errors import (
    CoverRefuted,
    HypothesisViolation,
    Infeasible,
    InvalidArgument,
    InvariantBreach,
    TruncationTooSmall,
    UnsupportedPair,
)
from .extremal import family_extremal
from .norms import INF, _inv, linf, lorentz, norm, norm_rows, weighted_lp
from .sequences import FiniteSequence, as_sequence, rearranged_values

CHUNK = 2048


# ---------------------------------------------------------------------------
# span
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpanBound:
    value: float
    source_case: str
    realizer: tuple = None

    def to_dict(self):
        return {"value": self.value, "source_case": self.source_case,
                "realizer": None if self.realizer is None else list(self.realizer)}


def span_upper_bound(s):
    """Proved upper bound on sup over the unit ball of (sup y - inf y)."""
    if s.kind == "c0":
        return SpanBound(2.0, "c0", (1.0, -1.0))
    if s.kind != "lorentz" or not s.in_c0:
        raise UnsupportedPair(f"no span bound for {s.label()}")
    p, q = s.p, s.q
    if q < INF and p <= q:
        if q >= 1:
            return SpanBound(2.0 ** (1.0 - 1.0 / q), "q>=1,p<=q")
        return SpanBound(1.0, "q<1,p<=q")
    return SpanBound(1.0 + 2.0 ** (-_inv(p)), "q=inf" if q == INF else "q<p")


def _rng(seed, chunk):
    return np.random.default_rng([int(seed) % (1 << 64), chunk])


def sample_unit_sphere(s, L, n, rng):
    """``n`` rows on the unit sphere of ``s`` at truncation ``L``.

    Each row: a decreasing profile of sorted absolute normals on a support
    of log-uniform size, random signs, random permutation, then divided by
    its source norm.
    """
    k = np.maximum(1, (L ** rng.random(n)).astype(np.int64))
    k = np.minimum(k, L)
    prof = -np.sort(-np.abs(rng.standard_normal((n, L))), axis=1)
    prof[np.arange(L)[None, :] >= k[:, None]] = 0.0
    signs = rng.choice(np.array([-1.0, 1.0]), size=(n, L))
    Y = rng.permuted(prof * signs, axis=1)
    nrm = norm_rows(Y, s)
    return Y / nrm[:, None]


def _probe_rows(s, L):
    """Deterministic extreme points: +-e^1 and two-spike rows (1, -t)."""
    rows = [np.eye(1, L, 0)[0], -np.eye(1, L, 0)[0]]
    if L >= 2:
        for t in np.linspace(0.0, 1.0, 65):
            r = np.zeros(L)
            r[0], r[1] = 1.0, -t
            rows.append(r)
    Y = np.array(rows)
    return Y / norm_rows(Y, s)[:, None]


def span_estimate(s, L, samples, seed):
    """Sampled lower estimate of the span over the first L coordinates."""
    if L < 1 or samples < 0:
        raise InvalidArgument("L must be >= 1 and samples >= 0")
    best = float(np.max(np.ptp(_probe_rows(s, L), axis=1)))
    for c, start in enumerate(range(0, samples, CHUNK)):
        Y = sample_unit_sphere(s, L, min(CHUNK, samples - start), _rng(seed, c))
        best = max(best, float(np.max(np.ptp(Y, axis=1))))
    return best


# ---------------------------------------------------------------------------
# covers
# ---------------------------------------------------------------------------

@dataclass
class CoverCertificate:
    """Finite cover of the image of the unit ball.

    ``verification`` is ``"unverified"`` until :func:`verify_cover` has run;
    afterwards ``"sampled"``: evidence, not proof.
    """

    centers: list
    radius: float
    m: int
    L: int
    target: object
    samples_checked: int = 0
    max_observed_distance: float = 0.0
    levels: list = None
    sigma: float = None
    paper_case: str = "constant-cover"
    verification: str = "unverified"

    def to_dict(self):
        return {
            "centers": [c.tolist() for c in self.centers],
            "levels": self.levels,
            "radius": self.radius,
            "m": self.m,
            "L": self.L,
            "sigma": self.sigma,
            "target": self.target.label(),
            "samples_checked": self.samples_checked,
            "max_observed_distance": self.max_observed_distance,
            "verification": self.verification,
            "paper_case": self.paper_case,
        }


def _embedding_norm_into_linf(s):
    # sup|a_n| <= ||a|| for every lorentz space and c0, attained at e^1
    return 1.0


def minimal_cover_m(sigma, rho):
    """Smallest m >= 1 with (1 + 1/m) sigma / 2 < rho."""
    if not rho > sigma / 2.0:
        raise Infeasible("need rho > sigma/2")
    m = max(1, int(math.floor(sigma / (2.0 * rho - sigma))) + 1)
    while m > 1 and (1.0 + 1.0 / (m - 1)) * sigma / 2.0 < rho:
        m -= 1
    while not (1.0 + 1.0 / m) * sigma / 2.0 < rho:
        m += 1
    return m


def build_constant_cover(s, rho, L):
    """Cover of the unit ball of ``s`` in ell^inf by 2m+1 constant sequences."""
    if not (rho > 0) or not math.isfinite(rho):
        raise InvalidArgument("rho must be a positive real")
    if L < 1:
        raise InvalidArgument("L must be >= 1")
    bound = span_upper_bound(s)
    sigma = bound.value
    op_norm = _embedding_norm_into_linf(s)
    if not (op_norm <= sigma < 2.0 * op_norm):
        raise HypothesisViolation(
            f"need ||I|| <= sigma < 2||I||; sigma = {sigma} for {s.label()}"
        )
    if rho >= op_norm:
        center = FiniteSequence(np.zeros(L))
        return CoverCertificate([center], float(rho), 0, L, linf(), levels=[0.0],
                                sigma=sigma, paper_case="trivial-single-ball")
    if rho <= sigma / 2.0:
        raise Infeasible(f"rho = {rho} <= sigma/2 = {sigma / 2}: the construction gives no cover")
    m = minimal_cover_m(sigma, rho)
    levels = [sigma * k / (2.0 * m) for k in range(-m, m + 1)]
    centers = [FiniteSequence(np.full(L, lv)) for lv in levels]
    return CoverCertificate(centers, float(rho), m, L, linf(), levels=levels, sigma=sigma)


def _constant_level(center):
    v = center.values
    return float(v[0]) if np.all(v == v[0]) else None


def cover_distances(Y, cert):
    """Distance from each row of ``Y`` to its nearest center, in the target norm.

    For ell^inf targets the rows are read as zero beyond L, so the zero tail
    counts against constant centers.
    """
    L = cert.L
    if cert.target.kind in ("sup_space", "c0") or cert.target.is_sup_norm:
        levels = [_constant_level(c) for c in cert.centers]
        if all(lv is not None for lv in levels) and all(c.length >= L for c in cert.centers):
            lam = np.array(levels)
            hi = np.maximum(Y.max(axis=1), 0.0)
            lo = np.minimum(Y.min(axis=1), 0.0)
            D = np.maximum(hi[:, None] - lam[None, :], lam[None, :] - lo[:, None])
            return D.min(axis=1)
    best = np.full(Y.shape[0], INF)
    for c in cert.centers:
        C = c.padded(max(L, c.length))
        Yp = Y if C.size == L else np.pad(Y, ((0, 0), (0, C.size - L)))
        best = np.minimum(best, norm_rows(Yp - C[None, :], cert.target))
    return best


def verify_cover(cert, s, samples, seed):
    """Sample the unit sphere of ``s`` and check every point is covered.

    Returns an updated certificate; raises :class:`CoverRefuted` carrying
    the offending sample when some point is farther than the radius from
    every center.
    """
    if samples < 0:
        raise InvalidArgument("samples must be >= 0")
    worst = 0.0
    checked = 0
    batches = [_probe_rows(s, cert.L)]
    zero = np.zeros((1, cert.L))
    batches.insert(0, zero)
    for c, start in enumerate(range(0, samples, CHUNK)):
        batches.append(sample_unit_sphere(s, cert.L, min(CHUNK, samples - start), _rng(seed, c)))
    for Y in batches:
        d = cover_distances(Y, cert)
        checked += Y.shape[0]
        i = int(np.argmax(d))
        worst = max(worst, float(d[i]))
        if d[i] > cert.radius:
            raise CoverRefuted(
                f"sample at distance {d[i]:.17g} > radius {cert.radius:.17g}",
                sample=Y[i].copy(), distance=float(d[i]), radius=cert.radius,
            )
    cert.samples_checked = checked
    cert.max_observed_distance = worst
    cert.verification = "sampled"
    return cert


def weighted_example_cover(p, L):
    """The five-ball cover {0, +-e^1, +-(1/2)^{1/p} e^1} with radius (1/2)^{1/p}."""
    r = 0.5 ** (1.0 / p)
    e1 = np.eye(1, L, 0)[0]
    levels = [0.0, 1.0, -1.0, r, -r]
    centers = [FiniteSequence(t * e1) for t in levels]
    return CoverCertificate(centers, r, None, L, weighted_lp(p), levels=levels,
                            paper_case="weighted-example-five-balls")


def weighted_grid_cover(p, L, slack=1e-2):
    """Cover of B_{ell^p} in the weighted norm with radius (1/2)^{1/p}(1 + slack).

    Centers t e^1 on a grid over [-1, 1] with half-spacing eta^{1/p},
    eta = r^p - 1/2: then ||x - t e^1||_w^p <= eta + (1 - |x_1|^p)/2 <= r^p.
    """
    if not slack > 0:
        raise InvalidArgument("slack must be positive")
    r = 0.5 ** (1.0 / p) * (1.0 + slack)
    half = (r**p - 0.5) ** (1.0 / p)
    count = int(math.ceil(1.0 / half))
    levels = [-1.0 + half * (2 * k + 1) for k in range(count)]
    e1 = np.eye(1, L, 0)[0]
    centers = [FiniteSequence(t * e1) for t in levels]
    return CoverCertificate(centers, r, None, L, weighted_lp(p), levels=levels,
                            paper_case="weighted-grid")


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

@dataclass
class WitnessReport:
    witness: FiniteSequence
    min_distance_to_centers: float
    construction: str
    refuted_radius: float
    source_norm: float
    parameters: dict = field(default_factory=dict)
    degenerate: bool = False
    paper_case: str = None

    def to_dict(self):
        return {
            "witness": self.witness.tolist(),
            "min_distance_to_centers": self.min_distance_to_centers,
            "construction": self.construction,
            "refuted_radius": self.refuted_radius,
            "source_norm": self.source_norm,
            "parameters": self.parameters,
            "degenerate": self.degenerate,
            "paper_case": self.paper_case,
        }


def _as_centers(centers):
    return [as_sequence(c) for c in centers]


def spread_witness(centers, s_source, s_target, rho, lam=0.5, x=None, L=None):
    """Spread the rearrangement of ``x`` over indices where every center is small.

    Index ``j_k`` is the earliest one after ``j_{k-1}`` with
    ``|y^i_{j_k}| <= lam * x_k^*`` for all centers; the witness carries
    ``x_k^*`` at ``j_k``.  When ``(1 - lam) ||x||_target > rho`` the witness
    is farther than ``rho`` from every center.
    """
    for s in (s_source, s_target):
        if s.kind not in ("lorentz", "c0") or not s.in_c0:
            raise HypothesisViolation(
                f"{s.label()}: the spread construction needs r.i. lattices inside c0"
            )
    if not (0.0 < lam < 1.0):
        raise InvalidArgument("lam must lie in (0, 1)")
    if not (rho > 0):
        raise InvalidArgument("rho must be positive")
    centers = _as_centers(centers)
    if L is None:
        L = max([c.length for c in centers] + [1])
    if x is None:
        spec = EmbeddingSpec(s_source, s_target)
        _, _, xv = family_extremal(spec, min(L, 64))
        x = FiniteSequence(xv)
    x = as_sequence(x)
    src_norm = norm(x, s_source)
    if src_norm > 1.0 + 1e-9:
        raise InvalidArgument(f"x must lie in the source unit ball, has norm {src_norm}")
    tgt_norm = norm(x, s_target)
    if not (1.0 - lam) * tgt_norm > rho:
        raise HypothesisViolation(
            f"(1 - lam) ||x||_target = {(1.0 - lam) * tgt_norm} does not exceed rho = {rho}"
        )
    xs = rearranged_values(x.values)
    xs = xs[xs > 0.0]
    if centers:
        level = np.max(np.abs(np.array([c.padded(L) for c in centers])), axis=0)
    else:
        level = np.zeros(L)
    idx = _kernels.greedy_indices(level, lam * xs)
    if idx.size and idx[-1] < 0:
        placed = int(np.count_nonzero(idx >= 0))
        raise TruncationTooSmall(
            f"only {placed} of {xs.size} entries find admissible indices below L = {L}"
        )
    a = np.zeros(L)
    a[idx] = xs
    witness = FiniteSequence(a)
    if centers:
        dmin = min(norm(a - c.padded(L), s_target) for c in centers)
    else:
        dmin = INF
    if not dmin > rho:
        raise InvariantBreach(f"spread witness at distance {dmin} <= rho = {rho}")
    return WitnessReport(
        witness, float(dmin), "spread", float(rho), norm(witness, s_source),
        parameters={"lambda": lam, "indices": (idx + 1).tolist()},
        paper_case="ri-lattice-in-c0",
    )


def signflip_witness(centers, rho):
    """Sign choice against the diagonal: a_j = 1 if (y^j)_j < 0 else -1, j <= m."""
    if not (0.0 < rho < 1.0):
        if rho >= 1.0:
            raise HypothesisViolation("rho must be below ||I|| = 1")
        raise InvalidArgument("rho must be positive")
    centers = _as_centers(centers)
    m = len(centers)
    if m == 0:
        return WitnessReport(FiniteSequence([0.0]), INF, "signflip", float(rho), 0.0,
                             parameters={"m": 0}, degenerate=True, paper_case="c0-signflip")
    diag = np.array([c.values[j] if j < c.length else 0.0 for j, c in enumerate(centers)])
    a = np.where(diag < 0.0, 1.0, -1.0)
    L = max([m] + [c.length for c in centers])
    ap = np.zeros(L)
    ap[:m] = a
    dmin = min(float(np.max(np.abs(ap - c.padded(L)))) for c in centers)
    if not dmin > rho:
        raise InvariantBreach(f"sign-flip witness at distance {dmin} <= rho = {rho}")
    return WitnessReport(FiniteSequence(a), dmin, "signflip", float(rho),
                         float(np.max(np.abs(a))), parameters={"m": m},
                         paper_case="c0-signflip")


# ---------------------------------------------------------------------------
# alpha brackets
# ---------------------------------------------------------------------------

@dataclass
class AlphaBracket:
    lo: float
    hi: float
    maximal: bool
    tag: str
    evidence: dict = None

    def to_dict(self):
        return {"lo": self.lo, "hi": self.hi, "maximal": self.maximal,
                "tag": self.tag, "evidence": self.evidence}


def _is_weighted_example(spec):
    s, t = spec.source, spec.target
    return (t.kind == "weighted_lp" and s.kind == "lorentz"
            and s.p == s.q == t.p)


def alpha_bracket(spec, L=64, samples=0, seed=0):
    """Interval containing alpha(I), with ``0 <= lo <= hi <= ||I||``.

    With ``samples > 0`` the cover behind an upper bound is checked by
    sampling at truncation L and the statistics go into ``evidence``.
    """
    if _is_weighted_example(spec):
        p = spec.target.p
        hi = 0.5 ** (1.0 / p)
        evidence = None
        if samples:
            cert = verify_cover(weighted_grid_cover(p, L), spec.source, samples, seed)
            evidence = cert.to_dict()
            evidence.pop("centers")
        return AlphaBracket(0.0, hi, False, "weighted-example", evidence)

    verdict = classify(spec)
    if verdict.theorem_tag is Case.UNCOVERED:
        raise UnsupportedPair(f"{spec.label()} is not classified")
    norm_hi = (verdict.exact_norm or verdict.constant).hi
    if verdict.maximally_noncompact:
        lo = norm_lower_bound(spec, verdict)
        return AlphaBracket(lo, norm_hi, True, verdict.maximal_tag)
    hi = norm_hi
    evidence = None
    if verdict.alpha_upper is not None:
        hi = min(hi, verdict.alpha_upper)
        if samples:
            sigma = 2.0 * verdict.alpha_upper
            rho = min(0.5 * (sigma / 2.0 + 1.0), sigma / 2.0 * 1.01)
            cert = verify_cover(build_constant_cover(spec.source, rho, L), spec.source,
                                samples, seed)
            evidence = cert.to_dict()
            evidence.pop("centers")
    return AlphaBracket(0.0, hi, verdict.maximally_noncompact, verdict.maximal_tag or "norm",
                        evidence)
