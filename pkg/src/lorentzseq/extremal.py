"""Numerical lower bounds on embedding norms.

The search runs over nonnegative nonincreasing vectors of length L with
unit source norm; rearrangement invariance of both norms makes this
restriction lossless.  Two closed-form families are scanned first (block
indicators and power decay, every prefix length), then a multi-start
derivative-free refinement runs from random starts.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .catalog import Case, EmbeddingSpec, Interval, classify
from .errors import InvalidArgument, UnsupportedPair, UnsupportedStudy
from .norms import INF, _inv, norm_sorted, prefix_norms
from .sequences import Rearrangement

BLOCK = "block-indicator"
POWER = "power-decay"
REFINED = "refined-random"

# a later candidate must beat the incumbent by this relative margin to win
_WIN_MARGIN = 1e-12
_SEED_MOD = 1 << 64


@dataclass(frozen=True)
class SearchConfig:
    L: int = 1000
    restarts: int = 4
    seed: int = 0
    max_iters: int = 400
    step_tolerance: float = 1e-6

    def __post_init__(self):
        for name in ("L", "restarts", "max_iters"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise InvalidArgument(f"{name} must be a positive integer, got {v!r}")
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool):
            raise InvalidArgument("seed must be an integer")
        if not (self.step_tolerance > 0) or not math.isfinite(self.step_tolerance):
            raise InvalidArgument("step_tolerance must be a positive real")

    def with_L(self, L):
        return SearchConfig(L, self.restarts, self.seed, self.max_iters, self.step_tolerance)


@dataclass
class SearchResult:
    best_value: float
    argmax: Rearrangement
    iterations_used: int
    family_tag: str
    family_values: dict = field(default_factory=dict)

    def to_dict(self, include_argmax=True):
        d = {
            "best_value": self.best_value,
            "iterations_used": self.iterations_used,
            "family_tag": self.family_tag,
            "family_values": dict(self.family_values),
            "L": self.argmax.length,
        }
        if include_argmax:
            d["argmax"] = self.argmax.tolist()
        return d


def _check_spec(spec):
    for s in (spec.source, spec.target):
        if not s.rearrangement_invariant:
            raise UnsupportedPair("the search needs rearrangement-invariant spaces")
    if not spec.exploratory and classify(spec).theorem_tag is Case.UNCOVERED:
        raise UnsupportedPair(
            f"{spec.label()} is not covered by the catalog; pass exploratory=True to search anyway"
        )


def _profile_family(v, spec):
    """Best prefix of profile ``v``: returns (ratio, n)."""
    src = prefix_norms(v, spec.source)
    tgt = prefix_norms(v, spec.target)
    ratio = tgt / src
    n = int(np.argmax(ratio))
    return float(ratio[n]), n + 1


def _families(spec, L):
    fams = {BLOCK: np.ones(L)}
    s = spec.source
    if s.kind == "lorentz" and s.p < INF:
        fams[POWER] = np.power(np.arange(1, L + 1, dtype=np.float64), -1.0 / s.p)
    return fams


def _normalized(v, spec):
    return v / norm_sorted(v, spec.source)


def _ratio(v, spec):
    return norm_sorted(v, spec.target) / norm_sorted(v, spec.source)


def family_candidates(spec, L):
    """Closed-form family scan.  Returns ``{tag: (value, argmax_array)}``."""
    out = {}
    for tag, v in _families(spec, L).items():
        _, n = _profile_family(v, spec)
        x = np.zeros(L)
        x[:n] = v[:n]
        x = _normalized(x, spec)
        out[tag] = (_ratio(x, spec), x)
    return out


def family_extremal(spec, L):
    """Best closed-form family element at truncation L (no random refinement)."""
    best_tag, best_val, best_x = None, -1.0, None
    for tag, (val, x) in family_candidates(spec, L).items():
        if val > best_val * (1.0 + _WIN_MARGIN):
            best_tag, best_val, best_x = tag, val, x
    return best_tag, best_val, best_x


def _random_start(rng, L, spec):
    x = -np.sort(-np.abs(rng.standard_normal(L)))
    return _normalized(x, spec)


def _refine(spec, cfg, restart):
    """One restart of the block-scaling local search.  Returns (value, x, proposals)."""
    rng = np.random.default_rng((cfg.seed + restart) % _SEED_MOD)
    L = cfg.L
    x = _random_start(rng, L, spec)
    val = _ratio(x, spec)
    step = 0.5
    used = 0
    stagnant = 0
    batch = 8
    while used < cfg.max_iters:
        best_y, best_v = None, val
        for _ in range(min(batch, cfg.max_iters - used)):
            used += 1
            i = int(rng.integers(L))
            width = max(1, int(L ** rng.random()))
            j = min(L, i + width)
            factor = math.exp(step if rng.random() < 0.5 else -step)
            y = x.copy()
            y[i:j] *= factor
            y = _kernels.project_monotone_cone(y)
            if y[0] <= 0.0:
                continue
            v = _ratio(y, spec)
            if v > best_v:
                best_y, best_v = y, v
        if best_y is not None and best_v - val > cfg.step_tolerance * val:
            x, val = _normalized(best_y, spec), best_v
            stagnant = 0
        else:
            if best_y is not None:
                x, val = _normalized(best_y, spec), best_v
            step *= 0.5
            stagnant += 1
            if stagnant >= 4:
                break
    return val, x, used


def estimate_operator_norm(spec, cfg, workers=1, warm_start=None):
    """Lower bound on ||I|| at truncation ``cfg.L``.

    ``warm_start`` (a feasible profile of length <= L, zero padded) is
    scored alongside the families; :func:`convergence_study` uses it to
    carry the previous optimum forward so results are monotone in L.
    ``workers`` parallelises restarts without changing the result.
    """
    if not isinstance(spec, EmbeddingSpec):
        raise InvalidArgument("spec must be an EmbeddingSpec")
    _check_spec(spec)
    L = cfg.L
    fam = family_candidates(spec, L)
    best_tag, best_val, best_x = None, -1.0, None
    for tag, (val, x) in fam.items():
        if val > best_val * (1.0 + _WIN_MARGIN):
            best_tag, best_val, best_x = tag, val, x
    values = {tag: val for tag, (val, _) in fam.items()}

    if warm_start is not None:
        w = np.zeros(L)
        ws = np.asarray(warm_start, dtype=np.float64)
        w[: ws.size] = ws
        wv = _ratio(w, spec)
        if wv > best_val * (1.0 + _WIN_MARGIN):
            best_tag, best_val, best_x = REFINED, wv, _normalized(w, spec)

    restarts = range(cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            runs = list(pool.map(lambda r: _refine(spec, cfg, r), restarts))
    else:
        runs = [_refine(spec, cfg, r) for r in restarts]
    iters = sum(r[2] for r in runs)
    # ties go to the lowest restart index
    r_val, r_x = -1.0, None
    for val, x, _ in runs:
        if val > r_val:
            r_val, r_x = val, x
    values[REFINED] = r_val
    if r_val > best_val * (1.0 + _WIN_MARGIN):
        best_tag, best_val, best_x = REFINED, r_val, r_x

    argmax = Rearrangement(best_x)
    return SearchResult(_ratio(best_x, spec), argmax, iters, best_tag, values)


def riemann_ratio(n, p, q):
    """``n^{1/p} / (sum_{i<=n} i^{q/p-1})^{1/q}``: ratio of the ell^{p,inf} and
    ell^{p,q} norms of the length-n block indicator.

    Computed as ``((1/n) sum (i/n)^{q/p-1})^{-1/q}`` so no term overflows.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidArgument("n must be a positive integer")
    if not (0 < p < q < INF):
        raise InvalidArgument("need 0 < p < q < inf")
    e = q / p - 1.0
    i = np.arange(1, n + 1, dtype=np.float64)
    mean = _kernels.compensated_sum(np.power(i / n, e)) / n
    return float(mean ** (-1.0 / q))


@dataclass(frozen=True)
class ConvergenceRow:
    L: int
    best_value: float
    oracle_lo: float
    oracle_hi: float
    gap: float
    family_tag: str

    def as_tuple(self):
        return (self.L, self.best_value, self.oracle_lo, self.oracle_hi, self.gap, self.family_tag)


CSV_HEADER = ("L", "best_value", "oracle_lo", "oracle_hi", "gap", "family_tag")


def convergence_study(spec, L_values, cfg):
    """Best value at each truncation next to the exact norm; gap = oracle_hi - best."""
    verdict = classify(spec)
    if verdict.exact_norm is None:
        raise UnsupportedStudy(f"no exact norm is known for {spec.label()}")
    oracle = verdict.exact_norm
    rows = []
    prev = None
    for L in sorted(int(v) for v in L_values):
        res = estimate_operator_norm(spec, cfg.with_L(L), warm_start=prev)
        prev = res.argmax.values
        rows.append(
            ConvergenceRow(L, res.best_value, oracle.lo, oracle.hi,
                           oracle.hi - res.best_value, res.family_tag)
        )
    return rows


def riemann_limit(p, q):
    return Interval.point((q / p) ** (1.0 / q))
