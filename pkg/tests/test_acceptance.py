"""Acceptance criteria 1-10, one test (or group) per criterion.

The terminal summary prints one PASS/FAIL line per criterion.
"""

import itertools
import math
import time

import numpy as np
import pytest

from lorentzseq import (
    CoverRefuted,
    EmbeddingSpec,
    Interval,
    SearchConfig,
    UnsupportedPair,
    alpha_bracket,
    build_constant_cover,
    classify,
    estimate_operator_norm,
    lorentz,
    norm,
    riemann_ratio,
    series_norm,
    signflip_witness,
    spread_witness,
    unit_vector,
    verify_cover,
    weighted_lp,
)
from lorentzseq.catalog import parameter_grid
from lorentzseq.extremal import BLOCK, POWER, family_extremal
from lorentzseq.noncompact import sample_unit_sphere, weighted_example_cover

INF = math.inf
SQRT2 = math.sqrt(2)
ZETA2_ROOT = math.pi / math.sqrt(6)


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


# 1 ---------------------------------------------------------------------------

EXPS = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, INF]


def _unit_norm_grids():
    """20 points per unit-norm case, drawn from the stated hypotheses (q1, q2 >= 1)."""
    combos = list(itertools.product(EXPS, repeat=4))
    cases = {
        "q1<=p1, p1<p2": [c for c in combos if c[1] <= c[0] and c[0] < c[2]],
        "q1<=p1, p1=p2": [c for c in combos if c[1] <= c[0] and c[0] == c[2]],
        "p1<q1<inf, q1>=q2, p1<p2": [c for c in combos if c[0] < c[1] < INF and c[1] >= c[3] and c[0] < c[2]],
        "q1=q2=inf, p1<p2": [c for c in combos if c[1] == c[3] == INF and c[0] < c[2]],
    }
    rng = np.random.default_rng(2024)
    out = {}
    for name, pts in cases.items():
        idx = rng.choice(len(pts), size=min(20, len(pts)), replace=False)
        out[name] = [pts[i] for i in sorted(idx)]
    return out


GRIDS = _unit_norm_grids()


@pytest.mark.criterion_1
@pytest.mark.parametrize("case", list(GRIDS))
def test_c1_exact_norm_one(case):
    t0 = time.perf_counter()
    wrong = []
    for p1, q1, p2, q2 in GRIDS[case]:
        v = classify(EmbeddingSpec(lorentz(p1, q1), lorentz(p2, q2)))
        if v.exact_norm != Interval.point(1.0):
            wrong.append(((p1, q1, p2, q2), v.theorem_tag.value))
    elapsed = time.perf_counter() - t0
    assert len(GRIDS[case]) == 20 or case.startswith("q1=q2=inf")
    if wrong:
        # attach a finite-vector lower bound on ||I|| for each rejected point
        detail = []
        for pt, tag in wrong:
            sp = EmbeddingSpec(lorentz(pt[0], pt[1]), lorentz(pt[2], pt[3]))
            detail.append((pt, tag, round(family_extremal(sp, 2000)[1], 4)))
        pytest.fail(f"{len(wrong)}/{len(GRIDS[case])} points without exact norm 1 "
                    f"(point, tag, lower bound on ||I||): {detail}")
    assert elapsed < 1.0


# 2 ---------------------------------------------------------------------------

@pytest.mark.criterion_2
def test_c2_riemann_limit():
    t0 = time.perf_counter()
    for n in (1, 10, 1_000, 1_000_000):
        closed = n / math.sqrt(n * (n + 1) / 2)
        assert math.isclose(riemann_ratio(n, 1, 2), closed, rel_tol=1e-12)
    assert abs(riemann_ratio(1_000_000, 1, 2) - SQRT2) < 1e-5 * SQRT2
    assert time.perf_counter() - t0 < 1.0


@pytest.mark.criterion_2
def test_c2_direct_summation_cross_check():
    n = 1_000_000
    block = np.ones(n)
    ratio, elapsed = timed(lambda: norm(block, lorentz(1, INF)) / norm(block, lorentz(1, 2)))
    assert math.isclose(ratio, n / math.sqrt(n * (n + 1) / 2), rel_tol=1e-12)
    assert elapsed < 30.0


# 3 ---------------------------------------------------------------------------

@pytest.mark.criterion_3
def test_c3_series_norm():
    br, elapsed = timed(series_norm, 1, 2, 2, rel_tol=1e-8)
    assert br.lo <= ZETA2_ROOT <= br.hi
    assert br.hi - br.lo <= 1e-8 * br.lo
    assert math.isclose(br.mid, 1.282549830, rel_tol=1e-9)
    assert elapsed < 5.0


# 4 ---------------------------------------------------------------------------

@pytest.mark.criterion_4
def test_c4_weak_target_block_family():
    spec = EmbeddingSpec(lorentz(1, 2), lorentz(1, INF))
    res, elapsed = timed(estimate_operator_norm, spec, SearchConfig(L=10_000))
    assert SQRT2 * (1 - 0.02) <= res.best_value <= SQRT2
    assert res.family_tag == BLOCK
    assert elapsed < 60.0


@pytest.mark.criterion_4
def test_c4_series_power_family():
    spec = EmbeddingSpec(lorentz(1, INF), lorentz(2, 2))
    res, elapsed = timed(estimate_operator_norm, spec, SearchConfig(L=100_000))
    br = series_norm(1, 2, 2)
    assert abs(res.best_value - br.mid) <= 0.01 * br.mid
    assert res.best_value <= br.hi
    assert res.family_tag == POWER
    assert elapsed < 60.0


# 5 ---------------------------------------------------------------------------

@pytest.mark.criterion_5
def test_c5_cover_soundness():
    t0 = time.perf_counter()
    s = lorentz(1, 2)
    cert = build_constant_cover(s, 0.75, 64)
    sigma = 2 ** (1 - 1 / 2)
    assert cert.m == 17
    assert (1 + 1 / cert.m) * sigma / 2 < 0.75
    assert not (1 + 1 / (cert.m - 1)) * sigma / 2 < 0.75
    cert = verify_cover(cert, s, 10_000, 7)
    assert cert.max_observed_distance <= 0.75
    assert 0.75 > 2 ** -0.5
    assert time.perf_counter() - t0 < 30.0


# 6 ---------------------------------------------------------------------------

@pytest.mark.criterion_6
def test_c6_weighted_norm_of_e2():
    assert norm(unit_vector(2, 64), weighted_lp(2)) == 0.5 ** 0.5


@pytest.mark.criterion_6
def test_c6_weighted_five_ball_cover():
    t0 = time.perf_counter()
    cert = weighted_example_cover(2.0, 64)
    assert cert.radius == 0.5 ** 0.5 and len(cert.centers) == 5
    try:
        verify_cover(cert, lorentz(2, 2), 10_000, 0)
    except CoverRefuted as exc:
        pytest.fail(f"five-ball cover refuted: sample at distance {exc.distance:.6f} "
                    f"> radius {exc.radius:.6f}")
    assert time.perf_counter() - t0 < 30.0


# 7 ---------------------------------------------------------------------------

@pytest.mark.criterion_7
def test_c7_spread_refutes_random_covers():
    t0 = time.perf_counter()
    L, rho = 256, 0.8
    src, tgt = lorentz(1, 1), lorentz(2, 2)
    for trial in range(100):
        rng = np.random.default_rng([7, trial])
        m = int(rng.integers(1, 9))
        # centers: images of random points of the source unit ball
        C = sample_unit_sphere(src, L, m, rng) * rng.random((m, 1))
        rep = spread_witness(C, src, tgt, rho, lam=0.1, L=L)
        assert rep.min_distance_to_centers > rho, trial
        assert rep.source_norm <= 1.0 + 1e-12
    assert time.perf_counter() - t0 < 60.0


# 8 ---------------------------------------------------------------------------

@pytest.mark.criterion_8
def test_c8_signflip_refutes_random_centers():
    t0 = time.perf_counter()
    for trial in range(100):
        rng = np.random.default_rng([8, trial])
        m = int(rng.integers(1, 11))
        L = int(rng.integers(m, 4 * m + 1))
        C = rng.uniform(-1.5, 1.5, (m, L))
        rep = signflip_witness(list(C), 0.99)
        assert rep.min_distance_to_centers > 0.99, trial
    assert time.perf_counter() - t0 < 5.0


# 9 ---------------------------------------------------------------------------

@pytest.mark.criterion_9
def test_c9_inequality_audits():
    from lorentzseq.audit import run_audits

    suites, elapsed = timed(run_audits, 10_000, 0)
    assert all(s.cases >= 10_000 for s in suites)
    bad = [(s.name, s.violations, s.min_defect) for s in suites if s.violations]
    assert not bad, f"suites with violations: {bad}"
    assert elapsed < 120.0


# 10 --------------------------------------------------------------------------

@pytest.mark.criterion_10
def test_c10_alpha_brackets_within_norm():
    t0 = time.perf_counter()
    specs = parameter_grid() + [EmbeddingSpec(lorentz(p, p), weighted_lp(p)) for p in (1, 2, 3)]
    checked = 0
    for spec in specs:
        try:
            br = alpha_bracket(spec)
        except UnsupportedPair:
            continue
        if spec.target.kind == "weighted_lp":
            top = 1.0  # ||e^1||_w = ||e^1||_p = 1 and ||x||_w <= ||x||_p
        else:
            v = classify(spec)
            top = (v.exact_norm or v.constant).hi
        assert 0.0 <= br.lo <= br.hi <= top, spec.label()
        checked += 1
    assert checked > 100
    assert time.perf_counter() - t0 < 1.0
